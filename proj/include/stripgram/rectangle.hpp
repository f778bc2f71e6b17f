#pragma once

#include <stdexcept>
#include <string>

namespace stripgram {

// Closed axis-aligned rectangle [alpha, beta] x [-gamma, gamma] inside the
// open strip 1/2 < Re(s) < 1.
struct Rectangle {
    double alpha;  // left edge
    double beta;   // right edge
    double gamma;  // half-height

    double width() const { return beta - alpha; }
    double height() const { return 2.0 * gamma; }
    double area() const { return width() * height(); }
};

inline void validate(const Rectangle& r) {
    if (!(0.5 < r.alpha && r.alpha < r.beta && r.beta < 1.0))
        throw std::invalid_argument("rectangle requires 1/2 < alpha < beta < 1, got alpha=" +
                                    std::to_string(r.alpha) + " beta=" + std::to_string(r.beta));
    if (!(r.gamma > 0.0))
        throw std::invalid_argument("rectangle requires gamma > 0, got " + std::to_string(r.gamma));
}

inline Rectangle make_rectangle(double alpha, double beta, double gamma) {
    Rectangle r{alpha, beta, gamma};
    validate(r);
    return r;
}

}  // namespace stripgram
