#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "stripgram/rectangle.hpp"

namespace stripgram {

using Integrand = std::function<std::complex<double>(std::complex<double>)>;

struct QuadratureResult {
    std::complex<double> value;
    double error_estimate;  // absolute, conservative
    long evaluations;
};

// Gauss-Legendre nodes/weights on [-1, 1], any n >= 1 (Newton on the
// Legendre recurrence).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Fixed tensor-product Gauss-Legendre rule over a rectangle.
class TensorRule {
  public:
    TensorRule(const Rectangle& box, int n_sigma, int n_tau);
    const std::vector<double>& sigma_nodes() const { return sx_; }
    const std::vector<double>& sigma_weights() const { return sw_; }
    const std::vector<double>& tau_nodes() const { return tx_; }
    const std::vector<double>& tau_weights() const { return tw_; }

    std::complex<double> integrate(const Integrand& f) const;

  private:
    std::vector<double> sx_, sw_, tx_, tw_;
};

// Adaptive panel-split tensor quadrature of f over the rectangle, absolute
// error target `tol`. Panels use a 16x16 Gauss-Legendre rule; a panel is
// accepted when it agrees with the sum of its four children within its share
// of the budget, and the children's sum is kept. Integrands analytic on the
// rectangle converge spectrally per panel, so few splits are ever needed.
// Throws QuadratureNonConvergence when the depth budget is exhausted.
QuadratureResult integrate_rectangle(const Integrand& f, const Rectangle& box, double tol,
                                     int max_depth = 12);

}  // namespace stripgram
