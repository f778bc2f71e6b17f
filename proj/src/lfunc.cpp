#include "stripgram/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stripgram/errors.hpp"
#include "stripgram/kernel.hpp"
#include "stripgram/quadrature.hpp"

namespace stripgram {

namespace {

using cdouble = std::complex<double>;

// B_{2j} / (2j)! for j = 1..32
constexpr double kBernoulliFactorial[33] = {
    0.0,  // unused
    8.3333333333333333333e-02,  -1.3888888888888888889e-03,  3.3068783068783068783e-05,
    -8.2671957671957671958e-07, 2.0876756987868098979e-08,   -5.2841901386874931848e-10,
    1.3382536530684678833e-11,  -3.3896802963225828668e-13,  8.5860620562778445641e-15,
    -2.1748686985580618730e-16, 5.5090028283602295152e-18,   -1.3954464685812523341e-19,
    3.5347070396294674717e-21,  -8.9535174270375468504e-23,  2.2679524523376830603e-24,
    -5.7447906688722024453e-26, 1.4551724756148649019e-27,   -3.6859949406653101782e-29,
    9.3367342570950446720e-31,  -2.3650224157006299346e-32,  5.9906717624821343047e-34,
    -1.5174548844682902617e-35, 3.8437581254541882322e-37,   -9.7363530726466910353e-39,
    2.4662470442006809571e-40,  -6.2470767418207436931e-42,  1.5824030244644914298e-43,
    -4.0082736859489359685e-45, 1.0153075855569556311e-46,   -2.5718041582418717499e-48,
    6.5144560352338149316e-50,  -1.6501309906896524555e-51};

cdouble cpow_real_base(double base, cdouble e) { return std::exp(e * std::log(base)); }

}  // namespace

EvalResult hurwitz_zeta(cdouble s, double a, int terms, int bernoulli_order) {
    if (std::abs(s - 1.0) < 1e-13) throw PoleAtOne();
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("hurwitz_zeta requires a in (0, 1]");
    if (s.real() <= 0.0) throw std::invalid_argument("hurwitz_zeta requires Re(s) > 0");
    const int M = std::max(terms, 1);
    const int J = std::clamp(bernoulli_order, 1, 32);

    cdouble sum = 0.0;
    for (int k = 0; k < M; ++k) sum += std::pow(cdouble(k + a, 0.0), -s);

    const double base = M + a;
    const cdouble pM = cpow_real_base(base, -s);
    sum += pM * base / (s - 1.0);  // (M+a)^{1-s} / (s-1)
    sum += 0.5 * pM;

    // correction terms: C_j * (s)_{2j-1} * (M+a)^{-s-2j+1}
    cdouble poch = s;             // rising factorial, updated two steps at a time
    cdouble decay = pM / base;    // (M+a)^{-s-1}
    const double inv_b2 = 1.0 / (base * base);
    cdouble corrections = 0.0;
    int j = 1;
    for (; j <= J; ++j) {
        corrections += kBernoulliFactorial[j] * poch * decay;
        poch *= (s + cdouble(2 * j - 1)) * (s + cdouble(2 * j));
        decay *= inv_b2;
    }
    sum += corrections;

    // first omitted term, inflated by the standard |s+2J+1| / (sigma+2J+1)
    const int jn = std::min(j, 32);
    const double tail = std::abs(kBernoulliFactorial[jn] * poch * decay) *
                        (std::abs(s + cdouble(2.0 * J + 1.0)) / (s.real() + 2.0 * J + 1.0));
    const double rounding = 4e-16 * (M + J) * std::abs(sum);
    return {sum, tail + rounding};
}

EvalResult alternating_zeta(cdouble s, int n) {
    n = std::max(n, 4);
    // Chebyshev-coefficient acceleration; terms a_k = (k+1)^{-s}
    auto run = [&](int nn) {
        double d = std::pow(3.0 + std::sqrt(8.0), nn);
        d = 0.5 * (d + 1.0 / d);
        double b = -1.0, c = -d;
        cdouble acc = 0.0;
        for (int k = 0; k < nn; ++k) {
            c = b - c;
            acc += c * cpow_real_base(k + 1.0, -s);
            b = (k + nn) * (k - nn) * b / ((k + 0.5) * (k + 1.0));
        }
        return acc / d;
    };
    const cdouble value = run(n);
    const cdouble check = run(std::max(4, n - 6));
    const double err = std::abs(value - check) + 8e-16 * std::abs(value);
    return {value, err};
}

EvalResult alternating_zeta_euler(cdouble s, int terms) {
    const int m = std::max(terms, 8);
    std::vector<cdouble> row(m);
    cdouble partial = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= m; ++k) {
        partial += sign * cpow_real_base(static_cast<double>(k), -s);
        row[k - 1] = partial;
        sign = -sign;
    }
    // iterated averaging of the partial-sum sequence
    cdouble prev_top = row[m - 1];
    double err = std::abs(row[m - 1] - row[m - 2]);
    for (int level = 1; level < m; ++level) {
        for (int i = 0; i + level < m; ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
        err = std::abs(row[0] - prev_top);
        prev_top = row[0];
    }
    return {row[0], err + 8e-16 * std::abs(row[0])};
}

std::complex<double> lstar(const DirichletCharacter& chi, cdouble s, double tol) {
    if (!(s.real() > 0.0)) throw std::invalid_argument("lstar requires Re(s) > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("lstar requires tol > 0");

    if (chi.principal()) {
        // n per the (3+sqrt 8)^{-n} rate, padded for the imaginary part
        int n = static_cast<int>(std::ceil(
                    (std::log(4.0 / tol) + 0.5 * M_PI * std::abs(s.imag()) + 4.0) / 1.7627)) +
                6;
        for (int attempt = 0; attempt < 4; ++attempt) {
            const EvalResult eta = alternating_zeta(s, n);
            if (eta.abs_error <= tol) return -eta.value;
            n = n * 3 / 2;
        }
        throw EvaluationFailure("alternating series did not reach tol " + std::to_string(tol));
    }

    const long q = chi.modulus();
    const double qs = std::pow(static_cast<double>(q), -s.real());
    int nonzero = 0;
    for (long a = 1; a <= q; ++a)
        if (chi.rotation(a) >= 0) ++nonzero;
    const double target_each = tol / (2.0 * qs * nonzero);

    static constexpr int kTermLadder[] = {24, 32, 48, 64, 96, 128, 192, 256, 384, 512};
    cdouble sum = 0.0;
    for (long a = 1; a <= q; ++a) {
        if (chi.rotation(a) < 0) continue;
        EvalResult z{0.0, 0.0};
        bool ok = false;
        for (int M : kTermLadder) {
            const int J = std::min(32, M / 2);
            z = hurwitz_zeta(s, static_cast<double>(a) / q, M, J);
            if (z.abs_error <= target_each) {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw EvaluationFailure("hurwitz_zeta could not reach per-term tol " +
                                    std::to_string(target_each));
        sum += chi.value(a) * z.value;
    }
    return cpow_real_base(static_cast<double>(q), -s) * sum;
}

double lstar_l2_distance(const Rectangle& rect, const DirichletCharacter& chi, double t,
                         double tol) {
    validate(rect);
    if (!(tol > 0.0)) throw std::invalid_argument("lstar_l2_distance requires tol > 0");
    if (t == 0.0) return 0.0;

    // pilot pass: scale of the integrand and of the integral
    double max_diff = 0.0, pilot_integral = 0.0;
    {
        const int np = 4;
        for (int i = 0; i < np; ++i) {
            for (int j = 0; j < np; ++j) {
                const double sigma = rect.alpha + rect.width() * (i + 0.5) / np;
                const double tau = -rect.gamma + rect.height() * (j + 0.5) / np;
                const cdouble s(sigma, tau);
                const double d = std::abs(lstar(chi, s - cdouble(0.0, t), 1e-8) -
                                          lstar(chi, s, 1e-8));
                max_diff = std::max(max_diff, d);
                pilot_integral += d * d;
            }
        }
        pilot_integral *= rect.area() / (np * np);
    }
    const double pilot_norm = std::sqrt(pilot_integral);

    // error split: delta(I) <= 2 D tol keeps delta(D) <= tol; half of the
    // integral budget goes to quadrature, half to evaluation noise
    const double integral_budget =
        std::max(2.0 * pilot_norm * tol, tol * tol) * 0.5;
    const double eval_tol =
        integral_budget / (8.0 * rect.area() * std::max(max_diff, tol));

    auto integrand = [&](cdouble s) -> cdouble {
        const cdouble d = lstar(chi, s - cdouble(0.0, t), eval_tol) - lstar(chi, s, eval_tol);
        return {std::norm(d), 0.0};
    };
    const QuadratureResult I = integrate_rectangle(integrand, rect, integral_budget);
    return std::sqrt(std::max(0.0, I.value.real()));
}

}  // namespace stripgram
