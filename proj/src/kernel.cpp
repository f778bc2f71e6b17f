#include "stripgram/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace stripgram {

double gram_radial_factor(double alpha, double beta, double L) {
    if (L == 0.0) return beta - alpha;
    // exp(-alpha L) * (1 - exp(-(beta-alpha) L)) / L, safe for small widths
    return -std::exp(-alpha * L) * std::expm1(-(beta - alpha) * L) / L;
}

double gram_angular_factor(double gamma, double x) {
    const double u = gamma * x;
    if (std::abs(u) < 9.8e-5) {  // 2^(-53/4)
        const double u2 = u * u;
        return gamma * (1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0)));
    }
    return std::sin(u) / x;
}

BigFloat gram_radial_factor(const BigFloat& alpha, const BigFloat& beta, const BigFloat& L) {
    if (L.is_zero()) return beta - alpha;
    BigFloat r = -(beta - alpha) * L;
    r = expm1(r);
    r = -(exp(-alpha * L) * r);
    return r / L;
}

BigFloat gram_angular_factor(const BigFloat& gamma, const BigFloat& x) {
    const mpfr_prec_t prec = gamma.precision() > x.precision() ? gamma.precision() : x.precision();
    if (x.is_zero()) return gamma.rounded_to(prec);
    const BigFloat u = gamma * x;
    const BigFloat threshold = BigFloat::pow2(-static_cast<long>(prec / 4), prec);
    if (abs(u) < threshold) {
        // sinc series: sum (-1)^j u^(2j) / (2j+1)!, terms fade fast below the
        // threshold; result is sinc(u) * gamma = sin(u)/x.
        const BigFloat u2 = u * u;
        BigFloat term(1.0, prec);
        BigFloat acc(1.0, prec);
        const BigFloat cutoff = BigFloat::pow2(-static_cast<long>(prec) - 8, prec);
        for (long j = 1; j < 64; ++j) {
            term *= u2;
            term = term / BigFloat(2 * j * (2 * j + 1), prec);
            if (j % 2 == 1)
                acc -= term;
            else
                acc += term;
            if (abs(term) < cutoff) break;
        }
        return gamma * acc;
    }
    return sin(u) / x;
}

namespace {

// Entries are formed at prec + 32 guard bits, then rounded once to prec.
BigFloat entry_impl(const Rectangle& rect, std::uint64_t m, std::uint64_t n, mpfr_prec_t prec) {
    const mpfr_prec_t wp = prec + 32;
    const BigFloat alpha(rect.alpha, wp), beta(rect.beta, wp), gamma(rect.gamma, wp);

    BigFloat radial(wp);
    if (m * n == 1) {
        radial = beta - alpha;
    } else {
        radial = gram_radial_factor(alpha, beta, BigFloat::log_of_integer(m * n, wp));
    }

    BigFloat angular(wp);
    if (m == n) {
        angular = gamma.rounded_to(wp);
    } else {
        // log(m/n) = log1p((m-n)/n): the ratio is exact, so no cancellation.
        BigFloat ratio = BigFloat::from_integer_ratio(static_cast<long>(m) - static_cast<long>(n),
                                                      n, wp);
        angular = gram_angular_factor(gamma, log1p(ratio));
    }
    return (radial * angular).rounded_to(prec);
}

}  // namespace

BigFloat gram_entry(const Rectangle& rect, std::uint64_t m, std::uint64_t n, mpfr_prec_t precision) {
    if (m < 1 || n < 1) throw std::invalid_argument("gram_entry requires m, n >= 1");
    if (m > n) std::swap(m, n);  // the formula is even in log(m/n); fix the rounding path too
    return entry_impl(rect, m, n, precision);
}

double gram_entry_d(const Rectangle& rect, std::uint64_t m, std::uint64_t n) {
    if (m < 1 || n < 1) throw std::invalid_argument("gram_entry requires m, n >= 1");
    if (m > n) std::swap(m, n);
    const double radial = (m * n == 1)
                              ? rect.beta - rect.alpha
                              : gram_radial_factor(rect.alpha, rect.beta,
                                                   std::log(static_cast<double>(m) * n));
    const double angular =
        (m == n) ? rect.gamma
                 : gram_angular_factor(rect.gamma,
                                       std::log1p((static_cast<double>(m) - n) / n));
    return radial * angular;
}

GramTruncation::GramTruncation(const Rectangle& rect, int order, mpfr_prec_t precision)
    : rect_(rect), order_(order), precision_(precision) {
    if (order < 1) throw std::invalid_argument("gram_matrix requires N >= 1");
    validate(rect);
    upper_.reserve(static_cast<size_t>(order) * (order + 1) / 2);
    for (int m = 1; m <= order; ++m)
        for (int n = m; n <= order; ++n)
            upper_.push_back(entry_impl(rect, m, n, precision));
}

BigFloat GramTruncation::max_abs() const {
    BigFloat best(0.0, precision_);
    for (const auto& e : upper_) {
        BigFloat a = abs(e);
        if (a > best) best = a;
    }
    return best;
}

std::complex<double> dirichlet_monomial(std::uint64_t n, std::complex<double> s) {
    return std::exp(-s * std::log(static_cast<double>(n)));
}

QuadratureResult inner_product(const Rectangle& rect, const Integrand& f, const Integrand& g,
                               double tol) {
    validate(rect);
    if (!(tol > 0.0)) throw std::invalid_argument("inner_product requires tol > 0");
    auto integrand = [&](std::complex<double> s) { return std::conj(f(s)) * g(s); };
    return integrate_rectangle(integrand, rect, tol);
}

}  // namespace stripgram
