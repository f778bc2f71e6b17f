#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "stripgram/bigfloat.hpp"
#include "stripgram/quadrature.hpp"
#include "stripgram/rectangle.hpp"

namespace stripgram {

// Closed-form Gram entries of the Dirichlet monomials e_n(s) = n^{-s} on a
// strip rectangle, in log-polar form: with L = log(mn) and x = log(m/n),
//
//   entry(m, n) = radial(L) * angular(x)
//   radial(L)  = (exp(-alpha L) - exp(-beta L)) / L     (beta - alpha at L = 0)
//   angular(x) = sin(gamma x) / x                       (gamma at x = 0)
//
// and <e_m, e_n>_{L^2(K)} = 2 * entry(m, n).

// Scalar factors, exposed for continuity probing near the removable
// singularities. The angular factor switches to a sinc series for
// |gamma x| < 2^(-P/4) so no precision is lost across the x = 0 convention.
double gram_radial_factor(double alpha, double beta, double L);
double gram_angular_factor(double gamma, double x);
BigFloat gram_radial_factor(const BigFloat& alpha, const BigFloat& beta, const BigFloat& L);
BigFloat gram_angular_factor(const BigFloat& gamma, const BigFloat& x);

double gram_entry_d(const Rectangle& rect, std::uint64_t m, std::uint64_t n);
BigFloat gram_entry(const Rectangle& rect, std::uint64_t m, std::uint64_t n, mpfr_prec_t precision);

// Leading N x N block of the Gram family at fixed precision, stored as a
// packed upper triangle (the matrix is symmetric by construction).
class GramTruncation {
  public:
    GramTruncation(const Rectangle& rect, int order, mpfr_prec_t precision);

    int order() const { return order_; }
    mpfr_prec_t precision() const { return precision_; }
    const Rectangle& rect() const { return rect_; }

    // 1-based, symmetric access.
    const BigFloat& at(int m, int n) const {
        if (m > n) std::swap(m, n);
        return upper_[index(m, n)];
    }
    BigFloat max_abs() const;

  private:
    size_t index(int m, int n) const {
        // row m, columns m..N, rows stacked
        return static_cast<size_t>(m - 1) * order_ - static_cast<size_t>(m - 1) * m / 2 + (n - 1);
    }
    Rectangle rect_;
    int order_;
    mpfr_prec_t precision_;
    std::vector<BigFloat> upper_;
};

inline GramTruncation gram_matrix(const Rectangle& rect, int order, mpfr_prec_t precision) {
    return GramTruncation(rect, order, precision);
}

// e_n(s) = n^{-s}
std::complex<double> dirichlet_monomial(std::uint64_t n, std::complex<double> s);

// <f, g>_{L^2(K)} = integral over K of conj(f) * g, conjugate-linear in the
// first argument. Adaptive quadrature with absolute error target tol.
QuadratureResult inner_product(const Rectangle& rect, const Integrand& f, const Integrand& g,
                               double tol);

}  // namespace stripgram
