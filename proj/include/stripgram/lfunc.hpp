#pragma once

#include <complex>

#include "stripgram/characters.hpp"
#include "stripgram/rectangle.hpp"

namespace stripgram {

struct EvalResult {
    std::complex<double> value;
    double abs_error;  // bound/estimate on the absolute error
};

// Euler-Maclaurin evaluation of the Hurwitz zeta sum_{k>=0} (k+a)^{-s} for
// Re(s) > 0, a in (0, 1]: `terms` direct terms, then the integral + half term
// and `bernoulli_order` correction terms. The returned abs_error is the
// standard remainder bound (first omitted correction, inflated by
// |s+2J+1|/(sigma+2J+1)). Throws PoleAtOne at s = 1.
EvalResult hurwitz_zeta(std::complex<double> s, double a, int terms, int bernoulli_order);

// eta(s) = sum_{k>=1} (-1)^(k-1) k^{-s} by Chebyshev-coefficient alternating
// series acceleration (Cohen-Rodriguez Villegas-Zagier); n is the
// acceleration order. Valid on Re(s) > 0, pole-free.
EvalResult alternating_zeta(std::complex<double> s, int n);

// Same sum by iterated averaging of partial sums (Euler transformation).
// Independent of alternating_zeta; used to cross-check it.
EvalResult alternating_zeta_euler(std::complex<double> s, int terms);

// Pole-free L-series surrogate: the alternating series (2^{1-s}-1) zeta(s)
// when chi is principal (computed directly as -eta(s), never through the
// prefactor), the Hurwitz combination q^{-s} sum_a chi(a) zeta(s, a/q)
// otherwise. Absolute error <= tol or EvaluationFailure.
std::complex<double> lstar(const DirichletCharacter& chi, std::complex<double> s, double tol);

// || s -> L*(s - it) - L*(s) ||_{L^2(K)}: the quadrature-side shift distance.
// Error contributions from quadrature and evaluation are each kept under
// tol/2; exact 0 at t = 0.
double lstar_l2_distance(const Rectangle& rect, const DirichletCharacter& chi, double t,
                         double tol);

}  // namespace stripgram
