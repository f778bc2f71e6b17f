#pragma once

#include <complex>
#include <vector>

#include "stripgram/bigfloat.hpp"
#include "stripgram/characters.hpp"
#include "stripgram/kernel.hpp"

namespace stripgram {

// Which matrix an UpperFactor factors: the Gram family itself (A = tU U) or
// the inner-product matrix (<e_m, e_n>) = 2A, whose factor is sqrt(2) U.
enum class FactorScale { gram_family, orthonormal_map };

// Upper-triangular Cholesky factor with strictly positive diagonal, packed by
// rows. No pivoting anywhere: the basis order n = 1, 2, 3, ... is part of the
// object's meaning, and breakdown is remedied by precision, never by
// permutation.
class UpperFactor {
  public:
    UpperFactor(int order, mpfr_prec_t precision, FactorScale scale);

    int order() const { return order_; }
    mpfr_prec_t precision() const { return precision_; }
    FactorScale scale() const { return scale_; }

    // 1-based; requires m <= n
    const BigFloat& at(int m, int n) const { return entries_[index(m, n)]; }
    BigFloat& at(int m, int n) { return entries_[index(m, n)]; }

  private:
    size_t index(int m, int n) const {
        return static_cast<size_t>(m - 1) * order_ - static_cast<size_t>(m - 1) * m / 2 + (n - 1);
    }
    int order_;
    mpfr_prec_t precision_;
    FactorScale scale_;
    std::vector<BigFloat> entries_;
};

// Row-bordered Cholesky of the symmetric positive-definite truncation, at the
// truncation's working precision. Throws NotPositiveDefinite with the 1-based
// pivot index on breakdown. Entry (i, j) depends only on rows < i, so the
// leading block of an order-N factor is bit-identical to the order-(N-1)
// factor.
UpperFactor cholesky(const GramTruncation& A);

// Same factor by the right-looking (submatrix update) elimination order;
// results agree with cholesky() to last-digit rounding. Kept as an
// independent implementation for cross-validation.
UpperFactor cholesky_submatrix(const GramTruncation& A);

// max |tU U - A| over all entries, evaluated at the factor's precision.
BigFloat reconstruction_error(const UpperFactor& U, const GramTruncation& A);

// U_K = sqrt(2) * cholesky(A): the matrix of the orthonormalization map on
// the canonical basis, i.e. the Cholesky factor of (<e_m, e_n>) = 2A.
UpperFactor u_matrix(const Rectangle& rect, int order, mpfr_prec_t precision);

// Coordinates of f_x in the orthonormal family: the product U x over the
// dense range 1..order, computed at the factor's precision and rounded on
// return. Requires scale orthonormal_map and support(x) <= order
// (SupportExceedsOrder otherwise). Coordinates at indices beyond the support
// maximum are exact zeros.
std::vector<std::complex<double>> apply_uk(const UpperFactor& U, const FiniteSequence& x);

// l2 norm of apply_uk(U, x), accumulated entirely at working precision.
double apply_uk_norm(const UpperFactor& U, const FiniteSequence& x);

// Coefficients c(1..n) with e'_n = sum_k c(k) e_k: column n of the inverse
// factor by back-substitution. c(n) = 1/U(n,n) > 0.
std::vector<BigFloat> orthonormal_coeffs(const UpperFactor& U, int n);

}  // namespace stripgram
