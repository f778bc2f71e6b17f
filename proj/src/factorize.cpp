#include "stripgram/factorize.hpp"

#include <stdexcept>

#include "stripgram/errors.hpp"

namespace stripgram {

UpperFactor::UpperFactor(int order, mpfr_prec_t precision, FactorScale scale)
    : order_(order), precision_(precision), scale_(scale) {
    if (order < 1) throw std::invalid_argument("factor order must be >= 1");
    entries_.assign(static_cast<size_t>(order) * (order + 1) / 2, BigFloat(precision));
}

UpperFactor cholesky(const GramTruncation& A) {
    const int N = A.order();
    const mpfr_prec_t prec = A.precision();
    UpperFactor U(N, prec, FactorScale::gram_family);

    BigFloat t(prec), acc(prec);
    for (int i = 1; i <= N; ++i) {
        // pivot: A(i,i) - sum_{k<i} U(k,i)^2
        mpfr_set(acc.raw(), A.at(i, i).raw(), MPFR_RNDN);
        for (int k = 1; k < i; ++k) {
            mpfr_sqr(t.raw(), U.at(k, i).raw(), MPFR_RNDN);
            mpfr_sub(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
        }
        if (acc.sign() <= 0) throw NotPositiveDefinite(i);
        mpfr_sqrt(U.at(i, i).raw(), acc.raw(), MPFR_RNDN);

        for (int j = i + 1; j <= N; ++j) {
            mpfr_set(acc.raw(), A.at(i, j).raw(), MPFR_RNDN);
            for (int k = 1; k < i; ++k) {
                mpfr_mul(t.raw(), U.at(k, i).raw(), U.at(k, j).raw(), MPFR_RNDN);
                mpfr_sub(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
            }
            mpfr_div(U.at(i, j).raw(), acc.raw(), U.at(i, i).raw(), MPFR_RNDN);
        }
    }
    return U;
}

UpperFactor cholesky_submatrix(const GramTruncation& A) {
    const int N = A.order();
    const mpfr_prec_t prec = A.precision();
    UpperFactor S(N, prec, FactorScale::gram_family);  // holds the shrinking Schur complement
    for (int i = 1; i <= N; ++i)
        for (int j = i; j <= N; ++j) mpfr_set(S.at(i, j).raw(), A.at(i, j).raw(), MPFR_RNDN);

    BigFloat t(prec);
    for (int k = 1; k <= N; ++k) {
        if (S.at(k, k).sign() <= 0) throw NotPositiveDefinite(k);
        mpfr_sqrt(S.at(k, k).raw(), S.at(k, k).raw(), MPFR_RNDN);
        for (int j = k + 1; j <= N; ++j)
            mpfr_div(S.at(k, j).raw(), S.at(k, j).raw(), S.at(k, k).raw(), MPFR_RNDN);
        for (int i = k + 1; i <= N; ++i) {
            for (int j = i; j <= N; ++j) {
                mpfr_mul(t.raw(), S.at(k, i).raw(), S.at(k, j).raw(), MPFR_RNDN);
                mpfr_sub(S.at(i, j).raw(), S.at(i, j).raw(), t.raw(), MPFR_RNDN);
            }
        }
    }
    return S;
}

BigFloat reconstruction_error(const UpperFactor& U, const GramTruncation& A) {
    if (U.order() != A.order()) throw std::invalid_argument("order mismatch");
    const int N = U.order();
    const mpfr_prec_t prec = U.precision();
    BigFloat worst(0.0, prec), acc(prec), t(prec);
    for (int i = 1; i <= N; ++i) {
        for (int j = i; j <= N; ++j) {
            mpfr_set_zero(acc.raw(), 1);
            for (int k = 1; k <= i; ++k) {
                mpfr_mul(t.raw(), U.at(k, i).raw(), U.at(k, j).raw(), MPFR_RNDN);
                mpfr_add(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
            }
            mpfr_sub(acc.raw(), acc.raw(), A.at(i, j).raw(), MPFR_RNDN);
            mpfr_abs(acc.raw(), acc.raw(), MPFR_RNDN);
            if (acc > worst) worst = acc;
        }
    }
    return worst;
}

UpperFactor u_matrix(const Rectangle& rect, int order, mpfr_prec_t precision) {
    UpperFactor U = cholesky(gram_matrix(rect, order, precision));
    BigFloat root2(2.0, precision);
    mpfr_sqrt(root2.raw(), root2.raw(), MPFR_RNDN);
    UpperFactor UK(order, precision, FactorScale::orthonormal_map);
    for (int i = 1; i <= order; ++i)
        for (int j = i; j <= order; ++j)
            mpfr_mul(UK.at(i, j).raw(), U.at(i, j).raw(), root2.raw(), MPFR_RNDN);
    return UK;
}

namespace {

// U x for complex x: real and imaginary parts ride through the real factor
// independently. Returns dense coordinates 1..order at working precision.
void apply_parts(const UpperFactor& U, const FiniteSequence& x, std::vector<BigFloat>& re,
                 std::vector<BigFloat>& im) {
    if (U.scale() != FactorScale::orthonormal_map)
        throw std::invalid_argument("apply_uk needs the orthonormal-map factor (U_K)");
    const int N = U.order();
    const std::uint32_t top = x.max_index();
    if (top > static_cast<std::uint32_t>(N))
        throw SupportExceedsOrder(static_cast<int>(top), N);

    const mpfr_prec_t prec = U.precision();
    re.assign(static_cast<size_t>(N), BigFloat(prec));
    im.assign(static_cast<size_t>(N), BigFloat(prec));
    BigFloat t(prec);
    for (int i = 1; i <= N; ++i) {
        BigFloat& ar = re[static_cast<size_t>(i - 1)];
        BigFloat& ai = im[static_cast<size_t>(i - 1)];
        for (const auto& e : x.entries) {
            const int n = static_cast<int>(e.index);
            if (n < i) continue;  // strictly upper support: (U x)_i needs n >= i
            const BigFloat& u = U.at(i, n);
            if (e.value.real() != 0.0) {
                mpfr_mul_d(t.raw(), u.raw(), e.value.real(), MPFR_RNDN);
                mpfr_add(ar.raw(), ar.raw(), t.raw(), MPFR_RNDN);
            }
            if (e.value.imag() != 0.0) {
                mpfr_mul_d(t.raw(), u.raw(), e.value.imag(), MPFR_RNDN);
                mpfr_add(ai.raw(), ai.raw(), t.raw(), MPFR_RNDN);
            }
        }
    }
}

}  // namespace

std::vector<std::complex<double>> apply_uk(const UpperFactor& U, const FiniteSequence& x) {
    std::vector<BigFloat> re, im;
    apply_parts(U, x, re, im);
    std::vector<std::complex<double>> out(re.size());
    for (size_t i = 0; i < re.size(); ++i) out[i] = {re[i].to_double(), im[i].to_double()};
    return out;
}

double apply_uk_norm(const UpperFactor& U, const FiniteSequence& x) {
    std::vector<BigFloat> re, im;
    apply_parts(U, x, re, im);
    const mpfr_prec_t prec = U.precision();
    BigFloat acc(0.0, prec), t(prec);
    for (size_t i = 0; i < re.size(); ++i) {
        mpfr_sqr(t.raw(), re[i].raw(), MPFR_RNDN);
        mpfr_add(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
        mpfr_sqr(t.raw(), im[i].raw(), MPFR_RNDN);
        mpfr_add(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
    }
    mpfr_sqrt(acc.raw(), acc.raw(), MPFR_RNDN);
    return acc.to_double();
}

std::vector<BigFloat> orthonormal_coeffs(const UpperFactor& U, int n) {
    if (U.scale() != FactorScale::orthonormal_map)
        throw std::invalid_argument("orthonormal_coeffs needs the orthonormal-map factor (U_K)");
    if (n < 1 || n > U.order()) throw std::invalid_argument("orthonormal_coeffs: n out of range");
    const mpfr_prec_t prec = U.precision();
    std::vector<BigFloat> c(static_cast<size_t>(n), BigFloat(prec));

    // back-substitute U c = delta_n over rows n..1
    BigFloat t(prec);
    mpfr_ui_div(c[static_cast<size_t>(n - 1)].raw(), 1, U.at(n, n).raw(), MPFR_RNDN);
    for (int i = n - 1; i >= 1; --i) {
        BigFloat& ci = c[static_cast<size_t>(i - 1)];
        mpfr_set_zero(ci.raw(), 1);
        for (int k = i + 1; k <= n; ++k) {
            mpfr_mul(t.raw(), U.at(i, k).raw(), c[static_cast<size_t>(k - 1)].raw(), MPFR_RNDN);
            mpfr_sub(ci.raw(), ci.raw(), t.raw(), MPFR_RNDN);
        }
        mpfr_div(ci.raw(), ci.raw(), U.at(i, i).raw(), MPFR_RNDN);
    }
    return c;
}

}  // namespace stripgram
