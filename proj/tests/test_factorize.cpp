#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "stripgram/errors.hpp"
#include "stripgram/factorize.hpp"
#include "stripgram/kernel.hpp"
#include "stripgram/quadrature.hpp"

using namespace stripgram;

namespace {

const Rectangle kRect = make_rectangle(0.6, 0.8, 1.0);

Integrand monomial_combination(const std::vector<BigFloat>& coeffs) {
    std::vector<double> c(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i].to_double();
    return [c](std::complex<double> s) {
        std::complex<double> acc = 0.0;
        for (size_t k = 0; k < c.size(); ++k) acc += c[k] * dirichlet_monomial(k + 1, s);
        return acc;
    };
}

Integrand finite_series(const FiniteSequence& x) {
    return [x](std::complex<double> s) {
        std::complex<double> acc = 0.0;
        for (const auto& e : x.entries) acc += e.value * dirichlet_monomial(e.index, s);
        return acc;
    };
}

}  // namespace

TEST_CASE("1x1 factor is the square root of the entry") {
    const auto U = cholesky(gram_matrix(kRect, 1, 128));
    CHECK(U.at(1, 1).to_double() == doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));

    const auto UK = u_matrix(kRect, 1, 128);
    CHECK(UK.at(1, 1).to_double() == doctest::Approx(std::sqrt(0.4)).epsilon(1e-15));
}

TEST_CASE("reconstruction residual at N = 32") {
    // pivots of this family decay ~12.5 bits per order, so order 32 needs
    // ~450 significand bits before the pivots clear the rounding noise
    const GramTruncation A = gram_matrix(kRect, 32, 512);
    const UpperFactor U = cholesky(A);
    for (int n = 1; n <= 32; ++n) CHECK(U.at(n, n).sign() > 0);
    const BigFloat resid = reconstruction_error(U, A);
    // N^2 2^{-P+6} ||A||_max model bound
    const double bound = 32.0 * 32.0 * std::pow(2.0, -506.0) * 0.2;
    CHECK(resid.to_double() <= bound);
}

TEST_CASE("two elimination orders agree exactly at N = 16") {
    // 128 bits cannot factor order 16 (pivot 15 sinks below the noise), so
    // the uniqueness comparison runs at 256 bits. The bordered and
    // right-looking schedules round the same scalar sequence, so agreement
    // is bit-exact; anything less flags an indexing bug in one of them.
    const GramTruncation A = gram_matrix(kRect, 16, 256);
    const UpperFactor U1 = cholesky(A);
    const UpperFactor U2 = cholesky_submatrix(A);
    for (int m = 1; m <= 16; ++m)
        for (int n = m; n <= 16; ++n) CHECK(U1.at(m, n) == U2.at(m, n));
}

TEST_CASE("nesting: order-(N-1) factor is the exact leading block of order N") {
    const GramTruncation A15 = gram_matrix(kRect, 15, 192);
    const GramTruncation A16 = gram_matrix(kRect, 16, 192);
    const UpperFactor U15 = cholesky(A15);
    const UpperFactor U16 = cholesky(A16);
    for (int m = 1; m <= 15; ++m)
        for (int n = m; n <= 15; ++n) CHECK(U15.at(m, n) == U16.at(m, n));
}

TEST_CASE("53-bit factorization breaks down and precision recovers it") {
    const GramTruncation A = gram_matrix(kRect, 64, 53);
    int pivot = 0;
    try {
        cholesky(A);
    } catch (const NotPositiveDefinite& e) {
        pivot = e.pivot;
    }
    REQUIRE(pivot > 0);
    CHECK(pivot <= 64);
    // orders below the failing pivot factor fine at 53 bits
    CHECK_NOTHROW(cholesky(gram_matrix(kRect, pivot - 1, 53)));
    // the same order succeeds once the precision is raised
    const GramTruncation A512 = gram_matrix(kRect, pivot, 512);
    const UpperFactor U = cholesky(A512);
    CHECK(reconstruction_error(U, A512).to_double() <= 1e-120);
}

TEST_CASE("u_matrix: first row identity and tU U = 2A") {
    const int N = 8;
    const GramTruncation A = gram_matrix(kRect, N, 256);
    const UpperFactor UK = u_matrix(kRect, N, 256);

    // U_K(1, n) = 2 a(1,n) / sqrt(2 a(1,1)): e'_1 is e_1 normalized
    const double a11 = gram_entry_d(kRect, 1, 1);
    for (int n = 1; n <= N; ++n) {
        const double expected = 2.0 * gram_entry_d(kRect, 1, n) / std::sqrt(2.0 * a11);
        CHECK(UK.at(1, n).to_double() == doctest::Approx(expected).epsilon(1e-13));
    }

    // tU_K U_K reproduces the doubled Gram matrix
    const mpfr_prec_t prec = 256;
    for (int i = 1; i <= N; ++i) {
        for (int j = i; j <= N; ++j) {
            BigFloat acc(0.0, prec);
            for (int k = 1; k <= i; ++k) acc += UK.at(k, i) * UK.at(k, j);
            const BigFloat target = BigFloat(2.0, prec) * A.at(i, j);
            CHECK(abs(acc - target).to_double() <= 1e-60);
        }
    }
}

TEST_CASE("quadrature check: <e'_1, e_n> matches the first factor row") {
    const UpperFactor UK = u_matrix(kRect, 4, 256);
    const auto c1 = orthonormal_coeffs(UK, 1);
    const Integrand e1p = monomial_combination(c1);
    for (int n = 1; n <= 4; ++n) {
        const auto q = inner_product(
            kRect, e1p, [n](std::complex<double> s) { return dirichlet_monomial(n, s); }, 1e-12);
        CHECK(std::abs(q.value.real() - UK.at(1, n).to_double()) < 1e-10);
    }
}

TEST_CASE("apply_uk on canonical basis vectors") {
    const int N = 12;
    const UpperFactor UK = u_matrix(kRect, N, 256);

    // delta_1 maps to (sqrt(2 (beta-alpha) gamma), 0, ..., 0)
    const auto y1 = apply_uk(UK, FiniteSequence::delta(1));
    REQUIRE(y1.size() == static_cast<size_t>(N));
    CHECK(y1[0].real() == doctest::Approx(std::sqrt(0.4)).epsilon(1e-14));
    for (int i = 1; i < N; ++i) CHECK(y1[i] == std::complex<double>(0.0));

    // delta_n: supported on 1..n with exact zeros above, squared norm 2 a(n,n)
    for (int n : {3, 7, 12}) {
        const auto y = apply_uk(UK, FiniteSequence::delta(n));
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) norm2 += std::norm(y[i]);
        for (int i = n; i < N; ++i) CHECK(y[i] == std::complex<double>(0.0));
        CHECK(norm2 == doctest::Approx(2.0 * gram_entry_d(kRect, n, n)).epsilon(1e-10));
    }
}

TEST_CASE("apply_uk is linear and rejects oversized support") {
    const UpperFactor UK = u_matrix(kRect, 16, 256);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int it = 0; it < 20; ++it) {
        FiniteSequence x, y;
        for (std::uint32_t k = 1; k <= 16; ++k) {
            if (rng() % 2) x.entries.push_back({k, {coeff(rng), coeff(rng)}});
            if (rng() % 2) y.entries.push_back({k, {coeff(rng), coeff(rng)}});
        }
        const std::complex<double> lambda{coeff(rng), coeff(rng)};
        const auto lhs = apply_uk(UK, x + lambda * y);
        const auto xa = apply_uk(UK, x);
        const auto ya = apply_uk(UK, y);
        for (size_t i = 0; i < lhs.size(); ++i)
            CHECK(std::abs(lhs[i] - (xa[i] + lambda * ya[i])) < 1e-12);
    }
    CHECK_THROWS_AS(apply_uk(UK, FiniteSequence::delta(17)), SupportExceedsOrder);
}

TEST_CASE("Parseval: coordinate norm equals the L2 norm of the series") {
    const UpperFactor UK = u_matrix(kRect, 16, 256);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int it = 0; it < 25; ++it) {
        FiniteSequence x;
        for (std::uint32_t k = 1; k <= 16; ++k) {
            double re, im;
            do {
                re = unit(rng);
                im = unit(rng);
            } while (re * re + im * im > 1.0);
            x.entries.push_back({k, {re, im}});
        }
        const double coord_norm = apply_uk_norm(UK, x);
        const auto q = inner_product(kRect, finite_series(x), finite_series(x), 1e-12);
        CHECK(std::abs(coord_norm * coord_norm - q.value.real()) <=
              1e-8 * std::max(q.value.real(), 1e-6));
    }
}

TEST_CASE("orthonormal coefficients: triangle structure and normalization") {
    const UpperFactor UK = u_matrix(kRect, 8, 256);
    const auto c1 = orthonormal_coeffs(UK, 1);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].to_double() == doctest::Approx(1.0 / std::sqrt(0.4)).epsilon(1e-14));

    for (int n = 1; n <= 8; ++n) {
        const auto c = orthonormal_coeffs(UK, n);
        REQUIRE(c.size() == static_cast<size_t>(n));
        CHECK(c[static_cast<size_t>(n - 1)].sign() > 0);
        CHECK(c[static_cast<size_t>(n - 1)].to_double() ==
              doctest::Approx(1.0 / UK.at(n, n).to_double()).epsilon(1e-12));
    }
}

TEST_CASE("quadrature check: e'_n hit the Gram-Schmidt triangle") {
    // the combination coefficients reach ~1e4, so the double-precision
    // integrand carries ~1e-11 cancellation noise; the quadrature tolerance
    // has to sit above that floor
    const int N = 5;
    const UpperFactor UK = u_matrix(kRect, N, 256);
    for (int n = 1; n <= N; ++n) {
        const Integrand en = monomial_combination(orthonormal_coeffs(UK, n));
        for (int k = 1; k <= N; ++k) {
            const auto q = inner_product(
                kRect, en, [k](std::complex<double> s) { return dirichlet_monomial(k, s); },
                1e-8);
            const double expected = k >= n ? UK.at(n, k).to_double() : 0.0;
            CHECK(std::abs(q.value.real() - expected) < 1e-7);
        }
    }
}

TEST_CASE("orthonormality of e'_m under the quadrature oracle") {
    const int N = 6;
    const UpperFactor UK = u_matrix(kRect, N, 256);
    std::vector<Integrand> basis;
    for (int n = 1; n <= N; ++n)
        basis.push_back(monomial_combination(orthonormal_coeffs(UK, n)));
    for (int m = 1; m <= N; ++m) {
        for (int n = m; n <= N; ++n) {
            const auto q = inner_product(kRect, basis[m - 1], basis[n - 1], 1e-8);
            const double expected = m == n ? 1.0 : 0.0;
            CHECK(std::abs(q.value.real() - expected) < 1e-6);
        }
    }
}
