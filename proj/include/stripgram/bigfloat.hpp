#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace stripgram {

// Arbitrary-precision real on top of MPFR, round-to-nearest throughout.
// Precision (significand bits) is fixed per value; binary operations produce
// results at the wider of the two operand precisions. Hot loops that cannot
// afford temporaries use raw() and the MPFR C API directly.
class BigFloat {
  public:
    explicit BigFloat(mpfr_prec_t prec = 53) {
        mpfr_init2(x_, prec);
        mpfr_set_zero(x_, 1);
    }
    BigFloat(double v, mpfr_prec_t prec) {
        mpfr_init2(x_, prec);
        mpfr_set_d(x_, v, MPFR_RNDN);
    }
    BigFloat(long v, mpfr_prec_t prec) {
        mpfr_init2(x_, prec);
        mpfr_set_si(x_, v, MPFR_RNDN);
    }
    BigFloat(const std::string& decimal, mpfr_prec_t prec) {
        mpfr_init2(x_, prec);
        mpfr_set_str(x_, decimal.c_str(), 10, MPFR_RNDN);
    }

    BigFloat(const BigFloat& o) {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(x_, MPFR_PREC_MIN);
        mpfr_swap(x_, o.x_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(x_, o.x_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(x_); }

    mpfr_ptr raw() { return x_; }
    mpfr_srcptr raw() const { return x_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(x_); }

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(x_); }
    bool is_zero() const { return mpfr_zero_p(x_) != 0; }

    // Scientific decimal rendering with `digits` significant digits.
    std::string to_decimal(int digits) const;

    BigFloat rounded_to(mpfr_prec_t prec) const {
        BigFloat r(prec);
        mpfr_set(r.x_, x_, MPFR_RNDN);
        return r;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b));
        mpfr_add(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b));
        mpfr_sub(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b));
        mpfr_mul(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b));
        mpfr_div(r.x_, a.x_, b.x_, MPFR_RNDN);
        return r;
    }
    BigFloat operator-() const {
        BigFloat r(precision());
        mpfr_neg(r.x_, x_, MPFR_RNDN);
        return r;
    }
    BigFloat& operator+=(const BigFloat& o) {
        mpfr_add(x_, x_, o.x_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator-=(const BigFloat& o) {
        mpfr_sub(x_, x_, o.x_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator*=(const BigFloat& o) {
        mpfr_mul(x_, x_, o.x_, MPFR_RNDN);
        return *this;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.x_, b.x_) != 0; }

    friend BigFloat sqrt(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_sqrt(r.x_, a.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat abs(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_abs(r.x_, a.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat exp(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_exp(r.x_, a.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat expm1(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_expm1(r.x_, a.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat log(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_log(r.x_, a.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat log1p(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_log1p(r.x_, a.x_, MPFR_RNDN);
        return r;
    }
    friend BigFloat sin(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_sin(r.x_, a.x_, MPFR_RNDN);
        return r;
    }

    static BigFloat from_integer_ratio(long num, unsigned long den, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_si(r.x_, num, MPFR_RNDN);
        mpfr_div_ui(r.x_, r.x_, den, MPFR_RNDN);
        return r;
    }
    static BigFloat log_of_integer(unsigned long n, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_ui(r.x_, n, MPFR_RNDN);
        mpfr_log(r.x_, r.x_, MPFR_RNDN);
        return r;
    }
    // 2^e, exact
    static BigFloat pow2(long e, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_ui_2exp(r.x_, 1, e, MPFR_RNDN);
        return r;
    }

  private:
    static mpfr_prec_t wider(const BigFloat& a, const BigFloat& b) {
        return a.precision() > b.precision() ? a.precision() : b.precision();
    }
    mpfr_t x_;
};

}  // namespace stripgram
