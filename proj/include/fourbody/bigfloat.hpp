#pragma once

#include <mpfr.h>

#include <cassert>
#include <string>
#include <utility>

#include "fourbody/rational.hpp"

namespace fourbody {

/// Process-wide default precision for newly constructed BigFloat values.
inline mpfr_prec_t& bigfloat_precision() {
    static mpfr_prec_t bits = 256;
    return bits;
}

/** Arbitrary-precision binary float (MPFR, round-to-nearest).  Each value
 * carries the precision it was created with; mixed-precision arithmetic
 * rounds into the precision of the left operand's result, which is created
 * at the wider of the two operand precisions. */
class BigFloat {
    mpfr_t v_;

    explicit BigFloat(mpfr_prec_t prec, int) { mpfr_init2(v_, prec); }

    static mpfr_prec_t join(const BigFloat& a, const BigFloat& b) {
        return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
    }

public:
    BigFloat() : BigFloat(0L) {}
    BigFloat(long n) {
        mpfr_init2(v_, bigfloat_precision());
        mpfr_set_si(v_, n, MPFR_RNDN);
    }
    BigFloat(int n) : BigFloat((long)n) {}
    BigFloat(double x) {
        mpfr_init2(v_, bigfloat_precision());
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    explicit BigFloat(const Rat& q) {
        mpfr_init2(v_, bigfloat_precision());
        mpfr_set_q(v_, q.v.get_mpq_t(), MPFR_RNDN);
    }

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// One unit of relative rounding noise at this value's precision.
    static BigFloat epsilon() {
        BigFloat e(1L);
        mpfr_mul_2si(e.v_, e.v_, 1 - (long)mpfr_get_prec(e.v_), MPFR_RNDN);
        return e;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b), 0);
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b), 0);
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b), 0);
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b), 0);
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    BigFloat operator-() const {
        BigFloat r(mpfr_get_prec(v_), 0);
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

    friend BigFloat abs(const BigFloat& a) {
        BigFloat r(mpfr_get_prec(a.v_), 0);
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    /// Square root; negative input is a caller bug.
    friend BigFloat sqrt(const BigFloat& a) {
        assert(mpfr_sgn(a.v_) >= 0);
        BigFloat r(mpfr_get_prec(a.v_), 0);
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    std::string str(int digits = 20) const {
        char buf[128];
        mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, v_);
        return std::string(buf);
    }
};

}  // namespace fourbody
