#ifndef FOURBODY_RATIONAL_HPP
#define FOURBODY_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fourbody {

/** Exact arbitrary-precision rational, a thin value wrapper around GMP's
 * mpq_class that owns hashing, parsing and the scalar interface the
 * polynomial layer expects. Always kept canonical (gmp canonicalizes on
 * construction and arithmetic). */
struct Rat {
    mpq_class v;

    Rat() : v(0) {}
    Rat(long n) : v(n) {}
    Rat(long n, unsigned long den) : v(n, den) { v.canonicalize(); }
    explicit Rat(const mpq_class& q) : v(q) {}

    static Rat zero() { return Rat(); }
    static Rat one() { return Rat(1); }
    static Rat from_int(long n) { return Rat(n); }

    /** Parses "a", "-a", or "a/b". Throws std::invalid_argument on junk. */
    static Rat parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
        q.canonicalize();
        return Rat(q);
    }

    bool is_zero() const { return sgn(v) == 0; }
    bool is_one() const { return v == 1; }
    int sign() const { return sgn(v); }

    Rat operator-() const { return Rat(mpq_class(-v)); }
    Rat& operator+=(const Rat& o) { v += o.v; return *this; }
    Rat& operator-=(const Rat& o) { v -= o.v; return *this; }
    Rat& operator*=(const Rat& o) { v *= o.v; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("rational division by zero");
        v /= o.v;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }
    friend bool operator==(const Rat& a, const Rat& b) { return a.v == b.v; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v != b.v; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v < b.v; }

    Rat inv() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        return Rat(mpq_class(1 / v));
    }

    Rat pow(long e) const {
        if (e < 0) return inv().pow(-e);
        Rat r = one(), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    Rat abs() const { return sign() < 0 ? -*this : *this; }

    double to_double() const { return v.get_d(); }

    std::string str() const { return v.get_str(); }

    std::size_t hash() const {
        // Hash over limb data of numerator and denominator.
        auto h = [](mpz_srcptr z, std::size_t seed) {
            std::size_t acc = seed ^ (std::size_t)mpz_sgn(z);
            for (std::size_t i = 0, n = mpz_size(z); i < n; ++i)
                acc = acc * 1099511628211ULL + (std::size_t)mpz_getlimbn(z, i);
            return acc;
        };
        return h(mpq_denref(v.get_mpq_t()), h(mpq_numref(v.get_mpq_t()), 0xb4f0d3));
    }
};

/** Exact gcd/lcm helpers on integers embedded in Rat (used for integer
 * content stripping; both arguments must be integral). */
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.v.get_num().get_mpz_t(), b.v.get_num().get_mpz_t());
    return Rat(mpq_class(g));
}

} // namespace fourbody

#endif
