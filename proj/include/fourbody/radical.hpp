#ifndef FOURBODY_RADICAL_HPP
#define FOURBODY_RADICAL_HPP

#include "fourbody/rational.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace fourbody {

/** Element of the multi-quadratic extension Q(i, sqrt6, sqrt35).
 *
 * Basis indexed by a 3-bit mask: bit0 = i, bit1 = sqrt6, bit2 = sqrt35,
 * so the eight components are
 *   1, i, sqrt6, i*sqrt6, sqrt35, i*sqrt35, sqrt210, i*sqrt210
 * (sqrt210 = sqrt6*sqrt35, and i*sqrt6 plays the role of sqrt(-6)).
 * Products reduce by XOR of masks with the square rules i^2 = -1,
 * sqrt6^2 = 6, sqrt35^2 = 35. This is a degree-8 field over Q, so every
 * nonzero element is invertible (via the product of its conjugates). */
struct Radical {
    std::array<Rat, 8> c;

    Radical() = default;
    Radical(long n) { c[0] = Rat(n); }
    Radical(const Rat& r) { c[0] = r; }

    static Radical zero() { return Radical(); }
    static Radical one() { return Radical(1); }
    static Radical from_int(long n) { return Radical(n); }

    /** The generator with the given mask times a rational coefficient. */
    static Radical unit(unsigned mask, const Rat& r = Rat(1)) {
        if (mask > 7) throw std::invalid_argument("radical mask out of range");
        Radical x;
        x.c[mask] = r;
        return x;
    }
    static Radical imag(const Rat& r = Rat(1)) { return unit(1, r); }
    static Radical sqrt6(const Rat& r = Rat(1)) { return unit(2, r); }
    static Radical sqrt35(const Rat& r = Rat(1)) { return unit(4, r); }
    static Radical sqrt210(const Rat& r = Rat(1)) { return unit(6, r); }
    /** sqrt(-6) = i*sqrt6. */
    static Radical sqrt_m6(const Rat& r = Rat(1)) { return unit(3, r); }

    bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_one() const {
        if (!c[0].is_one()) return false;
        for (int k = 1; k < 8; ++k)
            if (!c[k].is_zero()) return false;
        return true;
    }
    /** True when the element lies in Q (only the mask-0 component set). */
    bool is_rational() const {
        for (int k = 1; k < 8; ++k)
            if (!c[k].is_zero()) return false;
        return true;
    }
    const Rat& rational_part() const { return c[0]; }

    Radical operator-() const {
        Radical r;
        for (int k = 0; k < 8; ++k) r.c[k] = -c[k];
        return r;
    }
    Radical& operator+=(const Radical& o) {
        for (int k = 0; k < 8; ++k) c[k] += o.c[k];
        return *this;
    }
    Radical& operator-=(const Radical& o) {
        for (int k = 0; k < 8; ++k) c[k] -= o.c[k];
        return *this;
    }

    friend Radical operator*(const Radical& a, const Radical& b) {
        Radical r;
        for (int p = 0; p < 8; ++p) {
            if (a.c[p].is_zero()) continue;
            for (int q = 0; q < 8; ++q) {
                if (b.c[q].is_zero()) continue;
                Rat f = a.c[p] * b.c[q];
                int common = p & q;
                if (common & 1) f *= Rat(-1);
                if (common & 2) f *= Rat(6);
                if (common & 4) f *= Rat(35);
                r.c[p ^ q] += f;
            }
        }
        return r;
    }
    Radical& operator*=(const Radical& o) { return *this = *this * o; }

    friend Radical operator+(Radical a, const Radical& b) { a += b; return a; }
    friend Radical operator-(Radical a, const Radical& b) { a -= b; return a; }
    friend bool operator==(const Radical& a, const Radical& b) { return a.c == b.c; }
    friend bool operator!=(const Radical& a, const Radical& b) { return !(a == b); }

    /** Conjugate flipping the sign of the generators selected by mask bits. */
    Radical conj(unsigned mask) const {
        Radical r;
        for (int k = 0; k < 8; ++k)
            r.c[k] = (k & mask) ? ((__builtin_popcount((unsigned)(k & mask)) & 1) ? -c[k] : c[k]) : c[k];
        return r;
    }

    Radical inv() const {
        if (is_zero()) throw std::domain_error("inverse of zero radical");
        // Multiply by all seven nontrivial conjugates; the full product is the
        // field norm, a nonzero rational.
        Radical num = one();
        for (unsigned m = 1; m < 8; ++m) num *= conj(m);
        Radical norm = num * *this;
        if (!norm.is_rational() || norm.c[0].is_zero())
            throw std::domain_error("radical norm failure");
        Rat n = norm.c[0];
        Radical r;
        for (int k = 0; k < 8; ++k) r.c[k] = num.c[k] / n;
        return r;
    }
    friend Radical operator/(const Radical& a, const Radical& b) { return a * b.inv(); }
    Radical& operator/=(const Radical& o) { return *this = *this * o.inv(); }

    std::string str() const {
        static const char* names[8] = {"", "i", "r6", "i*r6", "r35", "i*r35", "r210", "i*r210"};
        std::string out;
        for (int k = 0; k < 8; ++k) {
            if (c[k].is_zero()) continue;
            std::string piece = c[k].str();
            if (k != 0) piece += std::string("*") + names[k];
            if (out.empty())
                out = piece;
            else if (piece[0] == '-')
                out += piece;
            else
                out += "+" + piece;
        }
        return out.empty() ? "0" : out;
    }

    std::size_t hash() const {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto& x : c) h = h * 0x100000001b3ULL ^ x.hash();
        return h;
    }
};

} // namespace fourbody

#endif
