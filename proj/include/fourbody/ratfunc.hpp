#ifndef FOURBODY_RATFUNC_HPP
#define FOURBODY_RATFUNC_HPP

#include "fourbody/poly.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fourbody {

/** Rational function numerator / product of denominator factors.
 *
 * Denominators are kept factored as (base, exponent) pairs and bases combine
 * only by syntactic polynomial equality; no multivariate gcd is ever
 * computed, and equality testing is by cross-multiplication (after cancelling
 * exponents of syntactically shared bases, which is sound over an integral
 * domain). This keeps the chained gauge/metric computations from exploding:
 * their denominators all live on a handful of registered base polynomials. */
template <class S>
class RatFunc {
  public:
    using P = Poly<S>;
    using Factor = std::pair<P, int>;

    RatFunc() = default;
    RatFunc(P n) : num_(std::move(n)) {}
    RatFunc(P n, const P& d) : num_(std::move(n)) { push_den(d, 1); canonicalize(); }

    static RatFunc zero(RegistryPtr reg) { return RatFunc(P::zero(std::move(reg))); }
    static RatFunc one(RegistryPtr reg) { return RatFunc(P::one(std::move(reg))); }
    static RatFunc constant(RegistryPtr reg, const S& c) {
        return RatFunc(P::constant(std::move(reg), c));
    }
    static RatFunc var(const RegistryPtr& reg, const std::string& n) {
        return RatFunc(P::var(reg, n));
    }
    static RatFunc quotient(P n, const P& d) { return RatFunc(std::move(n), d); }
    /** num / prod bases[k]^exps[k]; bases must be nonzero. */
    static RatFunc quotient(P n, const std::vector<Factor>& den) {
        RatFunc r(std::move(n));
        for (const auto& [b, e] : den) r.push_den(b, e);
        r.canonicalize();
        return r;
    }

    const P& num() const { return num_; }
    const std::vector<Factor>& den() const { return den_; }
    const RegistryPtr& registry() const { return num_.registry(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.empty(); }

    /** The numerator, asserting the denominator is trivial. */
    const P& as_poly() const {
        if (!den_.empty()) throw std::domain_error("as_poly on a proper rational function");
        return num_;
    }

    P den_expanded() const {
        P d = P::one(num_.registry());
        for (const auto& [b, e] : den_) d *= b.pow(e);
        return d;
    }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        RatFunc r;
        r.den_ = a.den_;
        for (const auto& [bb, be] : b.den_) {
            auto* f = r.find_base(bb);
            if (f)
                f->second = std::max(f->second, be);
            else
                r.den_.emplace_back(bb, be);
        }
        P na = a.num_, nb = b.num_;
        for (const auto& [bb, be] : r.den_) {
            int ea = a.exp_of(bb), eb = b.exp_of(bb);
            if (be > ea) na *= bb.pow(be - ea);
            if (be > eb) nb *= bb.pow(be - eb);
        }
        r.num_ = na + nb;
        r.canonicalize();
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }

    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        RatFunc r(a.num_ * b.num_);
        r.den_ = a.den_;
        for (const auto& [bb, be] : b.den_) r.push_den(bb, be);
        r.canonicalize();
        return r;
    }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    RatFunc reciprocal() const {
        if (num_.is_zero()) throw std::domain_error("reciprocal of zero rational function");
        RatFunc r(den_expanded());
        if (num_.is_constant()) {
            r.num_.scale(num_.constant_value().is_zero() ? S::one()
                                                         : inv_scalar(num_.constant_value()));
        } else {
            r.push_den(num_, 1);
        }
        r.canonicalize();
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.reciprocal(); }

    RatFunc& scale(const S& c) {
        num_.scale(c);
        if (num_.is_zero()) den_.clear();
        return *this;
    }
    friend RatFunc operator*(RatFunc r, const S& c) { r.scale(c); return r; }
    friend RatFunc operator*(const S& c, RatFunc r) { r.scale(c); return r; }

    /** Quotient-rule derivative; denominator exponents grow by one. */
    RatFunc derivative(int i) const {
        if (den_.empty()) return RatFunc(num_.derivative(i));
        RatFunc r;
        P lead = num_.derivative(i);
        for (const auto& [b, e] : den_) lead *= b;  // dn * prod b_k
        P corr = P::zero(num_.registry());
        for (std::size_t k = 0; k < den_.size(); ++k) {
            P piece = num_ * den_[k].first.derivative(i) * S::from_int(den_[k].second);
            for (std::size_t j = 0; j < den_.size(); ++j)
                if (j != k) piece *= den_[j].first;
            corr += piece;
        }
        r.num_ = lead - corr;
        r.den_ = den_;
        for (auto& [b, e] : r.den_) ++e;
        r.canonicalize();
        return r;
    }

    /** Exact equality via cross-multiplication with shared bases cancelled. */
    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        if (a.num_.is_zero()) return b.num_.is_zero();
        if (b.num_.is_zero()) return false;
        P left = a.num_, right = b.num_;
        for (const auto& [bb, be] : b.den_) {
            int shared = a.exp_of(bb);
            if (int rem = be - std::min(be, shared); rem > 0) left *= bb.pow(rem);
        }
        for (const auto& [ab, ae] : a.den_) {
            int shared = b.exp_of(ab);
            if (int rem = ae - std::min(ae, shared); rem > 0) right *= ab.pow(rem);
        }
        return left == right;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    /** Substitute scalars for registry entries (parameters or variables) in
     * numerator and bases; bases that collapse to constants fold out. */
    RatFunc bind(const std::vector<std::pair<int, S>>& vals) const {
        RatFunc r(num_.bind(vals));
        for (const auto& [b, e] : den_) r.push_den(b.bind(vals), e);
        r.canonicalize();
        return r;
    }

    S eval(const std::vector<S>& vals) const {
        S d = S::one();
        for (const auto& [b, e] : den_) {
            S bv = b.eval(vals);
            if (bv.is_zero()) throw std::domain_error("rational function pole");
            for (int k = 0; k < e; ++k) d *= bv;
        }
        return num_.eval(vals) / d;
    }

    /** Compose with a polynomial map (images indexed by registry position). */
    RatFunc subst(const std::vector<P>& images) const {
        RatFunc r(num_.subst(images));
        for (const auto& [b, e] : den_) r.push_den(b.subst(images), e);
        r.canonicalize();
        return r;
    }

    std::string str() const {
        std::string n = num_.str();
        if (den_.empty()) return n;
        std::vector<std::string> parts;
        for (const auto& [b, e] : den_) {
            std::string s = "(" + b.str() + ")";
            if (e > 1) s += "^" + std::to_string(e);
            parts.push_back(s);
        }
        std::sort(parts.begin(), parts.end());
        std::string d = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) d += "*" + parts[i];
        return "(" + n + ") / " + d;
    }

  private:
    P num_;
    std::vector<Factor> den_;

    Factor* find_base(const P& b) {
        for (auto& f : den_)
            if (f.first == b) return &f;
        return nullptr;
    }
    int exp_of(const P& b) const {
        for (const auto& f : den_)
            if (f.first == b) return f.second;
        return 0;
    }

    void push_den(const P& b, int e) {
        if (e == 0) return;
        if (b.is_zero()) throw std::domain_error("zero denominator factor");
        if (e < 0) throw std::domain_error("negative denominator exponent");
        if (auto* f = find_base(b))
            f->second += e;
        else
            den_.emplace_back(b, e);
    }

    static S inv_scalar(const S& c) {
        S r = S::one();
        r /= c;
        return r;
    }

    void canonicalize() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        // Fold constant bases into the numerator.
        std::vector<Factor> keep;
        for (auto& [b, e] : den_) {
            if (b.is_constant()) {
                S c = b.constant_value();
                if (c.is_zero()) throw std::domain_error("zero denominator factor");
                S f = S::one();
                for (int k = 0; k < e; ++k) f *= c;
                num_.scale(inv_scalar(f));
            } else {
                keep.emplace_back(std::move(b), e);
            }
        }
        den_ = std::move(keep);
    }
};

using RatFuncQ = RatFunc<Rat>;

} // namespace fourbody

#endif
