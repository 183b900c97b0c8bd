#ifndef FOURBODY_POLY_HPP
#define FOURBODY_POLY_HPP

#include "fourbody/rational.hpp"
#include "fourbody/registry.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fourbody {

/** Sparse multivariate polynomial over a scalar field S (Rat or Radical),
 * with exponent vectors keyed on a shared variable registry. The term map is
 * unordered for speed; canonical (graded-lex) order is imposed only when
 * serializing, so printing is deterministic while arithmetic stays O(#terms).
 */
template <class S>
class Poly {
  public:
    using Terms = std::unordered_map<ExpVec, S, ExpVecHash>;

    Poly() = default;
    explicit Poly(RegistryPtr reg) : reg_(std::move(reg)) {}

    static Poly zero(RegistryPtr reg) { return Poly(std::move(reg)); }
    static Poly constant(RegistryPtr reg, const S& c) {
        Poly p(std::move(reg));
        if (!c.is_zero()) p.t_.emplace(ExpVec(p.reg_->size()), c);
        return p;
    }
    static Poly one(RegistryPtr reg) { return constant(std::move(reg), S::one()); }
    static Poly var(RegistryPtr reg, int i, const S& c = S::one()) {
        Poly p(reg);
        if (!c.is_zero()) p.t_.emplace(ExpVec::unit(reg->size(), i), c);
        return p;
    }
    static Poly var(const RegistryPtr& reg, const std::string& name, const S& c = S::one()) {
        return var(reg, reg->index(name), c);
    }
    static Poly monomial(RegistryPtr reg, const ExpVec& m, const S& c) {
        Poly p(std::move(reg));
        if (!c.is_zero()) p.t_.emplace(m, c);
        return p;
    }

    const RegistryPtr& registry() const { return reg_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    int term_count() const { return (int)t_.size(); }

    bool is_constant() const {
        return t_.empty() || (t_.size() == 1 && t_.begin()->first.total() == 0);
    }
    S constant_value() const {
        if (t_.empty()) return S::zero();
        auto it = t_.find(ExpVec(reg_->size()));
        return it == t_.end() ? S::zero() : it->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [m, c] : t_) d = std::max(d, m.total());
        return d;
    }
    /** Degree counting geometric variables only (parameters excluded). */
    int var_degree() const {
        std::vector<bool> mask(reg_->size());
        for (int i = 0; i < reg_->size(); ++i) mask[(std::size_t)i] = !reg_->is_param(i);
        int d = -1;
        for (const auto& [m, c] : t_) d = std::max(d, m.total_masked(mask));
        return d;
    }
    int degree_in(int i) const {
        int d = 0;
        for (const auto& [m, c] : t_) d = std::max(d, m[i]);
        return d;
    }

    S coeff(const ExpVec& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? S::zero() : it->second;
    }

    Poly operator-() const {
        Poly r(reg_);
        for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }

    Poly& operator+=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(a.reg_);
        r.t_.reserve(a.t_.size() * 2 + b.t_.size());
        for (const auto& [ma, ca] : a.t_)
            for (const auto& [mb, cb] : b.t_) r.add_term(ma.plus(mb), ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly& scale(const S& c) {
        if (c.is_zero()) {
            t_.clear();
            return *this;
        }
        for (auto& [m, v] : t_) v *= c;
        return *this;
    }
    friend Poly operator*(Poly p, const S& c) { p.scale(c); return p; }
    friend Poly operator*(const S& c, Poly p) { p.scale(c); return p; }

    Poly pow(int k) const {
        if (k < 0) throw std::domain_error("negative polynomial power");
        Poly r = one(reg_), b = *this;
        while (k) {
            if (k & 1) r *= b;
            if (k >>= 1) b *= b;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        a.check(b);
        if (a.t_.size() != b.t_.size()) return false;
        for (const auto& [m, c] : a.t_) {
            auto it = b.t_.find(m);
            if (it == b.t_.end() || !(it->second == c)) return false;
        }
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /** Partial derivative; rejected for parameter entries, which are formal
     * constants of the operator algebra. */
    Poly derivative(int i) const {
        if (reg_->is_param(i))
            throw std::domain_error("derivative w.r.t. parameter " + reg_->name(i));
        Poly r(reg_);
        for (const auto& [m, c] : t_) {
            int k = m[i];
            if (k == 0) continue;
            ExpVec mm = m;
            mm.set(i, k - 1);
            r.add_term(mm, c * S::from_int(k));
        }
        return r;
    }

    /** Substitute scalars for a subset of registry entries. */
    Poly bind(const std::vector<std::pair<int, S>>& vals) const {
        Poly r(reg_);
        for (const auto& [m, c] : t_) {
            S f = c;
            ExpVec mm = m;
            for (const auto& [i, v] : vals) {
                int k = m[i];
                if (k) {
                    f *= pow_scalar(v, k);
                    mm.set(i, 0);
                }
            }
            r.add_term(mm, f);
        }
        return r;
    }

    /** Full evaluation: vals[i] for every registry entry. */
    S eval(const std::vector<S>& vals) const {
        if ((int)vals.size() != reg_->size()) throw std::invalid_argument("eval arity");
        S acc = S::zero();
        for (const auto& [m, c] : t_) {
            S f = c;
            for (int i = 0; i < reg_->size(); ++i)
                if (m[i]) f *= pow_scalar(vals[(std::size_t)i], m[i]);
            acc += f;
        }
        return acc;
    }

    /** Substitute polynomials (over a target registry) for every registry
     * entry; images[i] must be supplied for each entry with nonzero exponent
     * somewhere. Used for pushforward composition f -> f(phi(x)). */
    Poly subst(const std::vector<Poly>& images) const {
        if (t_.empty()) {
            if (images.empty()) throw std::invalid_argument("subst on zero poly needs a target");
            return Poly(images.front().registry());
        }
        RegistryPtr tgt;
        for (const auto& im : images)
            if (im.reg_) { tgt = im.reg_; break; }
        if (!tgt) throw std::invalid_argument("subst: no target registry");
        Poly acc(tgt);
        std::vector<std::vector<Poly>> powers((std::size_t)reg_->size());
        auto power_of = [&](int i, int k) -> const Poly& {
            auto& cache = powers[(std::size_t)i];
            if (cache.empty()) cache.push_back(one(tgt));
            while ((int)cache.size() <= k) cache.push_back(cache.back() * images[(std::size_t)i]);
            return cache[(std::size_t)k];
        };
        for (const auto& [m, c] : t_) {
            Poly term = constant(tgt, c);
            for (int i = 0; i < reg_->size(); ++i)
                if (m[i]) term *= power_of(i, m[i]);
            acc += term;
        }
        return acc;
    }

    /** Graded-lex leading term (largest monomial). Poly must be nonzero. */
    std::pair<ExpVec, S> leading() const {
        if (t_.empty()) throw std::domain_error("leading term of zero");
        auto it = t_.begin();
        auto best = it;
        for (++it; it != t_.end(); ++it)
            if (graded_lex_greater(it->first, best->first)) best = it;
        return {best->first, best->second};
    }

    /** Exact multivariate division: returns the quotient iff divisor divides
     * this polynomial exactly, std::nullopt otherwise (sound and complete for
     * a monomial order). */
    std::optional<Poly> exact_div(const Poly& divisor) const {
        check(divisor);
        if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
        std::map<ExpVec, S, GradedLexGreater> work;
        for (const auto& [m, c] : t_) work.emplace(m, c);
        auto [dm, dc] = divisor.leading();
        Poly q(reg_);
        while (!work.empty()) {
            auto lead = work.begin();
            if (!dm.divides(lead->first)) return std::nullopt;
            ExpVec qm = lead->first.minus(dm);
            S qc = lead->second / dc;
            q.add_term(qm, qc);
            for (const auto& [m, c] : divisor.t_) {
                ExpVec mm = qm.plus(m);
                auto it = work.find(mm);
                S delta = qc * c;
                if (it == work.end()) {
                    if (!delta.is_zero()) work.emplace(mm, -delta);
                } else {
                    it->second -= delta;
                    if (it->second.is_zero()) work.erase(it);
                }
            }
        }
        return q;
    }

    /** Strip the integer content (Rat scalars only): divides all coefficients
     * by the gcd of numerators times 1/lcm-of-denominators sign-normalized so
     * the leading coefficient is positive. Returns the removed content. */
    S strip_integer_content()
        requires std::is_same_v<S, Rat>
    {
        if (t_.empty()) return S::one();
        mpz_class g = 0, l = 1;
        for (const auto& [m, c] : t_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.v.get_num().get_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.v.get_den().get_mpz_t());
        }
        Rat content{mpq_class(g, l)};
        content.v.canonicalize();
        if (leading().second.sign() < 0) content = -content;
        if (content.is_zero()) return S::one();
        Rat inv = content.inv();
        for (auto& [m, c] : t_) c *= inv;
        return content;
    }

    /** Deterministic text form: graded-lex descending. */
    std::string str() const {
        if (t_.empty()) return "0";
        std::map<ExpVec, S, GradedLexGreater> sorted(t_.begin(), t_.end());
        std::string out;
        for (const auto& [m, c] : sorted) {
            std::string cs = c.str();
            std::string mono = mono_str(m);
            std::string piece;
            if (mono.empty())
                piece = wrap(cs);
            else if (cs == "1")
                piece = mono;
            else if (cs == "-1")
                piece = "-" + mono;
            else
                piece = wrap(cs) + "*" + mono;
            if (out.empty())
                out = piece;
            else if (piece[0] == '-')
                out += " - " + piece.substr(1);
            else
                out += " + " + piece;
        }
        return out;
    }

    void add_term(const ExpVec& m, const S& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = t_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

  private:
    RegistryPtr reg_;
    Terms t_;

    void check(const Poly& o) const {
        if (!compatible(reg_, o.reg_)) throw std::invalid_argument("registry mismatch");
    }

    static S pow_scalar(const S& v, int k) {
        S r = S::one(), b = v;
        while (k) {
            if (k & 1) r *= b;
            b *= b;
            k >>= 1;
        }
        return r;
    }

    std::string mono_str(const ExpVec& m) const {
        std::string out;
        for (int i = 0; i < reg_->size(); ++i) {
            if (!m[i]) continue;
            if (!out.empty()) out += "*";
            out += reg_->name(i);
            if (m[i] > 1) out += "^" + std::to_string(m[i]);
        }
        return out;
    }

    static std::string wrap(const std::string& cs) {
        for (std::size_t i = 1; i < cs.size(); ++i)
            if (cs[i] == '+' || cs[i] == '-') return "(" + cs + ")";
        return cs;
    }
};

using PolyQ = Poly<Rat>;

} // namespace fourbody

#endif
