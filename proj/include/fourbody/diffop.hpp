#ifndef FOURBODY_DIFFOP_HPP
#define FOURBODY_DIFFOP_HPP

#include "fourbody/ratfunc.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fourbody {

/** Linear differential operator sum_alpha c_alpha(x) d^alpha with RatFunc
 * coefficients, keyed by derivative multi-index over the shared registry.
 * Derivatives act on geometric variables only; parameter entries of the
 * registry may appear in coefficients but never in a multi-index. */
template <class S>
class DiffOp {
  public:
    using RF = RatFunc<S>;
    using P = Poly<S>;
    using Terms = std::unordered_map<ExpVec, RF, ExpVecHash>;

    DiffOp() = default;
    explicit DiffOp(RegistryPtr reg) : reg_(std::move(reg)) {}

    static DiffOp zero(RegistryPtr reg) { return DiffOp(std::move(reg)); }
    static DiffOp identity(const RegistryPtr& reg) {
        DiffOp op(reg);
        op.add_term(ExpVec(reg->size()), RF::one(reg));
        return op;
    }
    /** Multiplication operator by f. */
    static DiffOp mult(const RegistryPtr& reg, RF f) {
        DiffOp op(reg);
        op.add_term(ExpVec(reg->size()), std::move(f));
        return op;
    }
    /** c * d/dx_i. */
    static DiffOp partial(const RegistryPtr& reg, int i, RF c) {
        DiffOp op(reg);
        if (reg->is_param(i)) throw std::domain_error("derivative w.r.t. parameter");
        op.add_term(ExpVec::unit(reg->size(), i), std::move(c));
        return op;
    }
    static DiffOp partial(const RegistryPtr& reg, const std::string& n, RF c) {
        return partial(reg, reg->index(n), std::move(c));
    }
    static DiffOp partial(const RegistryPtr& reg, int i) {
        return partial(reg, i, RF::one(reg));
    }
    static DiffOp partial(const RegistryPtr& reg, const std::string& n) {
        return partial(reg, reg->index(n), RF::one(reg));
    }

    const RegistryPtr& registry() const { return reg_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    int order() const {
        int o = 0;
        for (const auto& [m, c] : t_) o = std::max(o, m.total());
        return o;
    }

    RF coeff(const ExpVec& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? RF::zero(reg_) : it->second;
    }

    void add_term(const ExpVec& m, RF c) {
        for (int i = 0; i < reg_->size(); ++i)
            if (m[i] && reg_->is_param(i)) throw std::domain_error("derivative w.r.t. parameter");
        if (c.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    DiffOp operator-() const {
        DiffOp r(reg_);
        for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
        return r;
    }
    DiffOp& operator+=(const DiffOp& o) {
        check(o);
        for (const auto& [m, c] : o.t_) {
            auto [it, fresh] = t_.emplace(m, c);
            if (!fresh) {
                it->second += c;
                if (it->second.is_zero()) t_.erase(it);
            }
        }
        return *this;
    }
    DiffOp& operator-=(const DiffOp& o) { return *this += -o; }
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { a += b; return a; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { a -= b; return a; }

    DiffOp& scale(const RF& c) {
        if (c.is_zero()) {
            t_.clear();
            return *this;
        }
        for (auto& [m, v] : t_) v *= c;
        prune();
        return *this;
    }
    DiffOp& scale(const S& c) {
        for (auto& [m, v] : t_) v.scale(c);
        prune();
        return *this;
    }
    friend DiffOp operator*(DiffOp op, const S& c) { op.scale(c); return op; }
    friend DiffOp operator*(const S& c, DiffOp op) { op.scale(c); return op; }

    friend bool operator==(const DiffOp& a, const DiffOp& b) {
        a.check(b);
        for (const auto& [m, c] : a.t_)
            if (!(b.coeff(m) == c)) return false;
        for (const auto& [m, c] : b.t_)
            if (a.t_.find(m) == a.t_.end() && !c.is_zero()) return false;
        return true;
    }
    friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

    /** Apply to a rational function. */
    RF apply(const RF& f) const {
        RF acc = RF::zero(reg_);
        for (const auto& [m, c] : t_) {
            RF g = f;
            for (int i = 0; i < reg_->size(); ++i)
                for (int k = 0; k < m[i]; ++k) g = g.derivative(i);
            acc += c * g;
        }
        return acc;
    }
    RF apply(const P& f) const { return apply(RF(f)); }

    /** Operator composition (this after o): Leibniz expansion of
     * d^alpha (c_beta d^beta). */
    friend DiffOp compose(const DiffOp& a, const DiffOp& b) {
        a.check(b);
        DiffOp r(a.reg_);
        const int n = a.reg_->size();
        for (const auto& [al, ca] : a.t_) {
            for (const auto& [be, cb] : b.t_) {
                // Enumerate gamma <= al componentwise.
                ExpVec gamma(n);
                bool done = false;
                while (!done) {
                    S binom = S::one();
                    for (int i = 0; i < n; ++i) binom *= S::from_int(choose(al[i], gamma[i]));
                    RF dcb = cb;
                    bool vanished = false;
                    for (int i = 0; i < n && !vanished; ++i)
                        for (int k = 0; k < gamma[i]; ++k) {
                            dcb = dcb.derivative(i);
                            if (dcb.is_zero()) { vanished = true; break; }
                        }
                    if (!vanished && !dcb.is_zero()) {
                        ExpVec key = al.minus(gamma).plus(be);
                        r.add_term(key, (ca * dcb) * binom);
                    }
                    // increment gamma in mixed radix bounded by al
                    done = true;
                    for (int i = 0; i < n; ++i) {
                        if (gamma[i] < al[i]) {
                            gamma.bump(i);
                            for (int j = 0; j < i; ++j) gamma.set(j, 0);
                            done = false;
                            break;
                        }
                    }
                }
            }
        }
        return r;
    }

    friend DiffOp commutator(const DiffOp& a, const DiffOp& b) {
        return compose(a, b) - compose(b, a);
    }

    /** Substitute scalars for registry entries in every coefficient.  A
     * variable may be bound only where every derivative term in it ends up
     * with a vanishing coefficient (restriction to the subvariety). */
    DiffOp bind(const std::vector<std::pair<int, S>>& vals) const {
        DiffOp r(reg_);
        for (const auto& [m, c] : t_) r.add_term(m, c.bind(vals));
        for (const auto& [i, v] : vals)
            if (!reg_->is_param(i))
                for (const auto& [m, c] : r.t_)
                    if (m[i]) throw std::domain_error("binding differentiated variable");
        return r;
    }

    /** Deterministic text: one line per multi-index, graded-lex descending. */
    std::string str() const {
        if (t_.empty()) return "0\n";
        std::map<ExpVec, RF, GradedLexGreater> sorted(t_.begin(), t_.end());
        std::string out;
        for (const auto& [m, c] : sorted) {
            std::string d;
            for (int i = 0; i < reg_->size(); ++i) {
                if (!m[i]) continue;
                if (!d.empty()) d += " ";
                d += "d/d" + reg_->name(i);
                if (m[i] > 1) d += "^" + std::to_string(m[i]);
            }
            if (d.empty()) d = "1";
            out += "[" + d + "]  " + c.str() + "\n";
        }
        return out;
    }

  private:
    RegistryPtr reg_;
    Terms t_;

    void check(const DiffOp& o) const {
        if (!compatible(reg_, o.reg_)) throw std::invalid_argument("registry mismatch");
    }
    void prune() {
        for (auto it = t_.begin(); it != t_.end();)
            it = it->second.is_zero() ? t_.erase(it) : std::next(it);
    }
    static long choose(int n, int k) {
        if (k < 0 || k > n) return 0;
        long r = 1;
        for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    }
};

using DiffOpQ = DiffOp<Rat>;

} // namespace fourbody

#endif
