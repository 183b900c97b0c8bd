#ifndef FOURBODY_GAUGE_HPP
#define FOURBODY_GAUGE_HPP

#include "fourbody/diffop.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fourbody {

/** Multiplicative gauge factor  G = prod_k b_k(x)^{e_k} * exp(q(x))  with
 * polynomial bases b_k, exponents e_k that may involve registry parameters,
 * and polynomial argument q.  Only log-derivatives of G are ever formed, so
 * fractional exponents stay exact. */
template <class S>
struct GaugeFactor {
    using RF = RatFunc<S>;
    using P = Poly<S>;

    RegistryPtr reg;
    std::vector<std::pair<P, RF>> powers; // (base, exponent)
    P exp_arg;                            // q

    explicit GaugeFactor(RegistryPtr r) : reg(std::move(r)), exp_arg(P::zero(reg)) {}

    GaugeFactor& with_power(P base, RF exponent) {
        powers.emplace_back(std::move(base), std::move(exponent));
        return *this;
    }
    GaugeFactor& with_power(P base, const S& exponent) {
        return with_power(std::move(base), RF::constant(reg, exponent));
    }
    GaugeFactor& with_exp(P q) {
        exp_arg += q;
        return *this;
    }

    GaugeFactor inverse() const {
        GaugeFactor g(reg);
        for (const auto& [b, e] : powers) g.powers.emplace_back(b, -e);
        g.exp_arg = -exp_arg;
        return g;
    }

    /** d/dx_i log G = sum_k e_k b_k'/b_k + q'. */
    RF log_derivative(int i) const {
        RF acc(exp_arg.derivative(i));
        for (const auto& [b, e] : powers)
            acc += e * RF::quotient(b.derivative(i), b);
        return acc;
    }

    /** Numeric value at a full registry point; bases must be positive. */
    double eval_double(const std::vector<S>& point) const {
        double v = std::exp(exp_arg.eval(point).to_double());
        for (const auto& [b, e] : powers) {
            double base = b.eval(point).to_double();
            if (base <= 0.0) throw std::domain_error("gauge base not positive at point");
            v *= std::pow(base, e.eval(point).to_double());
        }
        return v;
    }
};

/** G^{-1} H G for any differential order: every d_i is replaced by
 * d_i + (log G)_i and the products re-expanded.  The first-order shifted
 * fields commute because the shift is a gradient. */
template <class S>
DiffOp<S> conjugated(const DiffOp<S>& H, const GaugeFactor<S>& g) {
    const RegistryPtr& reg = H.registry();
    const int n = reg->size();
    std::vector<RatFunc<S>> logd(n, RatFunc<S>::zero(reg));
    std::vector<bool> have(n, false);

    DiffOp<S> out(reg);
    for (const auto& [alpha, c] : H.terms()) {
        DiffOp<S> prod = DiffOp<S>::identity(reg);
        for (int i = 0; i < n; ++i) {
            if (!alpha[i]) continue;
            if (!have[i]) {
                logd[i] = g.log_derivative(i);
                have[i] = true;
            }
            DiffOp<S> field = DiffOp<S>::partial(reg, i, RatFunc<S>::one(reg));
            field += DiffOp<S>::mult(reg, logd[i]);
            for (int k = 0; k < alpha[i]; ++k) prod = compose(prod, field);
        }
        prod.scale(c);
        out += prod;
    }
    return out;
}

} // namespace fourbody

#endif
