#ifndef FOURBODY_METRIC_HPP
#define FOURBODY_METRIC_HPP

#include "fourbody/diffop.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace fourbody {

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
Mat<T> make_mat(int n, const T& fill) {
    return Mat<T>(n, std::vector<T>(n, fill));
}

/** Determinant by Laplace expansion along rows with minors cached per column
 * subset; 2^n minors total, fine through n ~ 12 and exact. */
template <class S>
Poly<S> poly_det(const Mat<Poly<S>>& m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) throw std::invalid_argument("empty matrix");
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("matrix not square");
    const RegistryPtr& reg = m[0][0].registry();

    std::unordered_map<std::uint64_t, Poly<S>> cache;
    // minor over column set `mask`, rows n-popcount(mask) .. n-1
    auto rec = [&](auto&& self, std::uint64_t mask) -> Poly<S> {
        if (!mask) return Poly<S>::one(reg);
        auto it = cache.find(mask);
        if (it != cache.end()) return it->second;
        const int k = __builtin_popcountll(mask);
        const int row = n - k;
        Poly<S> acc = Poly<S>::zero(reg);
        int sign = 1, pos = 0;
        for (int col = 0; col < n; ++col) {
            if (!(mask >> col & 1)) continue;
            if (!m[row][col].is_zero())
                acc += m[row][col] * self(self, mask & ~(1ULL << col)) *
                       Poly<S>::constant(reg, sign > 0 ? S::one() : -S::one());
            sign = -sign;
            ++pos;
        }
        cache.emplace(mask, acc);
        return acc;
    };
    return rec(rec, n == 64 ? ~0ULL : (1ULL << n) - 1);
}

/** constant * prod_k base_k^{mult_k}, the certified shape of a determinant. */
template <class S>
struct FactoredPoly {
    S constant = S::one();
    std::vector<std::pair<Poly<S>, int>> factors;

    Poly<S> expanded(const RegistryPtr& reg) const {
        Poly<S> p = Poly<S>::constant(reg, constant);
        for (const auto& [b, e] : factors)
            for (int k = 0; k < e; ++k) p = p * b;
        return p;
    }
};

/** Divide `det` by each candidate base as often as it goes, exactly.  The
 * certificate exists iff the final quotient is a nonzero constant; each
 * division step is an exact multivariate division with zero remainder. */
template <class S>
std::optional<FactoredPoly<S>> factor_certificate(const Poly<S>& det,
                                                  const std::vector<Poly<S>>& bases) {
    if (det.is_zero()) return std::nullopt;
    FactoredPoly<S> out;
    Poly<S> rem = det;
    for (const auto& b : bases) {
        int e = 0;
        for (;;) {
            auto q = rem.exact_div(b);
            if (!q) break;
            rem = std::move(*q);
            ++e;
        }
        if (e) out.factors.emplace_back(b, e);
    }
    if (!rem.is_constant()) return std::nullopt;
    out.constant = rem.constant_value();
    return out;
}

/** Contravariant metric read off the second-order part of an operator:
 * g^{ii} = coeff(d_i^2), g^{ij} = coeff(d_i d_j)/2 for i < j. */
template <class S>
Mat<RatFunc<S>> metric_of(const DiffOp<S>& op) {
    const RegistryPtr& reg = op.registry();
    const int n = reg->size();
    auto g = make_mat(n, RatFunc<S>::zero(reg));
    const S half = S::from_int(1) / S::from_int(2);
    for (const auto& [m, c] : op.terms()) {
        if (m.total() != 2) continue;
        int i = -1, j = -1;
        for (int k = 0; k < n; ++k) {
            if (m[k] == 2) { i = j = k; break; }
            if (m[k] == 1) (i < 0 ? i : j) = k;
        }
        if (i == j) {
            g[i][i] = c;
        } else {
            RatFunc<S> h = c;
            h.scale(half);
            g[i][j] = h;
            g[j][i] = h;
        }
    }
    return g;
}

/** Laplace-Beltrami operator of a contravariant metric whose determinant is
 * known in factored form D = const * prod F_k^{e_k}:
 *   L = sum_ij g^{ij} d_i d_j + sum_j [ sum_i d_i g^{ij}
 *        - (1/2) sum_i g^{ij} sum_k e_k (d_i F_k)/F_k ] d_j .
 * Only variables flagged `active` (default: all geometric entries) are
 * treated as coordinates. */
template <class S>
DiffOp<S> laplace_beltrami(const RegistryPtr& reg, const Mat<RatFunc<S>>& ginv,
                           const FactoredPoly<S>& det,
                           const std::vector<int>& coords) {
    DiffOp<S> op(reg);
    std::vector<RatFunc<S>> dlogD;
    dlogD.reserve(coords.size());
    for (int i : coords) {
        RatFunc<S> acc = RatFunc<S>::zero(reg);
        for (const auto& [f, e] : det.factors)
            acc += RatFunc<S>::quotient(f.derivative(i), f) * S::from_int(e);
        dlogD.push_back(acc);
    }
    const S half = S::from_int(1) / S::from_int(2);
    for (std::size_t a = 0; a < coords.size(); ++a) {
        const int i = coords[a];
        for (std::size_t b = 0; b < coords.size(); ++b) {
            const int j = coords[b];
            if (ginv[i][j].is_zero()) continue;
            ExpVec m(reg->size());
            m.bump(i);
            m.bump(j);
            op.add_term(m, ginv[i][j]);
        }
    }
    for (std::size_t b = 0; b < coords.size(); ++b) {
        const int j = coords[b];
        RatFunc<S> drift = RatFunc<S>::zero(reg);
        for (std::size_t a = 0; a < coords.size(); ++a) {
            const int i = coords[a];
            if (ginv[i][j].is_zero()) continue;
            drift += ginv[i][j].derivative(i);
            RatFunc<S> t = ginv[i][j] * dlogD[a];
            t.scale(half);
            drift -= t;
        }
        if (!drift.is_zero()) op.add_term(ExpVec::unit(reg->size(), j), drift);
    }
    return op;
}

} // namespace fourbody

#endif
