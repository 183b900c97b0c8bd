#pragma once
// Volume-variable form of the n-site radial operator. The operator on the
// content sums V_2..V_n has a fixed term shape whose coefficients are
// constants; a few carry closed forms in n, the rest are derived here by an
// exact linear solve against the radial images and certified by zero
// residuals on low-degree monomials.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fourbody/catalog.hpp"
#include "fourbody/diffop.hpp"
#include "fourbody/linalg.hpp"
#include "fourbody/poly.hpp"
#include "fourbody/rational.hpp"
#include "fourbody/registry.hpp"
#include "fourbody/tetra.hpp"

namespace fourbody {

/// Radial reduction of the mass-weighted half flat Laplacian for nsites
/// sites: 2(1/m_i+1/m_j) r_e d_e^2 + (1/m_i+1/m_j) dim d_e per edge and
/// (2/m_vertex)(r_a + r_b - r_opp) d_a d_b per adjacent pair.
inline DiffOpQ nbody_radial(const RegistryPtr& reg, int nsites,
                            const std::vector<Rat>& mass,
                            const RatFuncQ& dim) {
    if (nsites < 2 || nsites > 6)
        throw std::invalid_argument("nbody_radial: site count out of range");
    if ((int)mass.size() != nsites)
        throw std::invalid_argument("nbody_radial: one mass per site");
    const int n = reg->size();
    auto pairs = edge_pairs(nsites);
    DiffOpQ op = DiffOpQ::zero(reg);
    for (std::size_t v = 0; v < pairs.size(); ++v) {
        auto [i, j] = pairs[v];
        Rat imu = mass[(std::size_t)i - 1].inv() + mass[(std::size_t)j - 1].inv();
        op.add_term(ExpVec::unit(n, (int)v, 2),
                    RatFuncQ(PolyQ::var(reg, (int)v) * (Rat(2) * imu)));
        op.add_term(ExpVec::unit(n, (int)v), dim * imu);
    }
    for (const auto& t : shared_edge_triples(nsites)) {
        PolyQ c = PolyQ::var(reg, t.a) + PolyQ::var(reg, t.b) -
                  PolyQ::var(reg, t.opp);
        ExpVec m(n);
        m.bump(t.a);
        m.bump(t.b);
        op.add_term(m, RatFuncQ(c * (Rat(2) / mass[(std::size_t)t.vertex - 1])));
    }
    return op;
}

inline DiffOpQ nbody_radial(const RegistryPtr& reg, int nsites,
                            const std::vector<Rat>& mass) {
    return nbody_radial(reg, nsites, mass, param_rf(reg, "d"));
}

/// Chart registry of the volume variables V2..Vn with the dimension
/// parameter.
inline RegistryPtr volume_registry(int n) {
    std::vector<std::string> vars;
    for (int k = 2; k <= n; ++k) vars.push_back("V" + std::to_string(k));
    return make_registry(vars, {"d"});
}

/// Content sums of an n-site edge chart, indexed so that out[k] is the sum
/// of squared k-vertex contents; out[0] = 0 and out[1] = 1 by convention.
inline std::vector<PolyQ> volume_variables(const RegistryPtr& rho, int n) {
    std::vector<PolyQ> out;
    out.push_back(PolyQ::zero(rho));
    out.push_back(PolyQ::one(rho));
    for (int k = 2; k <= n; ++k) out.push_back(content_sum(rho, n, k));
    return out;
}

/// One coefficient slot of the volume-variable term shape.
struct NBodySlot {
    char family = 'a';  // 'a','b','c','e','f'
    int i = 0;
    int j = 0;  // used by the c/f double families

    std::string name() const {
        std::string s(1, family);
        s += std::to_string(i);
        if (family == 'c' || family == 'f') s += std::to_string(j);
        return s;
    }
    friend bool operator==(const NBodySlot& x, const NBodySlot& y) {
        return x.family == y.family && x.i == y.i && x.j == y.j;
    }
};

/// Closed-form coefficient value when one is available for every n.
inline std::optional<Rat> pinned_slot_value(int n, const NBodySlot& s) {
    if (s.family == 'a' && s.i == n - 1)
        return Rat(2) / Rat::from_int((n - 1) * (n - 1));
    if (s.family == 'b' && s.i == 2) return Rat::from_int(2 * n);
    if (s.family == 'e') {
        if (s.i == 0) return Rat::from_int(n * (n - 1));
        return Rat::from_int(n - s.i - 1) / Rat::from_int((s.i + 1) * (s.i + 1));
    }
    return std::nullopt;
}

namespace detail {

/// Structural data of one slot: the V-index pair it differentiates and the
/// V-index pair of its prefactor product (0 means the zero convention, 1 the
/// unit convention). Family 'e' is first order and carries (d - i).
struct NBodySlotShape {
    NBodySlot slot;
    int d1 = 0, d2 = 0;    // derivative indices into V2..Vn; d2 = 0 for 'e'
    int p1 = 0, p2 = 0;    // prefactor V_p1 * V_p2
};

inline std::vector<NBodySlotShape> nbody_slot_shapes(int n) {
    if (n < 3)
        throw std::invalid_argument("volume term shape needs three sites");
    std::vector<NBodySlotShape> out;
    for (int i = 2; i <= n - 1; ++i)
        out.push_back({{'a', i, 0}, i + 1, n, n, i});
    for (int i = 2; i <= n; ++i) out.push_back({{'b', i, 0}, i, 2, i, 1});
    for (int i = 0; i <= n - 2; ++i)
        out.push_back({{'e', i, 0}, i + 2, 0, i + 1, 1});
    for (int j = 1; j <= n - 3; ++j)
        for (int i = 1; i <= j; ++i) {
            out.push_back({{'c', i, j}, n - i, n - j, n + 1 - i, n - j - 2});
            out.push_back({{'f', i, j}, n - i, n - j, n - i, n - j - 1});
        }
    return out;
}

}  // namespace detail

/// Volume-variable operator template: every slot present for the given n,
/// each with a value and a flag telling whether the value is the closed form
/// or was derived by the linear solve.
struct NBodyTemplate {
    int n = 0;
    RegistryPtr reg;  // volume chart V2..Vn

    struct Entry {
        NBodySlot slot;
        Rat value;
        bool pinned = false;
    };
    std::vector<Entry> coefficients;

    const Rat& value(const NBodySlot& s) const {
        for (const auto& e : coefficients)
            if (e.slot == s) return e.value;
        throw std::out_of_range("no such coefficient slot: " + s.name());
    }

    /// The operator on the volume chart with all slots filled in.
    DiffOpQ assemble() const {
        DiffOpQ op = DiffOpQ::zero(reg);
        const int nv = reg->size();
        auto vpoly = [&](int k) {
            if (k == 0) return PolyQ::zero(reg);
            if (k == 1) return PolyQ::one(reg);
            return PolyQ::var(reg, k - 2);
        };
        for (const auto& sh : detail::nbody_slot_shapes(n)) {
            PolyQ pre = vpoly(sh.p1) * vpoly(sh.p2);
            if (pre.terms().empty()) continue;
            pre = pre.scale(value(sh.slot));
            ExpVec m(nv);
            m.bump(sh.d1 - 2);
            if (sh.slot.family == 'e') {
                pre = pre * (PolyQ::var(reg, "d") -
                             PolyQ::constant(reg, Rat::from_int(sh.slot.i)));
            } else {
                m.bump(sh.d2 - 2);
            }
            op.add_term(m, RatFuncQ(pre));
        }
        return op;
    }
};

/// Result of the exact coefficient derivation. `consistent` is false when
/// some matching equation has no solution in the term shape; `offending`
/// then names the first monomial that cannot be matched. The certificate
/// fields report the direct low-degree identity checks.
struct NBodyDerivation {
    NBodyTemplate tmpl;
    bool consistent = true;
    bool pinned_match = true;
    bool unique = true;
    std::string offending;
    int certified_degree = 0;
    std::size_t certified_count = 0;
};

namespace detail {

inline void nbody_monomials(int nvars, int degree, int from, ExpVec& cur,
                            std::vector<ExpVec>& out) {
    if (degree == 0) {
        out.push_back(cur);
        return;
    }
    for (int v = from; v < nvars; ++v) {
        cur.bump(v);
        nbody_monomials(nvars, degree - 1, v, cur, out);
        cur.set(v, (int)cur[v] - 1);
    }
}

}  // namespace detail

/// Derives every coefficient of the volume-variable term shape for n sites
/// (unit masses) by matching first-order images and symbol contractions of
/// the radial operator, then certifies the identity
///   radial(m o V-map) == (assembled m) o V-map
/// for all monomials m through `certify_degree`.
inline NBodyDerivation derive_coefficients(int n, int certify_degree = 3) {
    if (n < 3 || n > 5)
        throw std::invalid_argument("derive_coefficients: n must be 3, 4 or 5");
    NBodyDerivation res;
    res.tmpl.n = n;
    res.tmpl.reg = volume_registry(n);

    RegistryPtr rho = nbody_registry(n);
    std::vector<PolyQ> V = volume_variables(rho, n);
    DiffOpQ rad = radial_operator_n(rho, n, param_rf(rho, "d"));
    PolyQ dpar = PolyQ::var(rho, "d");

    auto vprod = [&](int k, int l) {
        if (k == 0 || l == 0) return PolyQ::zero(rho);
        return V[(std::size_t)k] * V[(std::size_t)l];
    };
    auto note_offender = [&](const PolyQ& residual) {
        res.consistent = false;
        if (residual.terms().empty() || !res.offending.empty()) return;
        ExpVec worst = residual.terms().begin()->first;
        for (const auto& [m, c] : residual.terms())
            if (graded_lex_greater(m, worst)) worst = m;
        res.offending = PolyQ::monomial(rho, worst, Rat(1)).str();
    };

    std::vector<PolyQ> B(1, PolyQ::zero(rho));
    B.push_back(PolyQ::zero(rho));
    for (int k = 2; k <= n; ++k)
        B.push_back(rad.apply(V[(std::size_t)k]).as_poly());

    auto shapes = detail::nbody_slot_shapes(n);
    std::map<std::string, Rat> fitted;

    // First-order block: every e-slot has a closed form, so these equations
    // are pure certificate checks.
    for (const auto& sh : shapes) {
        if (sh.slot.family != 'e') continue;
        Rat e = *pinned_slot_value(n, sh.slot);
        PolyQ expect =
            V[(std::size_t)sh.p1] *
            (dpar - PolyQ::constant(rho, Rat::from_int(sh.slot.i))) * e;
        PolyQ residual = B[(std::size_t)sh.d1] - expect;
        if (!residual.terms().empty()) {
            res.pinned_match = false;
            note_offender(residual);
        }
        fitted[sh.slot.name()] = e;
    }

    // Symbol block: the contraction of the radial operator on a pair of
    // volume variables must match the prefactors of the slots that
    // differentiate exactly that pair.
    for (int k = 2; k <= n && res.consistent; ++k) {
        for (int l = k; l <= n && res.consistent; ++l) {
            PolyQ gamma =
                (rad.apply(V[(std::size_t)k] * V[(std::size_t)l]).as_poly() -
                 V[(std::size_t)k] * B[(std::size_t)l] -
                 V[(std::size_t)l] * B[(std::size_t)k])
                    .scale(Rat(1, 2));
            PolyQ target = (k == l) ? gamma : gamma.scale(Rat(2));

            std::vector<const detail::NBodySlotShape*> here;
            for (const auto& sh : shapes) {
                if (sh.slot.family == 'e') continue;
                int a = std::min(sh.d1, sh.d2), b = std::max(sh.d1, sh.d2);
                if (a == k && b == l) here.push_back(&sh);
            }
            if (here.empty()) {
                if (!target.terms().empty()) note_offender(target);
                continue;
            }

            std::vector<PolyQ> basis;
            for (const auto* sh : here) basis.push_back(vprod(sh->p1, sh->p2));

            std::vector<ExpVec> keys;
            for (const auto& [m, c] : target.terms()) keys.push_back(m);
            for (const auto& q : basis)
                for (const auto& [m, c] : q.terms()) keys.push_back(m);
            std::sort(keys.begin(), keys.end(), GradedLexGreater{});
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

            Rows<Rat> rows;
            std::vector<Rat> rhs;
            for (const auto& m : keys) {
                std::vector<Rat> row;
                for (const auto& q : basis) {
                    auto it = q.terms().find(m);
                    row.push_back(it == q.terms().end() ? Rat(0) : it->second);
                }
                rows.push_back(std::move(row));
                auto it = target.terms().find(m);
                rhs.push_back(it == target.terms().end() ? Rat(0) : it->second);
            }
            bool uniq = true;
            auto sol = solve_linear(rows, rhs, &uniq);
            if (!sol) {
                note_offender(target);
                continue;
            }
            res.unique = res.unique && uniq;
            for (std::size_t s = 0; s < here.size(); ++s) {
                fitted[here[s]->slot.name()] = (*sol)[s];
                auto pin = pinned_slot_value(n, here[s]->slot);
                if (pin && *pin != (*sol)[s]) res.pinned_match = false;
            }
        }
    }

    for (const auto& sh : shapes) {
        bool pinned = pinned_slot_value(n, sh.slot).has_value();
        Rat v = pinned ? *pinned_slot_value(n, sh.slot)
                       : fitted[sh.slot.name()];
        bool seen = false;
        for (const auto& e : res.tmpl.coefficients)
            if (e.slot == sh.slot) seen = true;
        if (!seen) res.tmpl.coefficients.push_back({sh.slot, v, pinned});
    }
    if (!res.consistent) return res;

    // Direct certificate: apply both routes to every monomial through the
    // requested degree and demand exact agreement.
    DiffOpQ assembled = res.tmpl.assemble();
    std::vector<PolyQ> sub((std::size_t)res.tmpl.reg->size(),
                           PolyQ::zero(rho));
    for (int k = 2; k <= n; ++k) sub[(std::size_t)(k - 2)] = V[(std::size_t)k];
    sub[(std::size_t)res.tmpl.reg->index("d")] = dpar;

    const int nv = res.tmpl.reg->size();
    for (int dg = 1; dg <= certify_degree && res.consistent; ++dg) {
        std::vector<ExpVec> monos;
        ExpVec cur(nv);
        detail::nbody_monomials(nv - 1, dg, 0, cur, monos);
        for (const auto& m : monos) {
            PolyQ f = PolyQ::monomial(res.tmpl.reg, m, Rat(1));
            PolyQ lhs = rad.apply(f.subst(sub)).as_poly();
            PolyQ rhs = assembled.apply(f).as_poly().subst(sub);
            if (lhs == rhs) {
                ++res.certified_count;
            } else {
                res.consistent = false;
                res.offending = f.str();
                break;
            }
        }
        if (res.consistent) res.certified_degree = dg;
    }
    return res;
}

}  // namespace fourbody
