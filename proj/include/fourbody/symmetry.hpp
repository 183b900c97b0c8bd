#pragma once
// Symmetry algebra of the equal-mass radial operator: the three-parameter
// family of edge-linear vector fields commuting with it, the rotation triple
// that family spans over the extension field, and the five-component ladder
// of commuting second-order operators generated from its top component.

#include <array>
#include <string>
#include <vector>

#include "fourbody/catalog.hpp"
#include "fourbody/diffop.hpp"
#include "fourbody/poly.hpp"
#include "fourbody/radical.hpp"
#include "fourbody/ratfunc.hpp"
#include "fourbody/rational.hpp"
#include "fourbody/registry.hpp"
#include "fourbody/tetra.hpp"

namespace fourbody {

using PolyR = Poly<Radical>;
using RatFuncR = RatFunc<Radical>;
using DiffOpR = DiffOp<Radical>;

// ---------------------------------------------------------------------------
// Scalar lifts from the rationals into the extension field
// ---------------------------------------------------------------------------

inline PolyR lift_poly(const PolyQ& p, const RegistryPtr& reg) {
  PolyR out = PolyR::zero(reg);
  for (const auto& [m, c] : p.terms())
    out += PolyR::monomial(reg, m, Radical(c));
  return out;
}

inline RatFuncR lift_ratfunc(const RatFuncQ& f, const RegistryPtr& reg) {
  std::vector<RatFuncR::Factor> den;
  den.reserve(f.den().size());
  for (const auto& [b, e] : f.den()) den.emplace_back(lift_poly(b, reg), e);
  return RatFuncR::quotient(lift_poly(f.num(), reg), den);
}

inline DiffOpR lift_op(const DiffOpQ& op) {
  const RegistryPtr& reg = op.registry();
  DiffOpR out(reg);
  for (const auto& [m, c] : op.terms()) out.add_term(m, lift_ratfunc(c, reg));
  return out;
}

// ---------------------------------------------------------------------------
// Linear vector fields commuting with the radial operator
// ---------------------------------------------------------------------------

/// Vector field with edge-linear coefficients, parametrized by three scalars
/// (or parameter polynomials); commutes with the radial operator for every
/// choice of the parameters.
template <class S>
DiffOp<S> edge_rotation(const RegistryPtr& reg, const Poly<S>& a,
                        const Poly<S>& b, const Poly<S>& c) {
  using P = Poly<S>;
  const int n = reg->size();
  auto frac = [](long num, long den) { return S(Rat(num, (unsigned long)den)); };
  auto rho = [&](int i, int j) { return P::var(reg, edge_var(4, i, j)); };

  P a1 = a * frac(3, 2) + b * frac(3, 2) + c;
  P a2 = a * frac(3, 2) + b * frac(7, 2) + c * S(3);
  P a3 = a * frac(1, 2) - b * frac(1, 2) - c;
  P a4 = a * frac(3, 2) + b * frac(5, 2) + c * S(3);
  P a5 = a + b * S(3) + c * S(3);
  P a6 = a + b * S(2) + c;
  P a7 = a * S(2) + b * S(3) + c * S(3);
  P a8 = a * frac(1, 2) + b * frac(5, 2) + c * S(2);
  P a9 = a * frac(3, 2) + b * frac(3, 2) + c * S(2);

  DiffOp<S> op(reg);
  auto row = [&](int i, int j, const P& coeff) {
    op.add_term(ExpVec::unit(n, edge_var(4, i, j)), RatFunc<S>(coeff));
  };
  row(1, 2, rho(1, 3) * a - rho(2, 3) * a + rho(1, 4) * b - rho(2, 4) * b);
  row(1, 3, rho(2, 3) * a1 - rho(1, 2) * a1 + rho(1, 4) * a2 - rho(3, 4) * a2);
  row(1, 4, rho(1, 2) * c - rho(2, 4) * c + rho(3, 4) * a5 - rho(1, 3) * a5);
  row(2, 3, rho(1, 2) * a3 - rho(1, 3) * a3 + rho(2, 4) * a4 - rho(3, 4) * a4);
  row(2, 4, rho(1, 2) * a6 - rho(1, 4) * a6 + rho(3, 4) * a7 - rho(2, 3) * a7);
  row(3, 4, rho(1, 3) * a8 - rho(1, 4) * a8 + rho(2, 3) * a9 - rho(2, 4) * a9);
  return op;
}

template <class S>
DiffOp<S> edge_rotation(const RegistryPtr& reg, const S& a, const S& b,
                        const S& c) {
  using P = Poly<S>;
  return edge_rotation<S>(reg, P::constant(reg, a), P::constant(reg, b),
                          P::constant(reg, c));
}

// ---------------------------------------------------------------------------
// Rotation triple over the extension field
// ---------------------------------------------------------------------------

inline DiffOpR rotation_j1(const RegistryPtr& reg) {
  return edge_rotation<Radical>(reg, Radical::sqrt35(Rat(2, 35)),
                                Radical::zero(),
                                Radical::sqrt35(Rat(-3, 35)));
}

inline DiffOpR rotation_j2(const RegistryPtr& reg) {
  return edge_rotation<Radical>(reg, Radical::sqrt210(Rat(-17, 420)),
                                Radical::sqrt210(Rat(1, 12)),
                                Radical::sqrt210(Rat(-27, 420)));
}

inline DiffOpR rotation_j3(const RegistryPtr& reg) {
  return edge_rotation<Radical>(reg, Radical::sqrt6(Rat(5, 12)),
                                Radical::sqrt6(Rat(1, 12)),
                                Radical::sqrt6(Rat(-1, 4)));
}

// ---------------------------------------------------------------------------
// The commuting spin-2 ladder
// ---------------------------------------------------------------------------

/// Top ladder component: a second-order operator over Q(i sqrt 6) with
/// edge-linear coefficients and dimension-proportional drift, commuting with
/// the radial operator.
inline DiffOpR ladder_top(const RegistryPtr& reg) {
  const int n = reg->size();
  PolyR dp = PolyR::var(reg, "d");
  DiffOpR op(reg);
  struct Frac {
    long num, den;
  };
  auto val = [](Frac x, Frac y) {
    return Radical::unit(0, Rat(x.num, (unsigned long)x.den)) +
           Radical::unit(3, Rat(y.num, (unsigned long)y.den));
  };
  auto slot = [&](const char* e) {
    return edge_var(4, e[0] - '0', e[1] - '0');
  };
  auto t2 = [&](const char* ea, const char* eb, const char* ec, Frac x,
                Frac y) {
    ExpVec m(n);
    m.bump(slot(ea));
    m.bump(slot(eb));
    DiffOpR term(reg);
    term.add_term(m, RatFuncR(PolyR::var(reg, slot(ec), val(x, y))));
    op += term;
  };
  auto t1 = [&](const char* ev, Frac x, Frac y) {
    op.add_term(ExpVec::unit(n, slot(ev)), RatFuncR(dp * val(x, y)));
  };

  t2("12", "12", "12", {5, 6}, {2, 3});
  t2("12", "13", "12", {-1, 1}, {2, 3});
  t2("12", "13", "13", {-1, 1}, {2, 3});
  t2("12", "13", "23", {1, 1}, {-2, 3});
  t2("12", "14", "12", {-1, 2}, {1, 3});
  t2("12", "14", "14", {-1, 2}, {1, 3});
  t2("12", "14", "24", {1, 2}, {-1, 3});
  t2("12", "23", "12", {11, 6}, {0, 1});
  t2("12", "23", "13", {-11, 6}, {0, 1});
  t2("12", "23", "23", {11, 6}, {0, 1});
  t2("12", "24", "12", {4, 3}, {1, 3});
  t2("12", "24", "14", {-4, 3}, {-1, 3});
  t2("12", "24", "24", {4, 3}, {1, 3});
  t2("12", "34", "13", {-1, 2}, {1, 3});
  t2("12", "34", "14", {1, 2}, {-1, 3});
  t2("12", "34", "23", {1, 2}, {-1, 3});
  t2("12", "34", "24", {-1, 2}, {1, 3});
  t2("13", "13", "13", {-2, 1}, {0, 1});
  t2("13", "14", "13", {-1, 1}, {0, 1});
  t2("13", "14", "14", {-1, 1}, {0, 1});
  t2("13", "14", "34", {1, 1}, {0, 1});
  t2("13", "23", "12", {1, 1}, {2, 3});
  t2("13", "23", "13", {-1, 1}, {-2, 3});
  t2("13", "23", "23", {-1, 1}, {-2, 3});
  t2("13", "24", "12", {0, 1}, {2, 3});
  t2("13", "24", "14", {0, 1}, {-2, 3});
  t2("13", "24", "23", {0, 1}, {-2, 3});
  t2("13", "24", "34", {0, 1}, {2, 3});
  t2("13", "34", "13", {-1, 1}, {0, 1});
  t2("13", "34", "14", {1, 1}, {0, 1});
  t2("13", "34", "34", {-1, 1}, {0, 1});
  t2("14", "14", "14", {-1, 2}, {0, 1});
  t2("14", "23", "12", {1, 2}, {1, 3});
  t2("14", "23", "13", {-1, 2}, {-1, 3});
  t2("14", "23", "24", {-1, 2}, {-1, 3});
  t2("14", "23", "34", {1, 2}, {1, 3});
  t2("14", "24", "12", {0, 1}, {1, 3});
  t2("14", "24", "14", {0, 1}, {-1, 3});
  t2("14", "24", "24", {0, 1}, {-1, 3});
  t2("14", "34", "13", {-1, 2}, {0, 1});
  t2("14", "34", "14", {1, 2}, {0, 1});
  t2("14", "34", "34", {1, 2}, {0, 1});
  t2("23", "23", "23", {5, 6}, {-2, 3});
  t2("23", "24", "23", {4, 3}, {-1, 3});
  t2("23", "24", "24", {4, 3}, {-1, 3});
  t2("23", "24", "34", {-4, 3}, {1, 3});
  t2("23", "34", "23", {-1, 2}, {-1, 3});
  t2("23", "34", "24", {1, 2}, {1, 3});
  t2("23", "34", "34", {-1, 2}, {-1, 3});
  t2("24", "24", "24", {4, 3}, {0, 1});
  t2("24", "34", "23", {0, 1}, {-1, 3});
  t2("24", "34", "24", {0, 1}, {1, 3});
  t2("24", "34", "34", {0, 1}, {1, 3});
  t2("34", "34", "34", {-1, 2}, {0, 1});
  t1("12", {5, 12}, {1, 3});
  t1("13", {-1, 1}, {0, 1});
  t1("14", {-1, 4}, {0, 1});
  t1("23", {5, 12}, {-1, 3});
  t1("24", {2, 3}, {0, 1});
  t1("34", {-1, 4}, {0, 1});
  return op;
}

/// Radial operator, rotation triple, and the full ladder on one registry.
struct LadderFamily {
  DiffOpR delta;
  DiffOpR j0, jp, jm;
  std::array<DiffOpR, 5> f;  // weights 2, 1, 0, -1, -2
};

inline LadderFamily ladder_family(const RegistryPtr& reg) {
  DiffOpR j1 = rotation_j1(reg), j2 = rotation_j2(reg), j3 = rotation_j3(reg);
  DiffOpR ij1 = j1;
  ij1.scale(Radical::imag());
  DiffOpR j0 = j3;
  j0.scale(Radical::imag());
  DiffOpR jp = ij1 - j2;
  DiffOpR jm = ij1 + j2;

  std::array<DiffOpR, 5> f = {DiffOpR::zero(reg), DiffOpR::zero(reg),
                              DiffOpR::zero(reg), DiffOpR::zero(reg),
                              DiffOpR::zero(reg)};
  f[0] = ladder_top(reg);
  const Radical half(Rat(1, 2));
  const Radical is6 = Radical::sqrt6(Rat(1, 6));  // 1/sqrt(6)
  f[1] = commutator(jm, f[0]);
  f[1].scale(half);
  f[2] = commutator(jm, f[1]);
  f[2].scale(is6);
  f[3] = commutator(jm, f[2]);
  f[3].scale(is6);
  f[4] = commutator(jm, f[3]);
  f[4].scale(half);

  DiffOpR delta = lift_op(radial_operator_n(reg, 4, param_rf(reg, "d")));
  return {std::move(delta), std::move(j0), std::move(jp), std::move(jm),
          std::move(f)};
}

// ---------------------------------------------------------------------------
// Principal symbols
// ---------------------------------------------------------------------------

/// Registry with one momentum slot appended per variable; parameters carry
/// over unchanged. Variable order is preserved, momenta follow.
inline RegistryPtr phase_registry(const RegistryPtr& reg) {
  std::vector<std::string> vars, params;
  for (int i = 0; i < reg->size(); ++i)
    (reg->is_param(i) ? params : vars).push_back(reg->name(i));
  const std::size_t nv = vars.size();
  for (std::size_t k = 0; k < nv; ++k) vars.push_back("p_" + vars[k]);
  return make_registry(vars, params);
}

/// Principal symbol of the given order: each d^alpha with |alpha| = order
/// becomes the momentum monomial p^alpha, lower orders are dropped.
template <class S>
Poly<S> principal_symbol(const DiffOp<S>& op, const RegistryPtr& phase,
                         int order) {
  const RegistryPtr& reg = op.registry();
  int nv = 0;
  for (int i = 0; i < reg->size(); ++i)
    if (!reg->is_param(i)) ++nv;
  std::vector<Poly<S>> images;
  images.reserve((std::size_t)reg->size());
  for (int i = 0; i < reg->size(); ++i) {
    if (reg->is_param(i))
      images.push_back(Poly<S>::var(phase, reg->name(i)));
    else
      images.push_back(Poly<S>::var(phase, i));
  }
  Poly<S> acc = Poly<S>::zero(phase);
  for (const auto& [m, c] : op.terms()) {
    if (m.total() != order) continue;
    Poly<S> mono = c.as_poly().subst(images);
    for (int i = 0; i < reg->size(); ++i)
      for (int k = 0; k < m[i]; ++k) mono = mono * Poly<S>::var(phase, nv + i);
    acc += mono;
  }
  return acc;
}

}  // namespace fourbody
