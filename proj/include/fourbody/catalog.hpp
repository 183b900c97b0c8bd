#pragma once
// Catalog of reduced operators for the four-site problem: the radial operator
// and its unequal-mass deformation on the edge-square chart, the curved
// second-order forms on the derived invariant charts, the matching gauge
// factors and scalar potentials, and the generator-word realizations.
//
// Chart convention: conjugated(op, gauge) == lb - potential * identity.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "fourbody/diffop.hpp"
#include "fourbody/gauge.hpp"
#include "fourbody/metric.hpp"
#include "fourbody/poly.hpp"
#include "fourbody/ratfunc.hpp"
#include "fourbody/rational.hpp"
#include "fourbody/registry.hpp"
#include "fourbody/tetra.hpp"

namespace fourbody {

inline RatFuncQ param_rf(const RegistryPtr& reg, const std::string& n) {
  return RatFuncQ(PolyQ::var(reg, n));
}

inline std::vector<int> var_slots(const RegistryPtr& reg) {
  std::vector<int> out;
  for (int i = 0; i < reg->size(); ++i)
    if (!reg->is_param(i)) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Radial operators on edge-square charts
// ---------------------------------------------------------------------------

/// Radial reduction of the flat kinetic operator for nsites unit-mass sites:
/// 4 r_e d_e^2 + 2*dim d_e on every edge plus (r_a + r_b - r_opp) couplings
/// on every adjacent edge pair, with the stated dimension value.
inline DiffOpQ radial_operator_n(const RegistryPtr& reg, int nsites,
                                 const RatFuncQ& dim) {
  const int n = reg->size();
  const int ne = nsites * (nsites - 1) / 2;
  DiffOpQ op = DiffOpQ::zero(reg);
  for (int v = 0; v < ne; ++v) {
    op.add_term(ExpVec::unit(n, v, 2),
                RatFuncQ(PolyQ::var(reg, v) * Rat(4)));
    op.add_term(ExpVec::unit(n, v), dim * Rat(2));
  }
  for (const auto& t : shared_edge_triples(nsites)) {
    PolyQ c = PolyQ::var(reg, t.a) + PolyQ::var(reg, t.b) -
              PolyQ::var(reg, t.opp);
    ExpVec m(n);
    m.bump(t.a);
    m.bump(t.b);
    op.add_term(m, RatFuncQ(c * Rat(2)));
  }
  return op;
}

/// Four-site radial operator with the formal dimension parameter.
inline DiffOpQ radial_operator(const RegistryPtr& reg) {
  return radial_operator_n(reg, 4, param_rf(reg, "d"));
}

/// Unequal-mass radial operator: pair terms are weighted by the inverse
/// reduced mass, adjacent couplings by twice the inverse shared-site mass.
inline DiffOpQ radial_operator_mass(const RegistryPtr& reg,
                                    const std::array<Rat, 4>& mass,
                                    const RatFuncQ& dim) {
  const int n = reg->size();
  auto pairs = edge_pairs(4);
  DiffOpQ op = DiffOpQ::zero(reg);
  for (int v = 0; v < 6; ++v) {
    auto [i, j] = pairs[(std::size_t)v];
    Rat imu = (mass[i - 1] + mass[j - 1]) / (mass[i - 1] * mass[j - 1]);
    op.add_term(ExpVec::unit(n, v, 2),
                RatFuncQ(PolyQ::var(reg, v) * (Rat(2) * imu)));
    op.add_term(ExpVec::unit(n, v), dim * imu);
  }
  for (const auto& t : shared_edge_triples(4)) {
    PolyQ c = PolyQ::var(reg, t.a) + PolyQ::var(reg, t.b) -
              PolyQ::var(reg, t.opp);
    ExpVec m(n);
    m.bump(t.a);
    m.bump(t.b);
    op.add_term(m, RatFuncQ(c * (Rat(2) / mass[t.vertex - 1])));
  }
  return op;
}

inline DiffOpQ radial_operator_mass(const RegistryPtr& reg,
                                    const std::array<Rat, 4>& mass) {
  return radial_operator_mass(reg, mass, param_rf(reg, "d"));
}

/// Sum of lambda_i d_i over the chart variables.
inline DiffOpQ euler_operator(const RegistryPtr& reg) {
  DiffOpQ op = DiffOpQ::zero(reg);
  for (int v : var_slots(reg))
    op.add_term(ExpVec::unit(reg->size(), v), RatFuncQ(PolyQ::var(reg, v)));
  return op;
}

// ---------------------------------------------------------------------------
// Chart bundles
// ---------------------------------------------------------------------------

/// One invariant chart with everything needed for the gauge identity
///   conjugated(op, gauge) == lb - potential.
struct ChartForms {
  DiffOpQ op;
  Mat<RatFuncQ> metric;
  FactoredPoly<Rat> det;
  DiffOpQ lb;
  GaugeFactor<Rat> gauge;
  RatFuncQ potential;
  std::vector<int> coords;

  explicit ChartForms(const RegistryPtr& reg)
      : op(DiffOpQ::zero(reg)),
        lb(DiffOpQ::zero(reg)),
        gauge(reg),
        potential(RatFuncQ::zero(reg)) {}
};

inline Mat<PolyQ> metric_poly(const Mat<RatFuncQ>& g,
                              const std::vector<int>& coords,
                              const RegistryPtr& reg) {
  Mat<PolyQ> out = make_mat((int)coords.size(), PolyQ::zero(reg));
  for (std::size_t a = 0; a < coords.size(); ++a)
    for (std::size_t b = 0; b < coords.size(); ++b)
      out[a][b] = g[(std::size_t)coords[a]][(std::size_t)coords[b]].as_poly();
  return out;
}

inline FactoredPoly<Rat> certified_det(const Mat<RatFuncQ>& g,
                                       const std::vector<int>& coords,
                                       const RegistryPtr& reg,
                                       const std::vector<PolyQ>& bases) {
  PolyQ det = poly_det(metric_poly(g, coords, reg));
  auto cert = factor_certificate(det, bases);
  if (!cert) throw std::runtime_error("metric determinant failed to certify");
  return *cert;
}

namespace detail {

inline void finish_chart(ChartForms& ch, const RegistryPtr& reg,
                         const std::vector<PolyQ>& det_bases) {
  ch.coords = var_slots(reg);
  ch.metric = metric_of(ch.op);
  ch.det = certified_det(ch.metric, ch.coords, reg, det_bases);
  ch.lb = laplace_beltrami(reg, ch.metric, ch.det, ch.coords);
}

}  // namespace detail

/// Edge-square chart of the equal-mass problem.
inline ChartForms radial_chart(const RegistryPtr& reg) {
  ChartForms ch(reg);
  ch.op = radial_operator(reg);
  PolyQ V = tetra_volume_sq(reg);
  PolyQ C = tetra_metric_cofactor(reg);
  detail::finish_chart(ch, reg, {V, C});

  RatFuncQ d = param_rf(reg, "d");
  ch.gauge.with_power(V, (RatFuncQ::constant(reg, Rat(3)) - d) * Rat(1, 4))
          .with_power(C, Rat(-1, 4));

  PolyQ P = tetra_edge_sum(reg), S = tetra_face_sum(reg);
  RatFuncQ sing = RatFuncQ::quotient(P * P * Rat(3) + S * Rat(112),
                                     {{C * Rat(32), 1}});
  RatFuncQ reg_part = RatFuncQ::quotient(
      (PolyQ::var(reg, "d") - PolyQ::constant(reg, Rat(5))) *
          (PolyQ::var(reg, "d") - PolyQ::constant(reg, Rat(3))) * S,
      {{V * Rat(72), 1}});
  ch.potential = sing + reg_part;
  return ch;
}

/// Edge-square chart at arbitrary positive masses.
inline ChartForms radial_chart_mass(const RegistryPtr& reg,
                                    const std::array<Rat, 4>& mass) {
  ChartForms ch(reg);
  ch.op = radial_operator_mass(reg, mass);
  PolyQ V = tetra_volume_sq(reg);
  PolyQ Cm = mass_metric_cofactor(reg, mass);
  detail::finish_chart(ch, reg, {V, Cm});

  RatFuncQ d = param_rf(reg, "d");
  ch.gauge.with_power(V, (RatFuncQ::constant(reg, Rat(3)) - d) * Rat(1, 4))
          .with_power(Cm, Rat(-1, 4));

  Rat M = mass[0] + mass[1] + mass[2] + mass[3];
  Rat mq = mass[0] * mass[1] * mass[2] * mass[3];
  PolyQ Pt = mass_edge_sum(reg, mass);
  PolyQ St = mass_face_sum(reg, mass);
  RatFuncQ sing = RatFuncQ::quotient(
      Pt * Pt * Rat(3) + St * (Rat(28) * M * mq), {{Cm * (Rat(32) * mq), 1}});
  RatFuncQ reg_part = RatFuncQ::quotient(
      (PolyQ::var(reg, "d") - PolyQ::constant(reg, Rat(5))) *
          (PolyQ::var(reg, "d") - PolyQ::constant(reg, Rat(3))) * St,
      {{V * Rat(72), 1}});
  ch.potential = sing + reg_part;
  return ch;
}

/// Chart of the three elementary invariants (V, S, P), equal masses by
/// default, general masses otherwise.
inline ChartForms vsp_chart_mass(const RegistryPtr& reg,
                                 const std::array<Rat, 4>& mass) {
  Rat M = mass[0] + mass[1] + mass[2] + mass[3];
  Rat mq = mass[0] * mass[1] * mass[2] * mass[3];
  PolyQ V = PolyQ::var(reg, "V"), S = PolyQ::var(reg, "S"),
        P = PolyQ::var(reg, "P");
  PolyQ dpar = PolyQ::var(reg, "d");
  const int n = reg->size();
  int iv = reg->index("V"), is = reg->index("S"), ip = reg->index("P");
  auto d2 = [&](int i, int j) {
    ExpVec m(n);
    m.bump(i);
    m.bump(j);
    return m;
  };

  ChartForms ch(reg);
  ch.op.add_term(d2(iv, iv), RatFuncQ(V * S * Rat(2, 9)));
  ch.op.add_term(d2(is, is), RatFuncQ(V * (Rat(27, 2) * M / mq) +
                                      S * P * (Rat(1, 2) / mq)));
  ch.op.add_term(d2(ip, ip), RatFuncQ(P * (Rat(2) * M)));
  ch.op.add_term(d2(is, ip), RatFuncQ(S * (Rat(8) * M)));
  ch.op.add_term(d2(iv, is), RatFuncQ(V * P * (Rat(2) / mq)));
  ch.op.add_term(d2(iv, ip), RatFuncQ(V * (Rat(12) * M)));
  ch.op.add_term(ExpVec::unit(n, iv),
                 RatFuncQ((dpar - PolyQ::constant(reg, Rat(2))) * S * Rat(1, 9)));
  ch.op.add_term(ExpVec::unit(n, is),
                 RatFuncQ((dpar - PolyQ::constant(reg, Rat(1))) * P *
                          (Rat(1, 2) / mq)));
  ch.op.add_term(ExpVec::unit(n, ip), RatFuncQ(dpar * (Rat(3) * M)));

  PolyQ bracket = vsp_metric_cofactor(reg, mass);
  detail::finish_chart(ch, reg, {V, bracket});

  RatFuncQ d = param_rf(reg, "d");
  ch.gauge.with_power(V, (RatFuncQ::constant(reg, Rat(3)) - d) * Rat(1, 4))
          .with_power(bracket, Rat(-1, 4));

  PolyQ num = (P * P - S * (Rat(12) * mq * M)) *
              (V * (Rat(81) * M) - P * S);
  RatFuncQ sing = RatFuncQ::quotient(num, {{bracket * Rat(8), 1}});
  RatFuncQ reg_part = RatFuncQ::quotient(
      (dpar - PolyQ::constant(reg, Rat(5))) *
          (dpar - PolyQ::constant(reg, Rat(3))) * S,
      {{V * Rat(72), 1}});
  ch.potential = sing + reg_part;
  return ch;
}

inline ChartForms vsp_chart(const RegistryPtr& reg) {
  return vsp_chart_mass(reg, {Rat(1), Rat(1), Rat(1), Rat(1)});
}

/// Chart of the opposite-edge pair sums (u1, u2, u3).
inline ChartForms u_chart(const RegistryPtr& reg) {
  const int n = reg->size();
  int i1 = reg->index("u1"), i2 = reg->index("u2"), i3 = reg->index("u3");
  PolyQ u1 = PolyQ::var(reg, i1), u2 = PolyQ::var(reg, i2),
        u3 = PolyQ::var(reg, i3);
  auto d2 = [&](int i, int j) {
    ExpVec m(n);
    m.bump(i);
    m.bump(j);
    return m;
  };
  RatFuncQ d = param_rf(reg, "d");

  ChartForms ch(reg);
  ch.op.add_term(d2(i1, i1), RatFuncQ(u1 * Rat(4)));
  ch.op.add_term(d2(i2, i2), RatFuncQ(u2 * Rat(4)));
  ch.op.add_term(d2(i3, i3), RatFuncQ(u3 * Rat(4)));
  ch.op.add_term(d2(i1, i2), RatFuncQ((u1 + u2 - u3) * Rat(4)));
  ch.op.add_term(d2(i1, i3), RatFuncQ((u1 + u3 - u2) * Rat(4)));
  ch.op.add_term(d2(i2, i3), RatFuncQ((u2 + u3 - u1) * Rat(4)));
  for (int i : {i1, i2, i3}) ch.op.add_term(ExpVec::unit(n, i), d * Rat(4));

  PolyQ T1 = u1 + u2 - u3, T2 = u1 + u3 - u2, T3 = u2 + u3 - u1;
  detail::finish_chart(ch, reg, {T1, T2, T3});

  RatFuncQ e = (RatFuncQ::constant(reg, Rat(1)) - d) * Rat(1, 4);
  ch.gauge.with_power(T1, e).with_power(T2, e).with_power(T3, e);

  PolyQ Q = u1 * u1 + u2 * u2 + u3 * u3 -
            (u1 * u2 + u1 * u3 + u2 * u3) * Rat(2);
  PolyQ dpar = PolyQ::var(reg, "d");
  RatFuncQ num((dpar - PolyQ::constant(reg, Rat(1))) *
               (dpar - PolyQ::constant(reg, Rat(3))) * Q);
  ch.potential =
      -(num / RatFuncQ(T1 * T2 * T3 * Rat(2)));
  return ch;
}

/// Planar chart (S, P): the dimension-two face of the invariant chart.
inline ChartForms planar_chart(const RegistryPtr& reg) {
  const int n = reg->size();
  int is = reg->index("S"), ip = reg->index("P");
  PolyQ S = PolyQ::var(reg, is), P = PolyQ::var(reg, ip);
  auto d2 = [&](int i, int j) {
    ExpVec m(n);
    m.bump(i);
    m.bump(j);
    return m;
  };
  ChartForms ch(reg);
  ch.op.add_term(d2(is, is), RatFuncQ(S * P * Rat(1, 2)));
  ch.op.add_term(d2(ip, ip), RatFuncQ(P * Rat(8)));
  ch.op.add_term(d2(is, ip), RatFuncQ(S * Rat(32)));
  ch.op.add_term(ExpVec::unit(n, is), RatFuncQ(P * Rat(1, 2)));
  ch.op.add_term(ExpVec::unit(n, ip), RatFuncQ::constant(reg, Rat(24)));

  PolyQ K2 = planar_metric_cofactor(reg, is, ip);
  ch.coords = {is, ip};
  ch.metric = metric_of(ch.op);
  ch.det = certified_det(ch.metric, ch.coords, reg, {S, K2});
  ch.lb = laplace_beltrami(reg, ch.metric, ch.det, ch.coords);

  ch.gauge.with_power(S, Rat(-1, 4)).with_power(K2, Rat(-1, 4));
  ch.potential =
      RatFuncQ::quotient(P * P * P * Rat(-1), {{S * Rat(32), 1}, {K2, 1}});
  return ch;
}

/// Collective chart (P): one degree of freedom.
inline ChartForms collective_chart(const RegistryPtr& reg) {
  const int n = reg->size();
  int ip = reg->index("P");
  PolyQ P = PolyQ::var(reg, ip);
  RatFuncQ d = param_rf(reg, "d");
  ChartForms ch(reg);
  ch.op.add_term(ExpVec::unit(n, ip, 2), RatFuncQ(P * Rat(8)));
  ch.op.add_term(ExpVec::unit(n, ip), d * Rat(12));

  ch.coords = {ip};
  ch.metric = metric_of(ch.op);
  ch.det = certified_det(ch.metric, ch.coords, reg, {P});
  ch.lb = laplace_beltrami(reg, ch.metric, ch.det, ch.coords);

  ch.gauge.with_power(P, (RatFuncQ::constant(reg, Rat(1)) - d * Rat(3)) *
                             Rat(1, 4));
  PolyQ dpar = PolyQ::var(reg, "d");
  ch.potential = RatFuncQ::quotient(
      (dpar - PolyQ::constant(reg, Rat(1))) *
          (dpar * Rat(3) - PolyQ::constant(reg, Rat(1))) * Rat(3),
      {{P * Rat(2), 1}});
  return ch;
}

// ---------------------------------------------------------------------------
// Quasi-exactly-solvable sector on the edge-square chart
// ---------------------------------------------------------------------------

/// Vacuum factor: C^{1/4} V^{gamma/2} exp(-omega P - (A/2) P^2) with C the
/// metric cofactor.
inline GaugeFactor<Rat> ground_state_gauge(const RegistryPtr& reg) {
  GaugeFactor<Rat> g(reg);
  PolyQ P = tetra_edge_sum(reg);
  PolyQ om = PolyQ::var(reg, "omega"), Ap = PolyQ::var(reg, "A");
  g.with_power(tetra_metric_cofactor(reg), Rat(1, 4))
   .with_power(tetra_volume_sq(reg), param_rf(reg, "gamma") * Rat(1, 2))
   .with_exp(-(om * P) - Ap * P * P * Rat(1, 2));
  return g;
}

/// Scalar potential whose vacuum is the ground-state gauge factor, at the
/// stated polynomial-sector size (the level enters one coupling linearly).
inline RatFuncQ qes_level_potential(const RegistryPtr& reg,
                                    const RatFuncQ& level) {
  PolyQ P = tetra_edge_sum(reg), S = tetra_face_sum(reg);
  PolyQ V = tetra_volume_sq(reg), C = tetra_metric_cofactor(reg);
  PolyQ gm = PolyQ::var(reg, "gamma"), om = PolyQ::var(reg, "omega"),
        Ap = PolyQ::var(reg, "A");
  RatFuncQ sing = RatFuncQ::quotient(P * P * Rat(3) + S * Rat(112),
                                     {{C * Rat(32), 1}});
  RatFuncQ gpart = RatFuncQ::quotient(
      gm * (gm - PolyQ::constant(reg, Rat(1))) * S, {{V * Rat(18), 1}});
  RatFuncQ harm(om * om * P * Rat(8));
  RatFuncQ quart(Ap * Ap * P * P * P * Rat(8));
  RatFuncQ mixing =
      RatFuncQ(Ap * P * Rat(4)) *
      (RatFuncQ(om * P * Rat(4)) - RatFuncQ(gm * Rat(6)) -
       RatFuncQ::constant(reg, Rat(11)) - level * Rat(4));
  return sing + gpart + harm + quart + mixing;
}

inline RatFuncQ ground_state_potential(const RegistryPtr& reg) {
  return qes_level_potential(reg, RatFuncQ::zero(reg));
}

/// Vacuum energy 12 omega (3 + 2 gamma).
inline RatFuncQ ground_state_energy(const RegistryPtr& reg) {
  PolyQ gm = PolyQ::var(reg, "gamma"), om = PolyQ::var(reg, "omega");
  return RatFuncQ(om * (PolyQ::constant(reg, Rat(3)) + gm * Rat(2)) *
                  Rat(12));
}

/// Level potential minus the effective potential; the cofactor singularity
/// cancels and only the volume factor remains.
inline RatFuncQ relative_level_potential(const RegistryPtr& reg) {
  PolyQ P = tetra_edge_sum(reg), S = tetra_face_sum(reg);
  PolyQ V = tetra_volume_sq(reg);
  PolyQ gm = PolyQ::var(reg, "gamma"), om = PolyQ::var(reg, "omega"),
        Ap = PolyQ::var(reg, "A"), Np = PolyQ::var(reg, "N"),
        dp = PolyQ::var(reg, "d");
  PolyQ bracket = gm * (gm - PolyQ::constant(reg, Rat(1))) * Rat(4) -
                  (dp - PolyQ::constant(reg, Rat(5))) *
                      (dp - PolyQ::constant(reg, Rat(3)));
  RatFuncQ head = RatFuncQ::quotient(bracket * S, {{V * Rat(72), 1}});
  RatFuncQ tail(om * om * P * Rat(8) + Ap * Ap * P * P * P * Rat(8) +
                Ap * P * (om * P * Rat(4) - gm * Rat(6) -
                          PolyQ::constant(reg, Rat(11)) - Np * Rat(4)) *
                    Rat(4));
  return head + tail;
}

/// Polynomial-sector Hamiltonian: the radial operator at shifted dimension
/// 3 + 2 gamma, reversed in sign, plus the confining first-order couplings.
inline DiffOpQ qes_hamiltonian(const RegistryPtr& reg, const RatFuncQ& level) {
  RatFuncQ gm = param_rf(reg, "gamma");
  RatFuncQ dim = RatFuncQ::constant(reg, Rat(3)) + gm * Rat(2);
  DiffOpQ h = -radial_operator_n(reg, 4, dim);
  RatFuncQ om = param_rf(reg, "omega"), Ap = param_rf(reg, "A");
  RatFuncQ P(tetra_edge_sum(reg));
  DiffOpQ euler = euler_operator(reg);
  DiffOpQ scaled = euler;
  scaled.scale(om * Rat(16) + Ap * P * Rat(16));
  h += scaled;
  DiffOpQ shift = DiffOpQ::identity(reg);
  shift.scale(Ap * P * level * Rat(-16));
  h += shift;
  return h;
}

inline DiffOpQ qes_hamiltonian(const RegistryPtr& reg) {
  return qes_hamiltonian(reg, param_rf(reg, "N"));
}

/// Right-hand side of the vacuum-gauged Schroedinger identity:
///   gauge^{-1} (-lb + V_0 - E_0) gauge  ==  this operator,
/// which is level-free because the two level couplings cancel.
inline DiffOpQ gauged_schroedinger_form(const RegistryPtr& reg) {
  DiffOpQ h = qes_hamiltonian(reg, RatFuncQ::zero(reg));
  return h;
}

// ---------------------------------------------------------------------------
// Generator words
// ---------------------------------------------------------------------------

inline DiffOpQ lower_word(const RegistryPtr& reg, int v) {
  return DiffOpQ::partial(reg, v, RatFuncQ::one(reg));
}

/// lambda_i d_j.
inline DiffOpQ mixed_word(const RegistryPtr& reg, int i, int j) {
  return DiffOpQ::partial(reg, j, RatFuncQ(PolyQ::var(reg, i)));
}

/// lambda_i (sum_k lambda_k d_k - level).
inline DiffOpQ raise_word(const RegistryPtr& reg, int i,
                          const RatFuncQ& level) {
  DiffOpQ e = euler_operator(reg);
  DiffOpQ shift = DiffOpQ::identity(reg);
  shift.scale(-level);
  e += shift;
  e.scale(RatFuncQ(PolyQ::var(reg, i)));
  return e;
}

/// Sum over the twelve adjacent edge pairs of lambda_opp d_a d_b.
inline DiffOpQ opposite_cross_words(const RegistryPtr& reg) {
  DiffOpQ acc = DiffOpQ::zero(reg);
  for (const auto& t : tetra_edge_triples())
    acc += compose(mixed_word(reg, t.opp, t.a), lower_word(reg, t.b));
  return acc;
}

/// Sum over edges of lambda_i d_i (sum over adjacent edges of d_j).
inline DiffOpQ adjacency_words(const RegistryPtr& reg) {
  DiffOpQ acc = DiffOpQ::zero(reg);
  for (const auto& t : tetra_edge_triples()) {
    acc += compose(mixed_word(reg, t.a, t.a), lower_word(reg, t.b));
    acc += compose(mixed_word(reg, t.b, t.b), lower_word(reg, t.a));
  }
  return acc;
}

/// Half the radial operator written in generator words, with an adjustable
/// coefficient on the opposite-edge cross words.
inline DiffOpQ half_radial_word_form(const RegistryPtr& reg,
                                     const Rat& cross) {
  DiffOpQ acc = DiffOpQ::zero(reg);
  for (int v : var_slots(reg))
    acc += compose(mixed_word(reg, v, v), lower_word(reg, v)) * Rat(2);
  RatFuncQ d = param_rf(reg, "d");
  for (int v : var_slots(reg)) {
    DiffOpQ t = lower_word(reg, v);
    t.scale(d);
    acc += t;
  }
  acc += adjacency_words(reg);
  acc += opposite_cross_words(reg) * cross;
  return acc;
}

/// Half the polynomial-sector Hamiltonian in generator words, with an
/// adjustable coefficient on the opposite-edge cross words.
inline DiffOpQ half_qes_word_form(const RegistryPtr& reg, const Rat& cross) {
  DiffOpQ acc = DiffOpQ::zero(reg);
  for (int v : var_slots(reg))
    acc += compose(mixed_word(reg, v, v), lower_word(reg, v)) * Rat(-2);
  acc -= adjacency_words(reg);
  acc += opposite_cross_words(reg) * cross;
  RatFuncQ gm = param_rf(reg, "gamma"), om = param_rf(reg, "omega"),
           Ap = param_rf(reg, "A"), Np = param_rf(reg, "N");
  for (int v : var_slots(reg)) {
    DiffOpQ t = lower_word(reg, v);
    t.scale(-(RatFuncQ::constant(reg, Rat(3)) + gm * Rat(2)));
    acc += t;
    DiffOpQ r = raise_word(reg, v, Np);
    r.scale(Ap * Rat(8));
    acc += r;
    DiffOpQ m = mixed_word(reg, v, v);
    m.scale(om * Rat(8));
    acc += m;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Relative charts of the collinear problem
// ---------------------------------------------------------------------------

inline RegistryPtr rel3_registry() {
  return make_registry({"y12", "y13", "y14"}, standard_params());
}

/// Unit-coefficient kinetic form on the three relative coordinates.
inline DiffOpQ rel3_flat(const RegistryPtr& reg) {
  const int n = reg->size();
  std::vector<int> vs = var_slots(reg);
  DiffOpQ op = DiffOpQ::zero(reg);
  for (int i : vs) op.add_term(ExpVec::unit(n, i, 2), RatFuncQ::one(reg));
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) {
      ExpVec m(n);
      m.bump(vs[a]);
      m.bump(vs[b]);
      op.add_term(m, RatFuncQ::one(reg));
    }
  return op;
}

inline RegistryPtr xi_registry() {
  return make_registry({"xi1", "xi2", "xi3"}, standard_params());
}

/// Images of the elementary symmetric chart in the relative coordinates.
inline std::array<PolyQ, 3> xi_images(const RegistryPtr& rel) {
  PolyQ y1 = PolyQ::var(rel, "y12"), y2 = PolyQ::var(rel, "y13"),
        y3 = PolyQ::var(rel, "y14");
  return {y1 + y2 + y3, y1 * y2 + y1 * y3 + y2 * y3, y1 * y2 * y3};
}

/// The kinetic form pushed onto the elementary symmetric chart.
inline DiffOpQ xi_operator(const RegistryPtr& reg) {
  const int n = reg->size();
  int i1 = reg->index("xi1"), i2 = reg->index("xi2"), i3 = reg->index("xi3");
  PolyQ x1 = PolyQ::var(reg, i1), x2 = PolyQ::var(reg, i2),
        x3 = PolyQ::var(reg, i3);
  auto d2 = [&](int i, int j) {
    ExpVec m(n);
    m.bump(i);
    m.bump(j);
    return m;
  };
  DiffOpQ op = DiffOpQ::zero(reg);
  op.add_term(ExpVec::unit(n, i1, 2), RatFuncQ::constant(reg, Rat(6)));
  op.add_term(ExpVec::unit(n, i2, 2), RatFuncQ(x1 * x1 * Rat(3) - x2));
  op.add_term(ExpVec::unit(n, i3, 2), RatFuncQ(x2 * x2 - x1 * x3));
  op.add_term(d2(i1, i2), RatFuncQ(x1 * Rat(8)));
  op.add_term(d2(i1, i3), RatFuncQ(x2 * Rat(4)));
  op.add_term(d2(i2, i3), RatFuncQ((x1 * x2 - x3) * Rat(3)));
  op.add_term(ExpVec::unit(n, i2), RatFuncQ::constant(reg, Rat(3)));
  op.add_term(ExpVec::unit(n, i3), RatFuncQ(x1));
  return op;
}

inline RegistryPtr line4_registry() {
  return make_registry({"x1", "x2", "x3", "x4"}, standard_params());
}

/// Negative half flat Laplacian for four collinear unit-mass sites.
inline DiffOpQ line_kinetic(const RegistryPtr& reg) {
  const int n = reg->size();
  DiffOpQ op = DiffOpQ::zero(reg);
  for (int i : var_slots(reg))
    op.add_term(ExpVec::unit(n, i, 2), RatFuncQ::constant(reg, Rat(-1, 2)));
  return op;
}

inline RegistryPtr tau_registry() {
  return make_registry({"Y", "t2", "t3", "t4"}, standard_params());
}

/// Images of the centered symmetric chart in the line coordinates.
inline std::array<PolyQ, 4> tau_images(const RegistryPtr& line) {
  PolyQ x1 = PolyQ::var(line, "x1"), x2 = PolyQ::var(line, "x2"),
        x3 = PolyQ::var(line, "x3"), x4 = PolyQ::var(line, "x4");
  PolyQ Y = x1 + x2 + x3 + x4;
  std::array<PolyQ, 4> y = {x1 - Y * Rat(1, 4), x2 - Y * Rat(1, 4),
                            x3 - Y * Rat(1, 4), x4 - Y * Rat(1, 4)};
  PolyQ t2 = PolyQ::zero(line), t3 = PolyQ::zero(line);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      t2 += y[(std::size_t)i] * y[(std::size_t)j];
      for (int k = j + 1; k < 4; ++k)
        t3 += y[(std::size_t)i] * y[(std::size_t)j] * y[(std::size_t)k];
    }
  PolyQ t4 = y[0] * y[1] * y[2] * y[3];
  return {Y, t2, t3, t4};
}

/// The negative half Laplacian pushed onto the centered symmetric chart.
inline DiffOpQ tau_operator(const RegistryPtr& reg) {
  const int n = reg->size();
  int iy = reg->index("Y"), j2 = reg->index("t2"), j3 = reg->index("t3"),
      j4 = reg->index("t4");
  PolyQ t2 = PolyQ::var(reg, j2), t3 = PolyQ::var(reg, j3),
        t4 = PolyQ::var(reg, j4);
  auto d2 = [&](int i, int j) {
    ExpVec m(n);
    m.bump(i);
    m.bump(j);
    return m;
  };
  DiffOpQ op = DiffOpQ::zero(reg);
  op.add_term(ExpVec::unit(n, iy, 2), RatFuncQ::constant(reg, Rat(-2)));
  op.add_term(ExpVec::unit(n, j2, 2), RatFuncQ(t2));
  op.add_term(ExpVec::unit(n, j3, 2), RatFuncQ(t4 * Rat(2) - t2 * t2 * Rat(1, 2)));
  op.add_term(ExpVec::unit(n, j4, 2),
              RatFuncQ(t2 * t4 - t3 * t3 * Rat(3, 8)));
  op.add_term(d2(j2, j3), RatFuncQ(t3 * Rat(3)));
  op.add_term(d2(j2, j4), RatFuncQ(t4 * Rat(4)));
  op.add_term(d2(j3, j4), RatFuncQ(t2 * t3 * Rat(-1, 2)));
  op.add_term(ExpVec::unit(n, j2), RatFuncQ::constant(reg, Rat(3, 2)));
  op.add_term(ExpVec::unit(n, j4), RatFuncQ(t2 * Rat(1, 4)));
  return op;
}

// ---------------------------------------------------------------------------
// Pushforward checks
// ---------------------------------------------------------------------------

/// Images for every slot of the source registry: variables from the supplied
/// list, parameters mapped to the same-named parameter upstairs.
inline std::vector<PolyQ> chart_images(const RegistryPtr& src,
                                       const std::vector<PolyQ>& var_images,
                                       const RegistryPtr& up) {
  std::vector<PolyQ> out;
  out.reserve((std::size_t)src->size());
  std::size_t v = 0;
  for (int i = 0; i < src->size(); ++i) {
    if (src->is_param(i)) {
      out.push_back(up->has(src->name(i)) ? PolyQ::var(up, src->name(i))
                                          : PolyQ::zero(up));
    } else {
      out.push_back(var_images.at(v++));
    }
  }
  return out;
}

/// up(f o phi) == (down f) o phi for a polynomial test function f on the
/// derived chart.
inline bool pushforward_agrees(const DiffOpQ& up, const DiffOpQ& down,
                               const std::vector<PolyQ>& images,
                               const PolyQ& f) {
  PolyQ lhs = up.apply(f.subst(images)).as_poly();
  PolyQ rhs = down.apply(f).as_poly().subst(images);
  return lhs == rhs;
}

}  // namespace fourbody
