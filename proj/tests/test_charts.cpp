// Chart bundle checks: determinant certificates, gauge identities relating
// each reduced operator to its divergence form minus a scalar potential,
// exact flat-space oracles, pushforwards between charts, generator-word
// realizations, and the degeneration chain down to one degree of freedom.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fourbody/cartesian.hpp"
#include "fourbody/catalog.hpp"

#include <array>
#include <vector>

using namespace fourbody;

namespace {

DiffOpQ chart_rhs(const RegistryPtr& reg, const ChartForms& ch) {
  return ch.lb - DiffOpQ::mult(reg, ch.potential);
}

bool gauge_identity_holds(const RegistryPtr& reg, const ChartForms& ch) {
  return conjugated(ch.op, ch.gauge) == chart_rhs(reg, ch);
}

std::vector<PolyQ> to_vec(const std::array<PolyQ, 3>& a) {
  return {a[0], a[1], a[2]};
}

}  // namespace

TEST_CASE("edge chart determinant certificate") {
  auto reg = rho_registry();
  ChartForms ch = radial_chart(reg);
  CHECK(ch.det.constant == Rat(36864));
  REQUIRE(ch.det.factors.size() == 2);
  CHECK(ch.det.factors[0].first == tetra_volume_sq(reg));
  CHECK(ch.det.factors[0].second == 1);
  CHECK(ch.det.factors[1].first == tetra_metric_cofactor(reg));
  CHECK(ch.det.factors[1].second == 1);
}

TEST_CASE("edge chart gauge identity with formal dimension") {
  auto reg = rho_registry();
  ChartForms ch = radial_chart(reg);
  CHECK(gauge_identity_holds(reg, ch));
}

TEST_CASE("edge chart operator matches the flat kinetic oracle") {
  auto reg = rho_registry();
  PolyQ P = tetra_edge_sum(reg), S = tetra_face_sum(reg);
  PolyQ V = tetra_volume_sq(reg);
  PolyQ mix = PolyQ::var(reg, 0) * PolyQ::var(reg, 3) +
              PolyQ::var(reg, 5) * PolyQ::var(reg, 5);
  for (int dim : {3, 4, 5}) {
    DiffOpQ op = radial_operator(reg).bind({{reg->index("d"), Rat(dim)}});
    auto cart = cartesian_registry(4, dim);
    auto images = edge_images(cart, 4, dim);
    DiffOpQ flat = half_flat_laplacian(cart, 4, dim);
    CHECK(oracle_agrees(op, P, images, cart, flat));
    CHECK(oracle_agrees(op, S, images, cart, flat));
    CHECK(oracle_agrees(op, V, images, cart, flat));
    CHECK(oracle_agrees(op, mix, images, cart, flat));
  }
}

TEST_CASE("unequal-mass operator matches the mass-weighted flat oracle") {
  auto reg = rho_registry();
  const std::array<Rat, 4> mass = {Rat(1), Rat(2), Rat(3), Rat(4)};
  const std::vector<Rat> mvec = {Rat(1), Rat(2), Rat(3), Rat(4)};
  PolyQ Pt = mass_edge_sum(reg, mass), St = mass_face_sum(reg, mass);
  PolyQ V = tetra_volume_sq(reg);
  for (int dim : {3, 4}) {
    DiffOpQ op =
        radial_operator_mass(reg, mass).bind({{reg->index("d"), Rat(dim)}});
    auto cart = cartesian_registry(4, dim);
    auto images = edge_images(cart, 4, dim);
    DiffOpQ flat = half_flat_laplacian(cart, 4, dim, mvec);
    CHECK(oracle_agrees(op, Pt, images, cart, flat));
    CHECK(oracle_agrees(op, St, images, cart, flat));
    CHECK(oracle_agrees(op, V, images, cart, flat));
  }
}

TEST_CASE("equal masses collapse the mass-weighted operator") {
  auto reg = rho_registry();
  std::array<Rat, 4> unit = {Rat(1), Rat(1), Rat(1), Rat(1)};
  CHECK(radial_operator_mass(reg, unit) == radial_operator(reg));
}

TEST_CASE("invariants scale linearly under the operator") {
  auto reg = rho_registry();
  DiffOpQ op = radial_operator(reg);
  PolyQ d = PolyQ::var(reg, "d");
  PolyQ P = tetra_edge_sum(reg), S = tetra_face_sum(reg);
  PolyQ V = tetra_volume_sq(reg);
  CHECK(op.apply(P) == RatFuncQ(d * Rat(12)));
  CHECK(op.apply(S) == RatFuncQ((d - PolyQ::constant(reg, Rat(1))) * P *
                                Rat(1, 2)));
  CHECK(op.apply(V) == RatFuncQ((d - PolyQ::constant(reg, Rat(2))) * S *
                                Rat(1, 9)));
  auto u = opposite_edge_sums(reg);
  CHECK(op.apply(u[0]) == RatFuncQ(d * Rat(4)));
  CHECK(op.apply(u[1]) == RatFuncQ(d * Rat(4)));
  CHECK(op.apply(u[2]) == RatFuncQ(d * Rat(4)));
}

TEST_CASE("mass-weighted invariants scale the same way") {
  auto reg = rho_registry();
  const std::array<Rat, 4> mass = {Rat(1), Rat(2), Rat(3), Rat(4)};
  Rat M = Rat(10), mq = Rat(24);
  DiffOpQ op = radial_operator_mass(reg, mass);
  PolyQ d = PolyQ::var(reg, "d");
  PolyQ Pt = mass_edge_sum(reg, mass), St = mass_face_sum(reg, mass);
  PolyQ V = tetra_volume_sq(reg);
  CHECK(op.apply(Pt) == RatFuncQ(d * (Rat(3) * M)));
  CHECK(op.apply(St) ==
        RatFuncQ((d - PolyQ::constant(reg, Rat(1))) * Pt * (Rat(1, 2) / mq)));
  CHECK(op.apply(V) == RatFuncQ((d - PolyQ::constant(reg, Rat(2))) * St *
                                Rat(1, 9)));
}

TEST_CASE("opposite-pair chart: certificate, gauge identity, pushforward") {
  auto ureg = u_registry();
  ChartForms ch = u_chart(ureg);
  CHECK(ch.det.constant == Rat(32));
  REQUIRE(ch.det.factors.size() == 3);
  for (const auto& [b, e] : ch.det.factors) CHECK(e == 1);
  CHECK(gauge_identity_holds(ureg, ch));

  auto rho = rho_registry();
  auto images = chart_images(ureg, to_vec(opposite_edge_sums(rho)), rho);
  DiffOpQ up = radial_operator(rho);
  PolyQ u1 = PolyQ::var(ureg, "u1"), u2 = PolyQ::var(ureg, "u2"),
        u3 = PolyQ::var(ureg, "u3");
  CHECK(pushforward_agrees(up, ch.op, images, u1 * u2 * u3));
  CHECK(pushforward_agrees(up, ch.op, images, u1 * u1 - u2 * u3));
  CHECK(pushforward_agrees(up, ch.op, images, (u1 + u2 + u3) * (u1 + u2 + u3)));
}

TEST_CASE("invariant chart: certificate, gauge identity, pushforward") {
  auto vreg = vsp_registry();
  ChartForms ch = vsp_chart(vreg);
  CHECK(ch.det.constant == Rat(8, 9));
  REQUIRE(ch.det.factors.size() == 2);
  CHECK(ch.det.factors[0].first == PolyQ::var(vreg, "V"));
  CHECK(ch.det.factors[0].second == 1);
  CHECK(ch.det.factors[1].second == 1);
  CHECK(gauge_identity_holds(vreg, ch));

  auto rho = rho_registry();
  auto images = chart_images(
      vreg, {tetra_volume_sq(rho), tetra_face_sum(rho), tetra_edge_sum(rho)},
      rho);
  DiffOpQ up = radial_operator(rho);
  PolyQ V = PolyQ::var(vreg, "V"), S = PolyQ::var(vreg, "S"),
        P = PolyQ::var(vreg, "P");
  CHECK(pushforward_agrees(up, ch.op, images, V * P));
  CHECK(pushforward_agrees(up, ch.op, images, S * S - V));
  CHECK(pushforward_agrees(up, ch.op, images, P * P * P));
}

TEST_CASE("invariant chart at unequal masses") {
  auto vreg = vsp_registry();
  const std::array<Rat, 4> mass = {Rat(1), Rat(2), Rat(3), Rat(4)};
  ChartForms ch = vsp_chart_mass(vreg, mass);
  CHECK(ch.det.constant == Rat(5, 1296));
  REQUIRE(ch.det.factors.size() == 2);
  CHECK(gauge_identity_holds(vreg, ch));

  auto rho = rho_registry();
  auto images = chart_images(vreg,
                             {tetra_volume_sq(rho), mass_face_sum(rho, mass),
                              mass_edge_sum(rho, mass)},
                             rho);
  DiffOpQ up = radial_operator_mass(rho, mass);
  PolyQ V = PolyQ::var(vreg, "V"), S = PolyQ::var(vreg, "S"),
        P = PolyQ::var(vreg, "P");
  CHECK(pushforward_agrees(up, ch.op, images, V * S));
  CHECK(pushforward_agrees(up, ch.op, images, P * S));
  CHECK(pushforward_agrees(up, ch.op, images, V + P * P));
}

TEST_CASE("planar chart: certificate and gauge identity") {
  auto reg = sp_registry();
  ChartForms ch = planar_chart(reg);
  CHECK(ch.det.constant == Rat(4));
  REQUIRE(ch.det.factors.size() == 2);
  CHECK(ch.det.factors[0].first == PolyQ::var(reg, "S"));
  CHECK(ch.det.factors[0].second == 1);
  CHECK(ch.det.factors[1].second == 1);
  CHECK(gauge_identity_holds(reg, ch));
}

TEST_CASE("collective chart: certificate, gauge identity, pushforward") {
  auto preg = p_registry();
  ChartForms ch = collective_chart(preg);
  CHECK(ch.det.constant == Rat(8));
  REQUIRE(ch.det.factors.size() == 1);
  CHECK(ch.det.factors[0].second == 1);
  CHECK(gauge_identity_holds(preg, ch));

  auto rho = rho_registry();
  auto images = chart_images(preg, {tetra_edge_sum(rho)}, rho);
  PolyQ P = PolyQ::var(preg, "P");
  CHECK(pushforward_agrees(radial_operator(rho), ch.op, images, P * P * P));
  CHECK(pushforward_agrees(radial_operator(rho), ch.op, images,
                           P * P + P * Rat(7)));
}

TEST_CASE("degeneration chain: flattening and collinear limits") {
  auto vreg = vsp_registry();
  DiffOpQ full = vsp_chart(vreg).op;
  int iv = vreg->index("V"), is = vreg->index("S"), ip = vreg->index("P");
  int id = vreg->index("d");

  DiffOpQ planar = full.bind({{id, Rat(2)}, {iv, Rat(0)}});
  PolyQ S = PolyQ::var(vreg, is), P = PolyQ::var(vreg, ip);
  DiffOpQ expect = DiffOpQ::zero(vreg);
  const int n = vreg->size();
  ExpVec mss(n), msp(n);
  mss.bump(is); mss.bump(is);
  msp.bump(is); msp.bump(ip);
  expect.add_term(mss, RatFuncQ(S * P * Rat(1, 2)));
  expect.add_term(ExpVec::unit(n, ip, 2), RatFuncQ(P * Rat(8)));
  expect.add_term(msp, RatFuncQ(S * Rat(32)));
  expect.add_term(ExpVec::unit(n, is), RatFuncQ(P * Rat(1, 2)));
  expect.add_term(ExpVec::unit(n, ip), RatFuncQ::constant(vreg, Rat(24)));
  CHECK(planar == expect);

  DiffOpQ line = full.bind({{id, Rat(1)}, {iv, Rat(0)}, {is, Rat(0)}});
  DiffOpQ lexpect = DiffOpQ::zero(vreg);
  lexpect.add_term(ExpVec::unit(n, ip, 2), RatFuncQ(P * Rat(8)));
  lexpect.add_term(ExpVec::unit(n, ip), RatFuncQ::constant(vreg, Rat(12)));
  CHECK(line == lexpect);

  auto preg = p_registry();
  DiffOpQ coll = collective_chart(preg).op.bind({{preg->index("d"), Rat(1)}});
  PolyQ Pc = PolyQ::var(preg, "P");
  DiffOpQ cexpect = DiffOpQ::zero(preg);
  cexpect.add_term(ExpVec::unit(preg->size(), preg->index("P"), 2),
                   RatFuncQ(Pc * Rat(8)));
  cexpect.add_term(ExpVec::unit(preg->size(), preg->index("P")),
                   RatFuncQ::constant(preg, Rat(12)));
  CHECK(coll == cexpect);
}

TEST_CASE("generator words assemble the operator at one cross coefficient") {
  auto reg = rho_registry();
  CHECK(half_radial_word_form(reg, Rat(-1)) * Rat(2) == radial_operator(reg));
  CHECK_FALSE(half_radial_word_form(reg, Rat(-2)) * Rat(2) ==
              radial_operator(reg));
}

TEST_CASE("generator words assemble the confined operator") {
  auto reg = rho_registry();
  CHECK(half_qes_word_form(reg, Rat(1)) * Rat(2) == qes_hamiltonian(reg));
  CHECK_FALSE(half_qes_word_form(reg, Rat(2)) * Rat(2) ==
              qes_hamiltonian(reg));
}

TEST_CASE("vacuum-gauged Schroedinger operator at formal sector size") {
  auto reg = rho_registry();
  ChartForms ch = radial_chart(reg);
  RatFuncQ level = param_rf(reg, "N");
  DiffOpQ H = -ch.lb;
  H += DiffOpQ::mult(
      reg, qes_level_potential(reg, level) - ground_state_energy(reg));
  CHECK(conjugated(H, ground_state_gauge(reg)) == qes_hamiltonian(reg));
}

TEST_CASE("relative potential drops the cofactor singularity") {
  auto reg = rho_registry();
  RatFuncQ level = param_rf(reg, "N");
  CHECK(qes_level_potential(reg, level) - radial_chart(reg).potential ==
        relative_level_potential(reg));
}

TEST_CASE("vacuum energy value") {
  auto reg = rho_registry();
  std::vector<Rat> point((std::size_t)reg->size(), Rat(0));
  point[(std::size_t)reg->index("omega")] = Rat(1);
  CHECK(ground_state_energy(reg).eval(point) == Rat(36));
  point[(std::size_t)reg->index("gamma")] = Rat(2);
  CHECK(ground_state_energy(reg).eval(point) == Rat(84));
}

TEST_CASE("elementary symmetric chart of the three relative coordinates") {
  auto rel = rel3_registry();
  auto xreg = xi_registry();
  auto images = chart_images(xreg, to_vec(xi_images(rel)), rel);
  DiffOpQ up = rel3_flat(rel);
  DiffOpQ down = xi_operator(xreg);
  PolyQ x1 = PolyQ::var(xreg, "xi1"), x2 = PolyQ::var(xreg, "xi2"),
        x3 = PolyQ::var(xreg, "xi3");
  CHECK(pushforward_agrees(up, down, images, x1 * x1 * x1));
  CHECK(pushforward_agrees(up, down, images, x1 * x2 - x3));
  CHECK(pushforward_agrees(up, down, images, x3 * x3 + x2));
  CHECK(pushforward_agrees(up, down, images, x1 * x2 * x3));
}

TEST_CASE("centered symmetric chart of four collinear sites") {
  auto line = line4_registry();
  auto treg = tau_registry();
  auto arr = tau_images(line);
  auto images = chart_images(treg, {arr[0], arr[1], arr[2], arr[3]}, line);
  DiffOpQ up = line_kinetic(line);
  DiffOpQ down = tau_operator(treg);
  PolyQ Y = PolyQ::var(treg, "Y"), t2 = PolyQ::var(treg, "t2"),
        t3 = PolyQ::var(treg, "t3"), t4 = PolyQ::var(treg, "t4");
  CHECK(pushforward_agrees(up, down, images, Y * Y));
  CHECK(pushforward_agrees(up, down, images, t2 * t2));
  CHECK(pushforward_agrees(up, down, images, t3 * t3 - t2 * t4));
  CHECK(pushforward_agrees(up, down, images, t4 * t2 + t3));
  CHECK(pushforward_agrees(up, down, images, Y * t3 + t2 * Rat(5)));
}
