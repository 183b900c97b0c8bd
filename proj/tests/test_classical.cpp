#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fourbody/classical.hpp"

using namespace fourbody;

namespace {

constexpr int kEdge[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

const Vec6 kSlowQ = {1.0, 1.1, 0.9, 1.05, 0.95, 1.02};
const Vec6 kSlowP = {0.0004, -0.0003, 0.0002, -0.0004, 0.0003, 0.0001};

ClassicalSystem harmonic_system(const RegistryPtr& reg, Rat omega) {
    ClassicalConfig cfg;
    cfg.kind = PotentialKind::harmonic;
    cfg.omega = omega;
    return ClassicalSystem(reg, cfg);
}

double max_component_gap(const Vec6& a, const Vec6& b) {
    double m = 0.0;
    for (int c = 0; c < 6; ++c) m = std::max(m, std::fabs(a[c] - b[c]));
    return m;
}

}  // namespace

TEST_CASE("kinetic and potential evaluations at the regular tetrahedron") {
    auto reg = rho_registry();
    Vec6 one = {1, 1, 1, 1, 1, 1};
    Vec6 ones_p = {1, 1, 1, 1, 1, 1};
    Vec6 zero = {0, 0, 0, 0, 0, 0};

    auto sys = harmonic_system(reg, Rat(1));
    CHECK(sys.kinetic(one, ones_p) == doctest::Approx(48.0).epsilon(1e-14));
    CHECK(sys.potential(one) == doctest::Approx(48.0).epsilon(1e-14));
    CHECK(sys.hamiltonian(one, zero) == doctest::Approx(48.0).epsilon(1e-14));
    CHECK(sys.boundary(one) == doctest::Approx(2048.0).epsilon(1e-14));

    // Solvable-model potential at omega=1, gamma=0: the singular part
    // (3P^2+112S)/(32C) contributes 3/2 and the confinement 8P contributes 48.
    ClassicalConfig sc;
    sc.kind = PotentialKind::solvable;
    ClassicalSystem solv(reg, sc);
    CHECK(solv.potential(one) == doctest::Approx(49.5).epsilon(1e-14));
    CHECK(solv.kinetic(one, zero) == 0.0);

    // gamma=2 adds gamma(gamma-1) S/(18 vol^2) = 2*(3/4)/(18/72) = 6.
    sc.gamma = Rat(2);
    ClassicalSystem solv2(reg, sc);
    CHECK(solv2.potential(one) == doctest::Approx(55.5).epsilon(1e-14));
}

TEST_CASE("trajectory matches the closed-form flow of four harmonically bound sites") {
    // The chart Hamiltonian corresponds to Cartesian kinetic energy
    // (1/2) sum p^2, so site velocities equal the pulled-back momenta and
    // relative coordinates oscillate at frequency 8*omega.
    auto reg = rho_registry();
    auto sys = harmonic_system(reg, Rat(1, 8));
    const double omega = 0.125, nu = 8.0 * omega;

    const double x[4][3] = {
        {0, 0, 0}, {1, 0, 0}, {0.2, 1.1, 0}, {0.3, 0.4, 0.9}};
    Vec6 q0, p0 = {3e-4, -2e-4, 1e-4, -3e-4, 2e-4, 1.5e-4};
    for (int e = 0; e < 6; ++e) {
        double s = 0;
        for (int k = 0; k < 3; ++k) {
            double d = x[kEdge[e][0]][k] - x[kEdge[e][1]][k];
            s += d * d;
        }
        q0[e] = s;
    }
    double xd[4][3] = {};
    for (int e = 0; e < 6; ++e) {
        int i = kEdge[e][0], j = kEdge[e][1];
        for (int k = 0; k < 3; ++k) {
            double d = 2.0 * (x[i][k] - x[j][k]);
            xd[i][k] += p0[e] * d;
            xd[j][k] -= p0[e] * d;
        }
    }

    TrajectoryConfig tc;
    tc.dt = 5e-4;
    tc.steps = 2000;
    auto tr = sys.integrate(q0, p0, tc);
    REQUIRE(tr.steps_taken == 2000);
    CHECK_FALSE(tr.boundary_hit);
    CHECK_FALSE(tr.numeric_failure);
    CHECK(tr.max_relative_drift < 1e-12);

    double sup = 0.0, moved = 0.0;
    for (const auto& pt : tr.points) {
        for (int e = 0; e < 6; ++e) {
            int i = kEdge[e][0], j = kEdge[e][1];
            double s = 0;
            for (int k = 0; k < 3; ++k) {
                double r0 = x[i][k] - x[j][k];
                double v0 = xd[i][k] - xd[j][k];
                double r = r0 * std::cos(nu * pt.t) + v0 / nu * std::sin(nu * pt.t);
                s += r * r;
            }
            sup = std::max(sup, std::fabs(pt.q[e] - s));
            moved = std::max(moved, std::fabs(pt.q[e] - q0[e]));
        }
    }
    CHECK(moved > 0.5);
    CHECK(sup < 1e-10);
}

TEST_CASE("energy drift stays tiny over ten thousand fourth-order steps") {
    auto reg = rho_registry();
    auto sys = harmonic_system(reg, Rat(1, 128));
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.steps = 10000;
    tc.record_every = 100;
    auto tr = sys.integrate(kSlowQ, kSlowP, tc);
    REQUIRE(tr.steps_taken == 10000);
    CHECK_FALSE(tr.boundary_hit);
    CHECK_FALSE(tr.numeric_failure);
    CHECK(tr.max_relative_drift < 1e-8);

    double min_det = 1e300, swing = 0.0;
    for (const auto& pt : tr.points) {
        min_det = std::min(min_det, pt.boundary);
        swing = std::max(swing, max_component_gap(pt.q, kSlowQ));
    }
    CHECK(min_det > 100.0);
    CHECK(swing > 0.3);
}

TEST_CASE("implicit midpoint-style two-step scheme conserves energy and reverses") {
    auto reg = rho_registry();
    auto sys = harmonic_system(reg, Rat(1, 128));
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.steps = 10000;
    tc.record_every = 1000;
    tc.verlet = true;
    auto tr = sys.integrate(kSlowQ, kSlowP, tc);
    REQUIRE(tr.steps_taken == 10000);
    CHECK_FALSE(tr.boundary_hit);
    CHECK(tr.max_relative_drift < 1e-8);

    Vec6 q = kSlowQ, p = kSlowP;
    for (int s = 0; s < 2000; ++s) sys.verlet_step(q, p, 1e-3, 1e-14, 100);
    CHECK(max_component_gap(q, kSlowQ) > 1e-3);
    for (int c = 0; c < 6; ++c) p[c] = -p[c];
    for (int s = 0; s < 2000; ++s) sys.verlet_step(q, p, 1e-3, 1e-14, 100);
    CHECK(max_component_gap(q, kSlowQ) < 1e-12);
}

TEST_CASE("integrating forward then with negated momenta returns to the start") {
    auto reg = rho_registry();
    auto sys = harmonic_system(reg, Rat(1, 128));
    Vec6 q = kSlowQ, p = kSlowP;
    for (int s = 0; s < 2000; ++s) sys.rk4_step(q, p, 1e-3);
    CHECK(max_component_gap(q, kSlowQ) > 1e-3);
    for (int c = 0; c < 6; ++c) p[c] = -p[c];
    for (int s = 0; s < 2000; ++s) sys.rk4_step(q, p, 1e-3);
    CHECK(max_component_gap(q, kSlowQ) < 1e-6);
}

TEST_CASE("analytic forces agree with central finite differences") {
    auto reg = rho_registry();
    auto sys = harmonic_system(reg, Rat(1, 128));
    auto fa = sys.force(kSlowQ, kSlowP);
    auto fd = sys.finite_difference_force(kSlowQ, kSlowP);
    double scale = 0.0;
    for (int c = 0; c < 6; ++c) scale = std::max(scale, std::fabs(fa[c]));
    REQUIRE(scale > 0.0);
    for (int c = 0; c < 6; ++c)
        CHECK(std::fabs(fa[c] - fd[c]) / scale < 1e-5);
}

TEST_CASE("position error self-converges at fourth order under step halving") {
    auto reg = rho_registry();
    auto sys = harmonic_system(reg, Rat(1, 8));
    const double x[4][3] = {
        {0, 0, 0}, {1, 0, 0}, {0.2, 1.1, 0}, {0.3, 0.4, 0.9}};
    Vec6 q0, p0 = {3e-4, -2e-4, 1e-4, -3e-4, 2e-4, 1.5e-4};
    for (int e = 0; e < 6; ++e) {
        double s = 0;
        for (int k = 0; k < 3; ++k) {
            double d = x[kEdge[e][0]][k] - x[kEdge[e][1]][k];
            s += d * d;
        }
        q0[e] = s;
    }

    std::vector<Vec6> finals;
    for (double dt : {0.01, 0.005, 0.0025, 0.00125, 0.000625}) {
        TrajectoryConfig tc;
        tc.dt = dt;
        tc.steps = (std::size_t)std::llround(0.8 / dt);
        tc.record_every = tc.steps;
        auto tr = sys.integrate(q0, p0, tc);
        REQUIRE(tr.steps_taken == tc.steps);
        finals.push_back(tr.points.back().q);
    }
    std::vector<double> errs;
    for (std::size_t k = 0; k + 1 < finals.size(); ++k)
        errs.push_back(max_component_gap(finals[k], finals[k + 1]));
    for (std::size_t k = 0; k + 1 < errs.size(); ++k) {
        REQUIRE(errs[k + 1] > 0.0);
        CHECK(std::log2(errs[k] / errs[k + 1]) > 3.5);
    }
}

TEST_CASE("a critical point of the potential with zero momentum stays put") {
    auto reg = rho_registry();
    PolyQ v = PolyQ::zero(reg);
    for (int s = 0; s < 6; ++s) {
        PolyQ d = PolyQ::var(reg, s) - PolyQ::constant(reg, Rat(1));
        v = v + d * d;
    }
    ClassicalConfig cfg;
    cfg.kind = PotentialKind::custom;
    cfg.custom = RatFuncQ(v);
    ClassicalSystem sys(reg, cfg);

    Vec6 one = {1, 1, 1, 1, 1, 1}, zero = {0, 0, 0, 0, 0, 0};
    for (bool verlet : {false, true}) {
        CAPTURE(verlet);
        TrajectoryConfig tc;
        tc.dt = 1e-3;
        tc.steps = 100;
        tc.verlet = verlet;
        auto tr = sys.integrate(one, zero, tc);
        REQUIRE(tr.steps_taken == 100);
        CHECK(max_component_gap(tr.points.back().q, one) == 0.0);
        CHECK(max_component_gap(tr.points.back().p, zero) == 0.0);
    }
}

TEST_CASE("effective-potential infall at d=4 terminates on the volume wall") {
    // With d=4 the S/volume term of the reduced potential is attractive, so
    // a flattened start falls into the determinant zero set in finite time.
    auto reg = rho_registry();
    ClassicalConfig cfg;
    cfg.kind = PotentialKind::custom;
    cfg.custom = RatFuncQ(PolyQ::zero(reg));
    cfg.include_effective = true;
    cfg.dim = Rat(4);
    ClassicalSystem sys(reg, cfg);

    Vec6 q0 = {1, 1, 2.7, 1, 1, 1}, p0 = {0, 0, 0, 0, 0, 0};
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.steps = 20000;
    auto tr = sys.integrate(q0, p0, tc);
    CHECK(tr.boundary_hit);
    CHECK_FALSE(tr.numeric_failure);
    CHECK(tr.steps_taken < 1000);
}

TEST_CASE("a start outside the realizable region terminates immediately") {
    auto reg = rho_registry();
    ClassicalConfig cfg;
    cfg.kind = PotentialKind::custom;
    cfg.custom = RatFuncQ(PolyQ::zero(reg));
    ClassicalSystem sys(reg, cfg);

    Vec6 q0 = {1, 1, 3.2, 1, 1, 1}, p0 = {0, 0, 1e-3, 0, 0, 0};
    CHECK(sys.boundary(q0) < 0.0);
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.steps = 100;
    auto tr = sys.integrate(q0, p0, tc);
    CHECK(tr.boundary_hit);
    CHECK(tr.steps_taken == 1);
}

TEST_CASE("a drift bound rejects the offending step and stops") {
    // Full-strength coupling collapses the shape within a fifth of a time
    // unit; the drift monitor must bail out before the blowup.
    auto reg = rho_registry();
    auto sys = harmonic_system(reg, Rat(1));
    Vec6 q0 = {1, 1, 1, 1, 1, 1}, p0 = {0, 0, 0, 0, 0, 0};
    TrajectoryConfig tc;
    tc.dt = 1e-3;
    tc.steps = 20000;
    tc.drift_limit = 1e-8;
    auto tr = sys.integrate(q0, p0, tc);
    CHECK(tr.step_rejected);
    CHECK_FALSE(tr.boundary_hit);
    CHECK_FALSE(tr.numeric_failure);
    CHECK(tr.steps_taken < 500);
    CHECK(tr.max_relative_drift <= 1e-8);
}
