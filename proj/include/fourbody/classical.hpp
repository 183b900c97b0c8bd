#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fourbody/catalog.hpp"
#include "fourbody/numeval.hpp"

namespace fourbody {

/// Potential menu for the classical flow on the edge chart.
enum class PotentialKind { harmonic, solvable, custom };

struct ClassicalConfig {
    PotentialKind kind = PotentialKind::harmonic;
    Rat omega = Rat(1);
    Rat gamma = Rat(0);          // solvable potential only
    Rat coupling = Rat(0);       // solvable potential only
    std::optional<RatFuncQ> custom;  // used when kind == custom
    bool include_effective = false;  // add the chart's gauge-induced term
    Rat dim = Rat(3);                // dimension entering that term
};

using Vec6 = std::array<double, 6>;

struct TrajectoryPoint {
    double t = 0.0;
    Vec6 q{}, p{};
    double energy = 0.0;
    double boundary = 0.0;
};

struct TrajectoryConfig {
    double dt = 1e-3;
    std::size_t steps = 10000;
    bool verlet = false;       // default integrator is RK4
    double drift_limit = 0.0;  // >0: reject a step once relative drift passes it
    std::size_t record_every = 1;
    double fixed_point_tol = 1e-14;
    int fixed_point_iters = 100;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    std::size_t steps_taken = 0;
    bool boundary_hit = false;
    bool step_rejected = false;
    bool numeric_failure = false;
    double max_relative_drift = 0.0;
};

/** Hamiltonian flow of H(q, p) = sum_ij g^ij(q) p_i p_j + V(q) on the edge
 * chart, with the inverse-metric quadratic form taken as is (no half).  The
 * metric block and all force terms are exact symbolic derivatives evaluated
 * in double precision; integration stops when the chart determinant reaches
 * zero (the configuration degenerates out of the chart). */
class ClassicalSystem {
    RegistryPtr reg_;
    CompiledPoly g_[6][6];
    CompiledPoly dg_[6][6][6];  // dg_[k][i][j] = d g^ij / d q_k
    CompiledRatFunc pot_;
    CompiledRatFunc dpot_[6];
    double det_constant_ = 0.0;
    std::vector<std::pair<CompiledPoly, int>> det_factors_;

public:
    ClassicalSystem(const RegistryPtr& reg, const ClassicalConfig& cfg)
        : reg_(reg) {
        ChartForms chart = radial_chart(reg);
        auto gpoly = metric_poly(chart.metric, chart.coords, reg);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                g_[i][j] = CompiledPoly::from(gpoly[(std::size_t)i][(std::size_t)j]);
                for (int k = 0; k < 6; ++k)
                    dg_[k][i][j] = CompiledPoly::from(
                        gpoly[(std::size_t)i][(std::size_t)j].derivative(k));
            }

        RatFuncQ v = RatFuncQ::zero(reg);
        switch (cfg.kind) {
            case PotentialKind::harmonic:
                v = RatFuncQ(tetra_edge_sum(reg) * Rat(8)) *
                    RatFuncQ(PolyQ::var(reg, "omega") * PolyQ::var(reg, "omega"));
                break;
            case PotentialKind::solvable:
                v = ground_state_potential(reg);
                break;
            case PotentialKind::custom:
                if (!cfg.custom)
                    throw std::invalid_argument("custom potential not supplied");
                v = *cfg.custom;
                break;
        }
        if (cfg.include_effective) v = v + chart.potential;
        v = v.bind({{reg->index("omega"), cfg.omega},
                    {reg->index("gamma"), cfg.gamma},
                    {reg->index("A"), cfg.coupling},
                    {reg->index("d"), cfg.dim}});
        pot_ = CompiledRatFunc::from(v);
        for (int k = 0; k < 6; ++k)
            dpot_[k] = CompiledRatFunc::from(v.derivative(k));

        det_constant_ = chart.det.constant.to_double();
        for (const auto& [base, e] : chart.det.factors)
            det_factors_.emplace_back(CompiledPoly::from(base), e);
    }

    double kinetic(const Vec6& q, const Vec6& p) const {
        double acc = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                acc += g_[i][j].eval(q.data()) * p[(std::size_t)i] * p[(std::size_t)j];
        return acc;
    }

    double potential(const Vec6& q) const { return pot_.eval(q.data()); }

    double hamiltonian(const Vec6& q, const Vec6& p) const {
        return kinetic(q, p) + potential(q);
    }

    /// Chart determinant; positive on configurations the chart represents.
    double boundary(const Vec6& q) const {
        double d = det_constant_;
        for (const auto& [base, e] : det_factors_) {
            const double b = base.eval(q.data());
            for (int r = 0; r < e; ++r) d *= b;
        }
        return d;
    }

    /// dq/dt = dH/dp
    Vec6 velocity(const Vec6& q, const Vec6& p) const {
        Vec6 dq{};
        for (int i = 0; i < 6; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 6; ++j)
                acc += g_[i][j].eval(q.data()) * p[(std::size_t)j];
            dq[(std::size_t)i] = 2.0 * acc;
        }
        return dq;
    }

    /// dp/dt = -dH/dq, from the exact symbolic gradients
    Vec6 force(const Vec6& q, const Vec6& p) const {
        Vec6 dp{};
        for (int k = 0; k < 6; ++k) {
            double acc = dpot_[k].eval(q.data());
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    acc += dg_[k][i][j].eval(q.data()) * p[(std::size_t)i] *
                           p[(std::size_t)j];
            dp[(std::size_t)k] = -acc;
        }
        return dp;
    }

    /// Central finite-difference counterpart of force(), for cross-checking.
    Vec6 finite_difference_force(const Vec6& q, const Vec6& p,
                                 double h = 1e-6) const {
        Vec6 dp{};
        for (int k = 0; k < 6; ++k) {
            Vec6 qp = q, qm = q;
            qp[(std::size_t)k] += h;
            qm[(std::size_t)k] -= h;
            dp[(std::size_t)k] = -(hamiltonian(qp, p) - hamiltonian(qm, p)) / (2.0 * h);
        }
        return dp;
    }

    void rk4_step(Vec6& q, Vec6& p, double dt) const {
        auto stage = [this](const Vec6& qq, const Vec6& pp) {
            return std::make_pair(velocity(qq, pp), force(qq, pp));
        };
        auto shift = [](const Vec6& base, const Vec6& dir, double s) {
            Vec6 out;
            for (int i = 0; i < 6; ++i)
                out[(std::size_t)i] = base[(std::size_t)i] + s * dir[(std::size_t)i];
            return out;
        };
        auto [k1q, k1p] = stage(q, p);
        auto [k2q, k2p] = stage(shift(q, k1q, dt / 2), shift(p, k1p, dt / 2));
        auto [k3q, k3p] = stage(shift(q, k2q, dt / 2), shift(p, k2p, dt / 2));
        auto [k4q, k4p] = stage(shift(q, k3q, dt), shift(p, k3p, dt));
        for (int i = 0; i < 6; ++i) {
            q[(std::size_t)i] += dt / 6.0 *
                (k1q[(std::size_t)i] + 2 * k2q[(std::size_t)i] +
                 2 * k3q[(std::size_t)i] + k4q[(std::size_t)i]);
            p[(std::size_t)i] += dt / 6.0 *
                (k1p[(std::size_t)i] + 2 * k2p[(std::size_t)i] +
                 2 * k3p[(std::size_t)i] + k4p[(std::size_t)i]);
        }
    }

    /** Generalized Stoermer-Verlet (leapfrog for non-separable H): implicit
     * half-kick, implicit drift, explicit half-kick.  The implicit stages are
     * solved by fixed-point iteration; symmetric, hence time-reversible up to
     * the fixed-point tolerance. */
    void verlet_step(Vec6& q, Vec6& p, double dt, double tol = 1e-14,
                     int max_iters = 100) const {
        auto close = [tol](const Vec6& a, const Vec6& b) {
            double m = 0.0;
            for (int i = 0; i < 6; ++i)
                m = std::max(m, std::fabs(a[(std::size_t)i] - b[(std::size_t)i]));
            return m <= tol;
        };
        Vec6 ph = p;
        for (int it = 0; it < max_iters; ++it) {
            Vec6 f = force(q, ph);
            Vec6 next;
            for (int i = 0; i < 6; ++i)
                next[(std::size_t)i] =
                    p[(std::size_t)i] + dt / 2.0 * f[(std::size_t)i];
            const bool done = close(next, ph);
            ph = next;
            if (done) break;
        }
        Vec6 qn = q;
        const Vec6 v0 = velocity(q, ph);
        for (int it = 0; it < max_iters; ++it) {
            Vec6 v1 = velocity(qn, ph);
            Vec6 next;
            for (int i = 0; i < 6; ++i)
                next[(std::size_t)i] = q[(std::size_t)i] +
                    dt / 2.0 * (v0[(std::size_t)i] + v1[(std::size_t)i]);
            const bool done = close(next, qn);
            qn = next;
            if (done) break;
        }
        const Vec6 f1 = force(qn, ph);
        for (int i = 0; i < 6; ++i) {
            q[(std::size_t)i] = qn[(std::size_t)i];
            p[(std::size_t)i] =
                ph[(std::size_t)i] + dt / 2.0 * f1[(std::size_t)i];
        }
    }

    Trajectory integrate(const Vec6& q0, const Vec6& p0,
                         const TrajectoryConfig& cfg) const {
        Trajectory tr;
        Vec6 q = q0, p = p0;
        const double e0 = hamiltonian(q, p);
        const double scale = std::max(std::fabs(e0), 1e-30);
        double t = 0.0;
        auto record = [&](std::size_t step) {
            if (step % cfg.record_every == 0 || step == cfg.steps)
                tr.points.push_back({t, q, p, hamiltonian(q, p), boundary(q)});
        };
        record(0);
        for (std::size_t step = 1; step <= cfg.steps; ++step) {
            const Vec6 qprev = q, pprev = p;
            if (cfg.verlet)
                verlet_step(q, p, cfg.dt, cfg.fixed_point_tol,
                            cfg.fixed_point_iters);
            else
                rk4_step(q, p, cfg.dt);
            t = (double)step * cfg.dt;
            const double h = hamiltonian(q, p);
            if (!std::isfinite(h)) {
                // A singular effective potential blows up exactly on the
                // determinant wall, so a non-finite energy whose post-step
                // determinant is not positive is a boundary exit, not an
                // integrator fault.
                const double b = boundary(q);
                if (!(b > 0.0))
                    tr.boundary_hit = true;
                else
                    tr.numeric_failure = true;
                q = qprev;
                p = pprev;
                break;
            }
            const double drift = std::fabs(h - e0) / scale;
            if (cfg.drift_limit > 0.0 && drift > cfg.drift_limit) {
                q = qprev;
                p = pprev;
                tr.step_rejected = true;
                break;
            }
            if (drift > tr.max_relative_drift) tr.max_relative_drift = drift;
            tr.steps_taken = step;
            record(step);
            if (boundary(q) <= 0.0) {
                tr.boundary_hit = true;
                break;
            }
        }
        return tr;
    }
};

}  // namespace fourbody
