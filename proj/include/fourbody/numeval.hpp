#pragma once

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

#include "fourbody/poly.hpp"
#include "fourbody/ratfunc.hpp"
#include "fourbody/rational.hpp"

namespace fourbody {

/** Polynomial flattened into a coefficient/power table for fast repeated
    evaluation at double points.  Exact coefficients are converted once at
    compile time, so a CompiledPoly is only as accurate as double itself. */
struct CompiledPoly {
    struct Term {
        double c = 0.0;
        std::vector<std::pair<int, int>> pows;  // (variable slot, exponent)
    };
    std::vector<Term> terms;

    static CompiledPoly from(const Poly<Rat>& p) {
        CompiledPoly out;
        out.terms.reserve(p.terms().size());
        for (const auto& [m, c] : p.terms()) {
            Term t;
            t.c = c.to_double();
            for (int i = 0; i < (int)m.n; ++i)
                if (m[i] > 0) t.pows.emplace_back(i, m[i]);
            out.terms.push_back(std::move(t));
        }
        return out;
    }

    double eval(const double* x) const {
        double acc = 0.0;
        for (const auto& t : terms) {
            double v = t.c;
            for (const auto& [slot, e] : t.pows) {
                double b = x[slot];
                for (int k = 0; k < e; ++k) v *= b;
            }
            acc += v;
        }
        return acc;
    }
    double eval(const std::vector<double>& x) const { return eval(x.data()); }
};

/// Rational function compiled as numerator over powered denominator factors.
struct CompiledRatFunc {
    CompiledPoly num;
    std::vector<std::pair<CompiledPoly, int>> den;

    static CompiledRatFunc from(const RatFunc<Rat>& f) {
        CompiledRatFunc out;
        out.num = CompiledPoly::from(f.num());
        for (const auto& [base, e] : f.den())
            out.den.emplace_back(CompiledPoly::from(base), e);
        return out;
    }

    double eval(const double* x) const {
        double v = num.eval(x);
        for (const auto& [base, e] : den) {
            double b = base.eval(x);
            for (int k = 0; k < e; ++k) v /= b;
        }
        return v;
    }
    double eval(const std::vector<double>& x) const { return eval(x.data()); }
};

}  // namespace fourbody
