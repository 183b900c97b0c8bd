#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fourbody/cartesian.hpp"
#include "fourbody/nbody.hpp"

using namespace fourbody;

namespace {

DiffOpQ bind_dim(const DiffOpQ& op, const RegistryPtr& reg, int dim) {
    return op.bind({{reg->index("d"), Rat::from_int(dim)}});
}

bool radial_matches_flat(int nsites, const std::vector<Rat>& masses, int dim,
                         const std::vector<PolyQ>& probes,
                         const RegistryPtr& reg) {
    auto cart = cartesian_registry(nsites, dim);
    auto images = edge_images(cart, nsites, dim);
    auto flat = half_flat_laplacian(cart, nsites, dim, masses);
    auto op = bind_dim(nbody_radial(reg, nsites, masses), reg, dim);
    for (const auto& f : probes)
        if (!oracle_agrees(op, f, images, cart, flat)) return false;
    return true;
}

std::vector<PolyQ> quadratic_probes(const RegistryPtr& reg, int nedges) {
    std::vector<PolyQ> out;
    out.push_back(PolyQ::var(reg, 0));
    out.push_back(PolyQ::var(reg, 0) * PolyQ::var(reg, 0));
    out.push_back(PolyQ::var(reg, 0) * PolyQ::var(reg, 1) +
                  PolyQ::var(reg, nedges - 1) * Rat(3));
    PolyQ s = PolyQ::zero(reg);
    for (int v = 0; v < nedges; ++v) s = s + PolyQ::var(reg, v);
    out.push_back(s * s);
    return out;
}

struct SlotExpect {
    const char* name;
    Rat value;
    bool pinned;
};

void check_table(const NBodyDerivation& d,
                 const std::vector<SlotExpect>& expect) {
    REQUIRE(d.tmpl.coefficients.size() == expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k) {
        CAPTURE(expect[k].name);
        CHECK(d.tmpl.coefficients[k].slot.name() == expect[k].name);
        CHECK(d.tmpl.coefficients[k].value == expect[k].value);
        CHECK(d.tmpl.coefficients[k].pinned == expect[k].pinned);
    }
}

}  // namespace

TEST_CASE("pairwise radial operator matches the flat oracle site by site") {
    for (int n : {3, 4, 5}) {
        CAPTURE(n);
        auto reg = nbody_registry(n);
        const int ne = n * (n - 1) / 2;
        auto probes = quadratic_probes(reg, ne);

        std::vector<Rat> unit((std::size_t)n, Rat(1));
        std::vector<Rat> mixed;
        for (int i = 0; i < n; ++i) mixed.push_back(Rat(i + 1, 2));

        for (int dim : {n - 1, n}) {
            CAPTURE(dim);
            CHECK(radial_matches_flat(n, unit, dim, probes, reg));
            CHECK(radial_matches_flat(n, mixed, dim, probes, reg));
        }
    }
}

TEST_CASE("four-site specializations agree with the catalog operators") {
    auto reg = rho_registry();
    std::vector<Rat> unit(4, Rat(1));
    CHECK(nbody_radial(reg, 4, unit) ==
          radial_operator_n(reg, 4, param_rf(reg, "d")));

    std::array<Rat, 4> marr = {Rat(1), Rat(2), Rat(3), Rat(4)};
    std::vector<Rat> mvec(marr.begin(), marr.end());
    CHECK(nbody_radial(reg, 4, mvec) == radial_operator_mass(reg, marr));
}

TEST_CASE("five-site image of one edge square is twice the dimension") {
    auto reg = nbody_registry(5);
    std::vector<Rat> unit(5, Rat(1));
    auto op = nbody_radial(reg, 5, unit);
    PolyQ img = op.apply(PolyQ::var(reg, 0)).as_poly();
    CHECK(img == PolyQ::var(reg, "d") * Rat(2));
}

TEST_CASE("three-site derivation completes the two-variable operator") {
    auto d = derive_coefficients(3);
    CHECK(d.consistent);
    CHECK(d.pinned_match);
    CHECK(d.unique);
    CHECK(d.certified_degree == 3);
    CHECK(d.certified_count == 9);
    check_table(d, {{"a2", Rat(1, 2), true},
                    {"b2", Rat(6), true},
                    {"b3", Rat(24), false},
                    {"e0", Rat(6), true},
                    {"e1", Rat(1, 4), true}});
}

TEST_CASE("four-site derivation reproduces the volume chart coefficients") {
    auto d = derive_coefficients(4);
    CHECK(d.consistent);
    CHECK(d.pinned_match);
    CHECK(d.unique);
    CHECK(d.certified_degree == 3);
    CHECK(d.certified_count == 19);
    check_table(d, {{"a2", Rat(2), false},
                    {"a3", Rat(2, 9), true},
                    {"b2", Rat(8), true},
                    {"b3", Rat(32), false},
                    {"b4", Rat(48), false},
                    {"e0", Rat(12), true},
                    {"e1", Rat(1, 2), true},
                    {"e2", Rat(1, 9), true},
                    {"c11", Rat(54), false},
                    {"f11", Rat(1, 2), false}});

    // The assembled operator must equal the (V, S, P) chart operator once
    // the ascending volume variables are renamed onto that chart.
    auto vsp = vsp_registry();
    auto want = vsp_chart(vsp).op;

    std::vector<PolyQ> sub((std::size_t)d.tmpl.reg->size(),
                           PolyQ::zero(vsp));
    sub[(std::size_t)d.tmpl.reg->index("V2")] = PolyQ::var(vsp, "P");
    sub[(std::size_t)d.tmpl.reg->index("V3")] = PolyQ::var(vsp, "S");
    sub[(std::size_t)d.tmpl.reg->index("V4")] = PolyQ::var(vsp, "V");
    sub[(std::size_t)d.tmpl.reg->index("d")] = PolyQ::var(vsp, "d");
    std::vector<int> slot_map((std::size_t)d.tmpl.reg->size(), -1);
    slot_map[(std::size_t)d.tmpl.reg->index("V2")] = vsp->index("P");
    slot_map[(std::size_t)d.tmpl.reg->index("V3")] = vsp->index("S");
    slot_map[(std::size_t)d.tmpl.reg->index("V4")] = vsp->index("V");

    DiffOpQ got = DiffOpQ::zero(vsp);
    const DiffOpQ assembled = d.tmpl.assemble();
    for (const auto& [m, c] : assembled.terms()) {
        ExpVec mm(vsp->size());
        for (int i = 0; i < d.tmpl.reg->size(); ++i)
            if (m[i]) mm.bump(slot_map[(std::size_t)i], m[i]);
        got.add_term(mm, RatFuncQ(c.as_poly().subst(sub)));
    }
    CHECK(got == want);
}

TEST_CASE("five-site derivation is consistent, unique, and certified") {
    auto d = derive_coefficients(5);
    CHECK(d.consistent);
    CHECK(d.pinned_match);
    CHECK(d.unique);
    CHECK(d.offending.empty());
    CHECK(d.certified_degree == 3);
    CHECK(d.certified_count == 34);
    check_table(d, {{"a2", Rat(3), false},
                    {"a3", Rat(8, 9), false},
                    {"a4", Rat(1, 8), true},
                    {"b2", Rat(10), true},
                    {"b3", Rat(40), false},
                    {"b4", Rat(60), false},
                    {"b5", Rat(80), false},
                    {"e0", Rat(20), true},
                    {"e1", Rat(3, 4), true},
                    {"e2", Rat(2, 9), true},
                    {"e3", Rat(1, 16), true},
                    {"c11", Rat(8, 3), false},
                    {"f11", Rat(2, 9), false},
                    {"c12", Rat(320), false},
                    {"f12", Rat(2), false},
                    {"c22", Rat(135, 2), false},
                    {"f22", Rat(1, 2), false}});
}
