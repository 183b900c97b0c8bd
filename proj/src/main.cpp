// Command-line frontend: identity verification suites, operator catalog
// serialization, solvable-sector spectra, potential reports, classical
// trajectories, site-count coefficient derivation, and exact shape
// classification.  Exit codes: 0 success, 1 identity failure (witness in the
// report), 2 malformed usage or config.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fourbody/cartesian.hpp"
#include "fourbody/classical.hpp"
#include "fourbody/nbody.hpp"
#include "fourbody/qes.hpp"
#include "fourbody/symmetry.hpp"

using namespace fourbody;
using njson = nlohmann::ordered_json;

namespace {

constexpr const char* kReportSchema = "fourbody-report/1";
constexpr const char* kOperatorSchema = "fourbody-operator/1";

// --- small utilities ---------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Rat> parse_rats(const std::string& csv, std::size_t expect) {
    std::vector<Rat> out;
    for (const auto& tok : split(csv, ',')) out.push_back(Rat::parse(tok));
    if (expect && out.size() != expect)
        throw std::invalid_argument("expected " + std::to_string(expect) +
                                    " comma-separated values, got " +
                                    std::to_string(out.size()));
    return out;
}

Vec6 parse_vec6(const std::string& csv) {
    auto toks = split(csv, ',');
    if (toks.size() != 6)
        throw std::invalid_argument("expected 6 comma-separated numbers");
    Vec6 v;
    for (int i = 0; i < 6; ++i) v[i] = std::stod(toks[(std::size_t)i]);
    return v;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << body;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const njson& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::printf("%s\n", report.dump(2).c_str());
    } else {
        write_text(out_path, report.dump(2) + "\n");
    }
}

long binom(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// --- operator catalog ---------------------------------------------------

struct CatalogEntry {
    std::string name;
    std::string desc;
    std::pair<RegistryPtr, DiffOpQ> (*make)();
};

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"delta-radial-rho", "radial operator on the six edge squares",
         [] {
             auto reg = rho_registry();
             return std::make_pair(reg, radial_operator(reg));
         }},
        {"lb-radial-rho",
         "divergence-form companion of the edge-square operator",
         [] {
             auto reg = rho_registry();
             return std::make_pair(reg, radial_chart(reg).lb);
         }},
        {"euler-rho", "degree-counting operator on the edge squares",
         [] {
             auto reg = rho_registry();
             return std::make_pair(reg, euler_operator(reg));
         }},
        {"delta-vsp", "operator on the invariant chart (V, S, P)",
         [] {
             auto reg = vsp_registry();
             return std::make_pair(reg, vsp_chart(reg).op);
         }},
        {"delta-u", "operator on the opposite-pair sums (u1, u2, u3)",
         [] {
             auto reg = u_registry();
             return std::make_pair(reg, u_chart(reg).op);
         }},
        {"delta-planar", "operator on the flattened chart (S, P)",
         [] {
             auto reg = sp_registry();
             return std::make_pair(reg, planar_chart(reg).op);
         }},
        {"delta-collective", "operator on the single collective variable P",
         [] {
             auto reg = p_registry();
             return std::make_pair(reg, collective_chart(reg).op);
         }},
        {"qes-hamiltonian",
         "gauged confined operator at formal sector size N",
         [] {
             auto reg = rho_registry();
             return std::make_pair(reg, qes_hamiltonian(reg));
         }},
    };
    return entries;
}

std::string registry_line(const RegistryPtr& reg) {
    std::string vars, params;
    for (int i = 0; i < reg->size(); ++i) {
        std::string& dst = reg->is_param(i) ? params : vars;
        if (!dst.empty()) dst += " ";
        dst += reg->name(i);
    }
    return vars + " | " + params;
}

std::string golden_text(const CatalogEntry& e) {
    auto [reg, op] = e.make();
    std::string out = "fourbody-operator v1\n";
    out += "name: " + e.name + "\n";
    out += "registry: " + registry_line(reg) + "\n";
    out += "terms: " + std::to_string(op.terms().size()) + "\n";
    out += op.str();
    return out;
}

njson operator_json(const CatalogEntry& e) {
    auto [reg, op] = e.make();
    njson j;
    j["schema"] = kOperatorSchema;
    j["name"] = e.name;
    njson vars = njson::array(), params = njson::array();
    for (int i = 0; i < reg->size(); ++i)
        (reg->is_param(i) ? params : vars).push_back(reg->name(i));
    j["registry"] = {{"vars", vars}, {"params", params}};
    std::map<ExpVec, RatFuncQ, GradedLexGreater> sorted(op.terms().begin(),
                                                        op.terms().end());
    njson terms = njson::array();
    for (const auto& [m, c] : sorted) {
        njson deriv = njson::array();
        for (int i = 0; i < reg->size(); ++i)
            if (m[i])
                deriv.push_back({{"slot", reg->name(i)}, {"order", m[i]}});
        terms.push_back({{"derivative", deriv}, {"coefficient", c.str()}});
    }
    j["terms"] = terms;
    return j;
}

int run_catalog(const std::string& action, const std::string& name,
                const std::string& format, const std::string& out_path,
                const std::string& check_path) {
    if (action == "list") {
        for (const auto& e : catalog_entries())
            std::printf("%-18s %s\n", e.name.c_str(), e.desc.c_str());
        return 0;
    }
    const CatalogEntry* entry = nullptr;
    for (const auto& e : catalog_entries())
        if (e.name == name) entry = &e;
    if (!entry) {
        std::fprintf(stderr, "unknown catalog entry: %s (try `catalog list`)\n",
                     name.c_str());
        return 2;
    }
    std::string body = format == "json" ? operator_json(*entry).dump(2) + "\n"
                                        : golden_text(*entry);
    if (!check_path.empty()) {
        if (read_text(check_path) != body) {
            std::fprintf(stderr, "catalog %s differs from %s\n", name.c_str(),
                         check_path.c_str());
            return 1;
        }
        std::printf("catalog %s matches %s byte for byte\n", name.c_str(),
                    check_path.c_str());
        return 0;
    }
    if (out_path.empty())
        std::fputs(body.c_str(), stdout);
    else
        write_text(out_path, body);
    return 0;
}

// --- verify -------------------------------------------------------------

struct Check {
    std::string name;
    bool pass = true;
    std::string witness;  // populated on failure
};

struct Suite {
    std::string name;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    void add(const std::string& name, bool pass,
             const std::string& witness = "") {
        checks.push_back({name, pass, pass ? "" : witness});
    }
    int failures() const {
        int n = 0;
        for (const auto& c : checks) n += c.pass ? 0 : 1;
        return n;
    }
};

std::string clip(std::string s) {
    if (s.size() > 600) s = s.substr(0, 600) + "...";
    return s;
}

bool gauge_ok(const RegistryPtr& reg, const ChartForms& ch) {
    return conjugated(ch.op, ch.gauge) ==
           ch.lb - DiffOpQ::mult(reg, ch.potential);
}

std::vector<ExpVec> monomials_through(const RegistryPtr& reg, int nvars,
                                      int dmax) {
    std::vector<ExpVec> out;
    for (int d = 1; d <= dmax; ++d) {
        ExpVec cur(reg->size());
        detail::nbody_monomials(nvars, d, 0, cur, out);
    }
    return out;
}

PolyQ random_poly(std::mt19937_64& rng, const RegistryPtr& reg, int nvars) {
    std::uniform_int_distribution<int> deg(0, 3), var(0, nvars - 1),
        num(-9, 9), den(1, 9), len(1, 5);
    PolyQ p = PolyQ::zero(reg);
    const int terms = len(rng);
    for (int t = 0; t < terms; ++t) {
        ExpVec m(reg->size());
        const int d = deg(rng);
        for (int k = 0; k < d; ++k) m.bump(var(rng));
        int n = num(rng);
        if (n == 0) n = 1;
        p += PolyQ::monomial(reg, m, Rat(n, (unsigned long)den(rng)));
    }
    return p;
}

DiffOpQ rename_onto(const DiffOpQ& src, const RegistryPtr& dst) {
    auto sreg = src.registry();
    std::vector<PolyQ> sub((std::size_t)sreg->size(), PolyQ::zero(dst));
    std::vector<int> slot((std::size_t)sreg->size(), -1);
    for (int i = 0; i < sreg->size(); ++i) {
        if (!dst->has(sreg->name(i))) continue;
        sub[(std::size_t)i] = PolyQ::var(dst, sreg->name(i));
        slot[(std::size_t)i] = dst->index(sreg->name(i));
    }
    DiffOpQ out = DiffOpQ::zero(dst);
    for (const auto& [m, c] : src.terms()) {
        ExpVec mm(dst->size());
        for (int i = 0; i < sreg->size(); ++i)
            if (m[i]) mm.bump(slot[(std::size_t)i], m[i]);
        out.add_term(mm, RatFuncQ(c.as_poly().subst(sub)));
    }
    return out;
}

Suite suite_oracle(std::uint64_t seed) {
    Suite s{"oracle", {}, {}};
    auto reg = rho_registry();
    std::mt19937_64 rng(seed);
    for (int dim : {3, 4, 5}) {
        auto cart = cartesian_registry(4, dim);
        auto images = edge_images(cart, 4, dim);
        DiffOpQ flat = half_flat_laplacian(cart, 4, dim);
        DiffOpQ op = radial_operator(reg).bind({{reg->index("d"), Rat(dim)}});
        for (int k = 0; k < 5; ++k) {
            PolyQ f = random_poly(rng, reg, 6);
            s.add("equal-mass flat oracle, dim " + std::to_string(dim) +
                      ", draw " + std::to_string(k),
                  oracle_agrees(op, f, images, cart, flat), clip(f.str()));
        }
    }
    std::uniform_int_distribution<int> mnum(1, 9), mden(1, 4);
    std::array<Rat, 4> mass;
    std::vector<Rat> mvec;
    for (int i = 0; i < 4; ++i) {
        mass[(std::size_t)i] = Rat(mnum(rng), (unsigned long)mden(rng));
        mvec.push_back(mass[(std::size_t)i]);
    }
    for (int dim : {3, 4}) {
        auto cart = cartesian_registry(4, dim);
        auto images = edge_images(cart, 4, dim);
        DiffOpQ flat = half_flat_laplacian(cart, 4, dim, mvec);
        DiffOpQ op =
            radial_operator_mass(reg, mass).bind({{reg->index("d"), Rat(dim)}});
        for (int k = 0; k < 5; ++k) {
            PolyQ f = random_poly(rng, reg, 6);
            s.add("mass-weighted flat oracle, dim " + std::to_string(dim) +
                      ", draw " + std::to_string(k),
                  oracle_agrees(op, f, images, cart, flat), clip(f.str()));
        }
    }
    return s;
}

Suite suite_certificates() {
    Suite s{"certificates", {}, {}};
    auto certify = [&](const char* what, const ChartForms& ch,
                       const RegistryPtr& reg, const Rat& constant) {
        PolyQ det = poly_det(metric_poly(ch.metric, ch.coords, reg));
        std::vector<PolyQ> bases;
        for (const auto& [b, e] : ch.det.factors) {
            (void)e;
            bases.push_back(b);
        }
        auto cert = factor_certificate(det, bases);
        bool ok = cert && cert->constant == constant &&
                  cert->expanded(reg) == det;
        s.add(what, ok,
              cert ? "quotient " + cert->constant.str() : "no certificate");
    };
    auto rho = rho_registry();
    certify("edge chart determinant = 36864 * volume * cofactor",
            radial_chart(rho), rho, Rat(36864));
    auto vreg = vsp_registry();
    certify("invariant chart determinant certificate", vsp_chart(vreg), vreg,
            Rat(8, 9));
    auto ureg = u_registry();
    certify("opposite-pair chart determinant = 32 * triangle product",
            u_chart(ureg), ureg, Rat(32));
    const std::array<Rat, 4> mass = {Rat(1), Rat(2), Rat(3), Rat(4)};
    certify("mass-weighted edge chart certificate (masses 1,2,3,4)",
            radial_chart_mass(rho, mass), rho, Rat(160));
    certify("mass-weighted invariant chart certificate (masses 1,2,3,4)",
            vsp_chart_mass(vreg, mass), vreg, Rat(5, 1296));
    return s;
}

Suite suite_symmetry() {
    Suite s{"symmetry", {}, {}};
    auto rho = rho_registry();
    DiffOpQ family =
        edge_rotation<Rat>(rho, PolyQ::var(rho, "a"), PolyQ::var(rho, "b"),
                           PolyQ::var(rho, "c"));
    DiffOpQ resid = commutator(radial_operator(rho), family);
    s.add("formal vector-field family commutes", resid.is_zero(),
          clip(resid.str()));

    auto reg = nbody_registry(4);
    DiffOpR j1 = rotation_j1(reg), j2 = rotation_j2(reg),
            j3 = rotation_j3(reg);
    s.add("rotation triple closes cyclically",
          commutator(j1, j2) == j3 && commutator(j2, j3) == j1 &&
              commutator(j3, j1) == j2);
    DiffOpR delta = lift_op(radial_operator_n(reg, 4, param_rf(reg, "d")));
    s.add("rotation triple commutes with the operator",
          commutator(delta, j1).is_zero() && commutator(delta, j2).is_zero() &&
              commutator(delta, j3).is_zero());

    LadderFamily fam = ladder_family(reg);
    std::vector<DiffOpR> ops = {fam.delta, fam.f[0], fam.f[1],
                                fam.f[2],  fam.f[3], fam.f[4]};
    bool pairwise = true;
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j)
            pairwise = pairwise && commutator(ops[i], ops[j]).is_zero();
    s.add("six-operator family commutes pairwise", pairwise);
    return s;
}

Suite suite_words() {
    Suite s{"words", {}, {}};
    auto rho = rho_registry();
    s.add("generator word form assembles the radial operator",
          half_radial_word_form(rho, Rat(-1)) * Rat(2) ==
              radial_operator(rho));
    s.add("generator word form assembles the confined operator",
          half_qes_word_form(rho, Rat(1)) * Rat(2) == qes_hamiltonian(rho));

    auto rel = rel3_registry();
    auto xreg = xi_registry();
    auto imgs = xi_images(rel);
    auto images = chart_images(xreg, {imgs[0], imgs[1], imgs[2]}, rel);
    DiffOpQ up = rel3_flat(rel), down = xi_operator(xreg);
    bool all = true;
    std::string witness;
    for (const auto& m : monomials_through(xreg, 3, 4)) {
        PolyQ f = PolyQ::monomial(xreg, m, Rat(1));
        if (!pushforward_agrees(up, down, images, f)) {
            all = false;
            witness = clip(f.str());
        }
    }
    s.add("symmetric chart pushforward through degree 4", all, witness);
    return s;
}

Suite suite_gauge() {
    Suite s{"gauge", {}, {}};
    auto rho = rho_registry();
    auto vreg = vsp_registry();
    auto ureg = u_registry();
    auto spreg = sp_registry();
    auto preg = p_registry();
    const std::array<Rat, 4> mass = {Rat(1), Rat(2), Rat(3), Rat(4)};
    s.add("edge chart", gauge_ok(rho, radial_chart(rho)));
    s.add("invariant chart", gauge_ok(vreg, vsp_chart(vreg)));
    s.add("flattened chart", gauge_ok(spreg, planar_chart(spreg)));
    s.add("opposite-pair chart", gauge_ok(ureg, u_chart(ureg)));
    s.add("collective chart", gauge_ok(preg, collective_chart(preg)));
    s.add("mass-weighted edge chart",
          gauge_ok(rho, radial_chart_mass(rho, mass)));
    s.add("mass-weighted invariant chart",
          gauge_ok(vreg, vsp_chart_mass(vreg, mass)));
    return s;
}

Suite suite_reductions() {
    Suite s{"reductions", {}, {}};
    auto rho = rho_registry();
    DiffOpQ op = radial_operator(rho);
    PolyQ d = PolyQ::var(rho, "d");
    PolyQ P = tetra_edge_sum(rho), S = tetra_face_sum(rho);
    PolyQ V = tetra_volume_sq(rho);
    s.add("volume image (d-2)S/9",
          op.apply(V) ==
              RatFuncQ((d - PolyQ::constant(rho, Rat(2))) * S * Rat(1, 9)));
    s.add("face-sum image (d-1)P/2",
          op.apply(S) ==
              RatFuncQ((d - PolyQ::constant(rho, Rat(1))) * P * Rat(1, 2)));
    s.add("edge-sum image 12d", op.apply(P) == RatFuncQ(d * Rat(12)));
    auto u = opposite_edge_sums(rho);
    s.add("opposite-pair image 4d", op.apply(u[0]) == RatFuncQ(d * Rat(4)));

    auto sweep = [&](const RegistryPtr& src, const DiffOpQ& down,
                     const std::vector<PolyQ>& var_images, int nvars,
                     const char* what) {
        auto images = chart_images(src, var_images, rho);
        bool all = true;
        std::string witness;
        for (const auto& m : monomials_through(src, nvars, 3)) {
            PolyQ f = PolyQ::monomial(src, m, Rat(1));
            if (!pushforward_agrees(op, down, images, f)) {
                all = false;
                witness = clip(f.str());
            }
        }
        s.add(std::string(what) + " pushforward through degree 3", all,
              witness);
    };
    auto vreg = vsp_registry();
    sweep(vreg, vsp_chart(vreg).op, {V, S, P}, 3, "invariant chart");
    auto ureg = u_registry();
    sweep(ureg, u_chart(ureg).op, {u[0], u[1], u[2]}, 3,
          "opposite-pair chart");
    auto preg = p_registry();
    sweep(preg, collective_chart(preg).op, {P}, 1, "collective chart");
    return s;
}

Suite suite_degenerations() {
    Suite s{"degenerations", {}, {}};
    auto vreg = vsp_registry();
    DiffOpQ full = vsp_chart(vreg).op;
    const int iv = vreg->index("V"), is = vreg->index("S"),
              id = vreg->index("d");
    auto spreg = sp_registry();
    DiffOpQ planar =
        planar_chart(spreg).op.bind({{spreg->index("d"), Rat(2)}});
    s.add("flattened specialization at d=2",
          full.bind({{id, Rat(2)}, {iv, Rat(0)}}) ==
              rename_onto(planar, vreg));
    auto preg = p_registry();
    DiffOpQ line =
        collective_chart(preg).op.bind({{preg->index("d"), Rat(1)}});
    s.add("collinear specialization at d=1",
          full.bind({{id, Rat(1)}, {iv, Rat(0)}, {is, Rat(0)}}) ==
              rename_onto(line, vreg));
    auto rho = rho_registry();
    const std::array<Rat, 4> unit = {Rat(1), Rat(1), Rat(1), Rat(1)};
    s.add("equal-mass reduction",
          radial_operator_mass(rho, unit) == radial_operator(rho));
    return s;
}

Suite suite_sector() {
    Suite s{"sector", {}, {}};
    auto rho = rho_registry();
    bool closed = true;
    for (int level = 0; level <= 8; ++level) {
        SectorParams p;
        p.level = level;
        p.gamma = Rat(2, 3);
        p.omega = Rat(5, 7);
        p.coupling = Rat(3, 11);
        closed = closed && (long)check_sector_invariance(rho, p) ==
                               binom(level + 6, 6);
    }
    s.add("polynomial sector closed through level 8", closed);

    SectorParams tri;
    tri.level = 3;
    tri.omega = Rat(1);
    auto s3 = sector_matrix(rho, tri);
    bool tri_ok = degree_graded_triangular(s3);
    auto spec = triangular_spectrum(s3);
    tri_ok = tri_ok && spec.size() == 4;
    int k = 0;
    for (const auto& [val, mult] : spec) {
        tri_ok = tri_ok && val == Rat(16 * k) &&
                 (long)mult == binom(k + 5, 5);
        ++k;
    }
    s.add("zero-coupling triangular spectrum with multiplicities {1,6,21,56}",
          tri_ok);

    auto e0 = ground_state_energy(rho);
    std::vector<Rat> pt((std::size_t)rho->size(), Rat(0));
    pt[(std::size_t)rho->index("omega")] = Rat(1);
    bool e_ok = e0.eval(pt) == Rat(36);
    pt[(std::size_t)rho->index("gamma")] = Rat(2);
    e_ok = e_ok && e0.eval(pt) == Rat(84);
    s.add("vacuum energy 36 at omega 1 (84 at gamma 2)", e_ok);

    SectorParams sp2;
    sp2.level = 2;
    sp2.omega = Rat(1);
    auto rep = spacing_report(sector_matrix(rho, sp2));
    s.notes.push_back("measured level gap " + rep.measured_gap.str() +
                      " vs stated gap " + rep.stated_gap.str() +
                      " at omega 1 (reported, not asserted)");
    return s;
}

Suite suite_nbody() {
    Suite s{"nbody", {}, {}};
    for (int n : {3, 4, 5}) {
        auto d = derive_coefficients(n);
        s.add("site count " + std::to_string(n) +
                  ": consistent, unique, closed-form slots match, certified "
                  "through degree 3",
              d.consistent && d.pinned_match && d.unique &&
                  d.certified_degree == 3,
              d.offending);
        if (n == 4) {
            const std::vector<std::pair<std::string, Rat>> want = {
                {"a2", Rat(2)},    {"a3", Rat(2, 9)}, {"b2", Rat(8)},
                {"b3", Rat(32)},   {"b4", Rat(48)},   {"e0", Rat(12)},
                {"e1", Rat(1, 2)}, {"e2", Rat(1, 9)}, {"c11", Rat(54)},
                {"f11", Rat(1, 2)}};
            bool table = d.tmpl.coefficients.size() == want.size();
            for (std::size_t i = 0; table && i < want.size(); ++i)
                table = d.tmpl.coefficients[i].slot.name() == want[i].first &&
                        d.tmpl.coefficients[i].value == want[i].second;
            s.add("site count 4 reproduces the invariant chart table", table);
        }
    }
    return s;
}

int run_verify(const std::string& which, std::uint64_t seed,
               const std::string& out_path) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, Suite (*)()>> fixed = {
        {"certificates", suite_certificates},
        {"symmetry", suite_symmetry},
        {"words", suite_words},
        {"gauge", suite_gauge},
        {"reductions", suite_reductions},
        {"degenerations", suite_degenerations},
        {"sector", suite_sector},
        {"nbody", suite_nbody},
    };
    std::vector<Suite> ran;
    bool matched = false;
    if (which == "all" || which == "oracle") {
        ran.push_back(suite_oracle(seed));
        matched = true;
    }
    for (const auto& [name, fn] : fixed)
        if (which == "all" || which == name) {
            ran.push_back(fn());
            matched = true;
        }
    if (!matched) {
        std::fprintf(stderr, "unknown suite: %s\n", which.c_str());
        return 2;
    }

    njson report;
    report["schema"] = kReportSchema;
    report["command"] = "verify";
    report["suite"] = which;
    report["seed"] = seed;
    njson suites = njson::array();
    bool all_pass = true;
    for (const auto& s : ran) {
        njson js;
        js["name"] = s.name;
        njson checks = njson::array();
        for (const auto& c : s.checks) {
            njson jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            if (!c.pass) jc["witness"] = c.witness;
            checks.push_back(jc);
        }
        js["checks"] = checks;
        js["passed"] = (int)s.checks.size() - s.failures();
        js["total"] = (int)s.checks.size();
        if (!s.notes.empty()) js["notes"] = s.notes;
        suites.push_back(js);
        all_pass = all_pass && s.failures() == 0;
        std::printf("suite %-14s %d/%d ok\n", s.name.c_str(),
                    (int)s.checks.size() - s.failures(),
                    (int)s.checks.size());
        for (const auto& n : s.notes)
            std::printf("  note: %s\n", n.c_str());
        std::fflush(stdout);
    }
    report["suites"] = suites;
    report["all_pass"] = all_pass;
    report["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (!out_path.empty()) emit(report, out_path);
    std::printf("verify: %s\n", all_pass ? "ALL PASS" : "FAILED");
    return all_pass ? 0 : 1;
}

// --- spectrum -----------------------------------------------------------

int run_spectrum(int level, const std::string& omega,
                 const std::string& gamma, const std::string& quartic,
                 int precision_bits, std::uint64_t seed,
                 const std::string& out_path) {
    auto rho = rho_registry();
    SectorParams p;
    p.level = level;
    p.omega = Rat::parse(omega);
    p.gamma = Rat::parse(gamma);
    p.coupling = Rat::parse(quartic);
    auto s = sector_matrix(rho, p);

    njson report;
    report["schema"] = kReportSchema;
    report["command"] = "spectrum";
    report["seed"] = seed;
    report["params"] = {{"N", level},
                        {"omega", omega},
                        {"gamma", gamma},
                        {"A", quartic},
                        {"precision_bits", precision_bits}};
    report["basis_dimension"] = s.dim();
    njson levels = njson::array();
    bool csv = out_path.size() > 4 &&
               out_path.substr(out_path.size() - 4) == ".csv";
    std::string csv_body = "level,eigenvalue,multiplicity,basis_dimension\n";
    if (p.coupling.is_zero()) {
        auto spec = triangular_spectrum(s);
        int k = 0;
        for (const auto& [val, mult] : spec) {
            levels.push_back({{"level", k},
                              {"eigenvalue",
                               {{"exact", val.str()},
                                {"value", val.to_double()}}},
                              {"multiplicity", mult}});
            csv_body += std::to_string(k) + "," +
                        std::to_string(val.to_double()) + "," +
                        std::to_string(mult) + "," +
                        std::to_string(s.dim()) + "\n";
            ++k;
        }
    } else {
        bigfloat_precision() = precision_bits;
        auto w = sector_spectrum_numeric(s);
        int k = 0;
        for (const auto& [re, im] : w) {
            levels.push_back(
                {{"level", k},
                 {"eigenvalue",
                  {{"exact", nullptr},
                   {"value", re.to_double()},
                   {"text", re.str(30)},
                   {"imag", im.to_double()}}},
                 {"multiplicity", 1}});
            csv_body += std::to_string(k) + "," +
                        std::to_string(re.to_double()) + ",1," +
                        std::to_string(s.dim()) + "\n";
            ++k;
        }
    }
    report["levels"] = levels;
    if (csv) {
        write_text(out_path, csv_body);
        std::printf("wrote %s (%d rows)\n", out_path.c_str(),
                    (int)levels.size());
    } else {
        emit(report, out_path);
    }
    return 0;
}

// --- potentials ---------------------------------------------------------

int run_potentials(const std::string& omega, const std::string& gamma,
                   const std::string& quartic, int level,
                   const std::string& out_path) {
    auto rho = rho_registry();
    std::vector<std::pair<int, Rat>> binds;
    if (!omega.empty()) binds.push_back({rho->index("omega"), Rat::parse(omega)});
    if (!gamma.empty()) binds.push_back({rho->index("gamma"), Rat::parse(gamma)});
    if (!quartic.empty()) binds.push_back({rho->index("A"), Rat::parse(quartic)});
    if (level >= 0) binds.push_back({rho->index("N"), Rat(level)});
    auto show = [&](const RatFuncQ& f) { return f.bind(binds).str(); };

    njson report;
    report["schema"] = kReportSchema;
    report["command"] = "potentials";
    report["seed"] = 0;
    report["bindings"] = {{"omega", omega.empty() ? "formal" : omega},
                          {"gamma", gamma.empty() ? "formal" : gamma},
                          {"A", quartic.empty() ? "formal" : quartic},
                          {"N", level < 0 ? "formal"
                                          : std::to_string(level)}};
    report["sector"] = {
        {"level_potential", show(qes_level_potential(
                                rho, level >= 0 ? RatFuncQ::constant(
                                                      rho, Rat(level))
                                                : param_rf(rho, "N")))},
        {"relative_level_potential", show(relative_level_potential(rho))},
        {"vacuum_energy", show(ground_state_energy(rho))}};

    njson charts;
    charts["edge"] = show(radial_chart(rho).potential);
    auto vreg = vsp_registry();
    charts["invariant"] = vsp_chart(vreg).potential.str();
    auto ureg = u_registry();
    charts["opposite-pair"] = u_chart(ureg).potential.str();
    auto spreg = sp_registry();
    charts["flattened"] = planar_chart(spreg).potential.str();
    auto preg = p_registry();
    charts["collective"] = collective_chart(preg).potential.str();
    report["effective_potentials"] = charts;
    emit(report, out_path);
    return 0;
}

// --- trajectory ---------------------------------------------------------

int run_trajectory(const std::string& config_path, std::string potential,
                   std::string omega, std::string gamma, std::string quartic,
                   int dim, bool effective, std::string q_csv,
                   std::string p_csv, double dt, long steps,
                   std::string integrator, long record_every,
                   double drift_limit, std::uint64_t seed,
                   const std::string& out_path) {
    if (!config_path.empty()) {
        njson cfg = njson::parse(read_text(config_path));
        auto pot = cfg.value("potential", njson::object());
        potential = pot.value("kind", potential);
        omega = pot.value("omega", omega);
        gamma = pot.value("gamma", gamma);
        quartic = pot.value("A", quartic);
        dim = pot.value("dim", dim);
        effective = pot.value("include_effective", effective);
        auto init = cfg.value("initial", njson::object());
        if (init.contains("q")) {
            std::string s;
            for (const auto& x : init["q"])
                s += (s.empty() ? "" : ",") + x.dump();
            q_csv = s;
        }
        if (init.contains("p")) {
            std::string s;
            for (const auto& x : init["p"])
                s += (s.empty() ? "" : ",") + x.dump();
            p_csv = s;
        }
        auto integ = cfg.value("integrator", njson::object());
        integrator = integ.value("method", integrator);
        dt = integ.value("dt", dt);
        steps = integ.value("steps", steps);
        record_every = integ.value("record_every", record_every);
        drift_limit = integ.value("drift_limit", drift_limit);
    }
    if (q_csv.empty()) {
        std::fprintf(stderr,
                     "trajectory: initial point required (--q or --config)\n");
        return 2;
    }

    auto rho = rho_registry();
    ClassicalConfig cc;
    if (potential == "harmonic") {
        cc.kind = PotentialKind::harmonic;
    } else if (potential == "solvable") {
        cc.kind = PotentialKind::solvable;
    } else if (potential == "none") {
        cc.kind = PotentialKind::custom;
        cc.custom = RatFuncQ::zero(rho);
    } else {
        std::fprintf(stderr, "trajectory: unknown potential kind %s\n",
                     potential.c_str());
        return 2;
    }
    cc.omega = Rat::parse(omega);
    cc.gamma = Rat::parse(gamma);
    cc.coupling = Rat::parse(quartic);
    cc.dim = dim;
    cc.include_effective = effective;
    ClassicalSystem sys(rho, cc);

    TrajectoryConfig tc;
    tc.dt = dt;
    tc.steps = (std::size_t)steps;
    tc.verlet = integrator == "verlet";
    if (!tc.verlet && integrator != "rk4") {
        std::fprintf(stderr, "trajectory: unknown integrator %s\n",
                     integrator.c_str());
        return 2;
    }
    tc.record_every = (std::size_t)record_every;
    tc.drift_limit = drift_limit;

    Vec6 q0 = parse_vec6(q_csv);
    Vec6 p0 = p_csv.empty() ? Vec6{0, 0, 0, 0, 0, 0} : parse_vec6(p_csv);
    auto tr = sys.integrate(q0, p0, tc);

    std::string csv = "t";
    for (int i = 0; i < 6; ++i) csv += "," + rho->name(i);
    for (int i = 0; i < 6; ++i) csv += ",p_" + rho->name(i);
    csv += ",H,D\n";
    char line[512];
    for (const auto& pt : tr.points) {
        std::snprintf(line, sizeof line, "%.12g", pt.t);
        csv += line;
        for (int i = 0; i < 6; ++i) {
            std::snprintf(line, sizeof line, ",%.17g", pt.q[i]);
            csv += line;
        }
        for (int i = 0; i < 6; ++i) {
            std::snprintf(line, sizeof line, ",%.17g", pt.p[i]);
            csv += line;
        }
        std::snprintf(line, sizeof line, ",%.17g,%.17g\n", pt.energy,
                      pt.boundary);
        csv += line;
    }
    if (out_path.empty())
        std::fputs(csv.c_str(), stdout);
    else
        write_text(out_path, csv);

    njson summary;
    summary["schema"] = kReportSchema;
    summary["command"] = "trajectory";
    summary["seed"] = seed;
    summary["steps_taken"] = tr.steps_taken;
    summary["boundary_hit"] = tr.boundary_hit;
    summary["step_rejected"] = tr.step_rejected;
    summary["numeric_failure"] = tr.numeric_failure;
    summary["max_relative_drift"] = tr.max_relative_drift;
    summary["rows"] = tr.points.size();
    if (!out_path.empty()) std::printf("%s\n", summary.dump(2).c_str());
    return tr.numeric_failure ? 1 : 0;
}

// --- nbody-derive -------------------------------------------------------

int run_nbody(int n, int certify_degree, const std::string& out_path) {
    auto t0 = std::chrono::steady_clock::now();
    auto d = derive_coefficients(n, certify_degree);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    std::printf("site count %d, volume chart V2..V%d\n", n, n);
    std::printf(
        "consistent: %s   unique: %s   closed-form slots match: %s\n",
        d.consistent ? "yes" : "NO", d.unique ? "yes" : "NO",
        d.pinned_match ? "yes" : "NO");
    std::printf("certified through degree %d (%zu monomials), %.2f s\n",
                d.certified_degree, d.certified_count, secs);
    std::printf("%-6s %-10s %s\n", "slot", "value", "source");
    for (const auto& e : d.tmpl.coefficients)
        std::printf("%-6s %-10s %s\n", e.slot.name().c_str(),
                    e.value.str().c_str(),
                    e.pinned ? "closed form" : "derived");
    if (!d.offending.empty())
        std::printf("offending residual witness: %s\n", d.offending.c_str());

    njson report;
    report["schema"] = kReportSchema;
    report["command"] = "nbody-derive";
    report["seed"] = 0;
    report["n"] = n;
    report["certify_degree"] = certify_degree;
    report["consistent"] = d.consistent;
    report["unique"] = d.unique;
    report["closed_form_match"] = d.pinned_match;
    report["certified_degree"] = d.certified_degree;
    report["certified_monomials"] = d.certified_count;
    report["elapsed_seconds"] = secs;
    if (!d.offending.empty()) report["witness"] = d.offending;
    njson coeffs = njson::array();
    for (const auto& e : d.tmpl.coefficients)
        coeffs.push_back({{"slot", e.slot.name()},
                          {"value", e.value.str()},
                          {"source", e.pinned ? "closed-form" : "derived"}});
    report["coefficients"] = coeffs;
    if (!out_path.empty()) emit(report, out_path);
    return d.consistent && d.pinned_match ? 0 : 1;
}

// --- geometry -----------------------------------------------------------

std::vector<Rat> distances_from_coords(
    const std::vector<std::vector<Rat>>& rows) {
    if (rows.size() != 4)
        throw std::invalid_argument("expected 4 coordinate rows");
    const std::size_t dim = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != dim)
            throw std::invalid_argument("ragged coordinate rows");
    std::vector<Rat> rho;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Rat s(0);
            for (std::size_t k = 0; k < dim; ++k) {
                Rat diff = rows[(std::size_t)i][k] - rows[(std::size_t)j][k];
                s += diff * diff;
            }
            rho.push_back(s);
        }
    return rho;
}

int run_geometry(const std::string& point_csv, const std::string& coords_path,
                 const std::string& masses_csv, const std::string& out_path) {
    std::vector<Rat> rho;
    if (!point_csv.empty()) {
        rho = parse_rats(point_csv, 6);
    } else if (!coords_path.empty()) {
        std::vector<std::vector<Rat>> rows;
        std::string body = read_text(coords_path);
        if (!body.empty() && body[0] == '[') {
            njson j = njson::parse(body);
            for (const auto& row : j) {
                std::vector<Rat> r;
                for (const auto& x : row)
                    r.push_back(Rat::parse(
                        x.is_string() ? x.get<std::string>() : x.dump()));
                rows.push_back(r);
            }
        } else {
            std::istringstream ss(body);
            std::string line;
            while (std::getline(ss, line)) {
                if (line.empty()) continue;
                std::vector<Rat> r;
                for (const auto& tok : split(line, ','))
                    r.push_back(Rat::parse(tok));
                rows.push_back(r);
            }
        }
        rho = distances_from_coords(rows);
    } else {
        std::fprintf(stderr, "geometry: need --point or --coords\n");
        return 2;
    }

    auto reg = rho_registry();
    std::vector<Rat> at((std::size_t)reg->size(), Rat(0));
    for (int i = 0; i < 6; ++i) at[(std::size_t)i] = rho[(std::size_t)i];

    const Rat V = tetra_volume_sq(reg).eval(at);
    const Rat S = tetra_face_sum(reg).eval(at);
    const Rat P = tetra_edge_sum(reg).eval(at);
    const Rat C = tetra_metric_cofactor(reg).eval(at);
    std::vector<Rat> faces;
    for (const auto& f : tetra_faces(reg)) faces.push_back(f.eval(at));

    // exact zero tests over the full principal chain: edges, faces, volume
    bool any_neg = false, any_zero = false;
    auto tally = [&](const Rat& x) {
        if (x.sign() < 0) any_neg = true;
        if (x.is_zero()) any_zero = true;
    };
    for (const auto& r : rho) tally(r);
    for (const auto& f : faces) tally(f);
    tally(V);
    const char* cls =
        any_neg ? "exterior" : (any_zero ? "boundary" : "interior");

    njson report;
    report["schema"] = kReportSchema;
    report["command"] = "geometry";
    report["seed"] = 0;
    njson jrho = njson::array();
    for (const auto& r : rho) jrho.push_back(r.str());
    report["edge_squares"] = jrho;
    njson jfaces = njson::array();
    for (const auto& f : faces) jfaces.push_back(f.str());
    report["invariants"] = {{"P", P.str()},
                            {"S", S.str()},
                            {"V", V.str()},
                            {"faces", jfaces},
                            {"metric_cofactor", C.str()}};
    report["signs"] = {{"volume", V.sign()},
                       {"metric_cofactor", C.sign()}};
    report["classification"] = cls;

    if (!masses_csv.empty()) {
        auto mv = parse_rats(masses_csv, 4);
        std::array<Rat, 4> mass = {mv[0], mv[1], mv[2], mv[3]};
        report["mass_weighted"] = {
            {"masses", masses_csv},
            {"edge_sum", mass_edge_sum(reg, mass).eval(at).str()},
            {"face_sum", mass_face_sum(reg, mass).eval(at).str()}};
    }
    emit(report, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "exact symbolic-numeric toolkit for the reduced radial operators of "
        "the four-site problem"};
    app.require_subcommand(1);

    // verify
    std::string v_suite = "all", v_out;
    std::uint64_t v_seed = 7;
    auto* verify = app.add_subcommand(
        "verify", "run the identity suites and write a JSON report");
    verify->add_option("--suite", v_suite,
                       "all, oracle, certificates, symmetry, words, gauge, "
                       "reductions, degenerations, sector, nbody");
    verify->add_option("--seed", v_seed, "seed for randomized checks");
    verify->add_option("--out", v_out, "JSON report path");

    // catalog
    std::string c_action, c_name, c_format = "golden", c_out, c_check;
    auto* catalog = app.add_subcommand(
        "catalog", "list or serialize the named operators");
    catalog->add_option("action", c_action, "list | show")->required();
    catalog->add_option("name", c_name, "entry name for `show`");
    catalog->add_option("--format", c_format, "golden | json");
    catalog->add_option("--out", c_out, "output path");
    catalog->add_option("--check", c_check,
                        "compare against this file byte for byte");

    // spectrum
    int s_level = 0, s_bits = 256;
    std::string s_omega = "1", s_gamma = "0", s_quartic = "0", s_out;
    std::uint64_t s_seed = 0;
    auto* spectrum = app.add_subcommand(
        "spectrum", "level table of the confined sector at cutoff N");
    spectrum->add_option("--N", s_level, "sector cutoff")->required();
    spectrum->add_option("--omega", s_omega, "frequency (rational)");
    spectrum->add_option("--gamma", s_gamma, "weight exponent (rational)");
    spectrum->add_option("--A", s_quartic, "quartic coupling (rational)");
    spectrum->add_option("--precision-bits", s_bits,
                         "float precision for the non-triangular route");
    spectrum->add_option("--seed", s_seed, "recorded in the report");
    spectrum->add_option("--out", s_out, "output path (.csv for CSV)");

    // potentials
    std::string p_omega, p_gamma, p_quartic, p_out;
    int p_level = -1;
    auto* potentials = app.add_subcommand(
        "potentials", "effective and sector potential report");
    potentials->add_option("--omega", p_omega, "bind the frequency");
    potentials->add_option("--gamma", p_gamma, "bind the weight exponent");
    potentials->add_option("--A", p_quartic, "bind the quartic coupling");
    potentials->add_option("--N", p_level, "bind the sector cutoff");
    potentials->add_option("--out", p_out, "JSON output path");

    // trajectory
    std::string t_config, t_potential = "harmonic", t_omega = "1",
                t_gamma = "0", t_quartic = "0", t_q, t_p,
                t_integrator = "rk4", t_out;
    int t_dim = 3;
    bool t_effective = false;
    double t_dt = 1e-3, t_drift = 0.0;
    long t_steps = 10000, t_record = 1;
    std::uint64_t t_seed = 0;
    auto* trajectory = app.add_subcommand(
        "trajectory", "integrate the classical flow and write CSV");
    trajectory->add_option("--config", t_config,
                           "declarative JSON run configuration");
    trajectory->add_option("--potential", t_potential,
                           "harmonic | solvable | none");
    trajectory->add_option("--omega", t_omega, "frequency (rational)");
    trajectory->add_option("--gamma", t_gamma, "weight exponent (rational)");
    trajectory->add_option("--A", t_quartic, "quartic coupling (rational)");
    trajectory->add_option("--d", t_dim, "ambient dimension");
    trajectory->add_flag("--effective", t_effective,
                         "add the quantum effective potential");
    trajectory->add_option("--q", t_q, "initial edge squares, 6 numbers");
    trajectory->add_option("--p", t_p, "initial momenta, 6 numbers");
    trajectory->add_option("--dt", t_dt, "time step");
    trajectory->add_option("--steps", t_steps, "step count");
    trajectory->add_option("--integrator", t_integrator, "rk4 | verlet");
    trajectory->add_option("--record-every", t_record, "sampling stride");
    trajectory->add_option("--drift-limit", t_drift,
                           "stop when relative drift passes this");
    trajectory->add_option("--seed", t_seed, "recorded in the report");
    trajectory->add_option("--out", t_out, "CSV path (default stdout)");

    // nbody-derive
    int n_sites = 4, n_certify = 3;
    std::string n_out;
    auto* nbody = app.add_subcommand(
        "nbody-derive",
        "derive the volume-chart operator coefficients for n sites");
    nbody->add_option("--n", n_sites, "site count, 3 to 5")->required();
    nbody->add_option("--certify-degree", n_certify,
                      "residual certificate depth");
    nbody->add_option("--out", n_out, "JSON table path");

    // geometry
    std::string g_point, g_coords, g_masses, g_out;
    auto* geometry = app.add_subcommand(
        "geometry", "exact invariants and classification of a shape");
    geometry->add_option("--point", g_point,
                         "six squared distances, comma separated rationals");
    geometry->add_option("--coords", g_coords,
                         "CSV or JSON file of 4 x d rational coordinates");
    geometry->add_option("--masses", g_masses, "m1,m2,m3,m4 (rationals)");
    geometry->add_option("--out", g_out, "JSON output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) return run_verify(v_suite, v_seed, v_out);
        if (*catalog) {
            if (c_action != "list" && c_action != "show") {
                std::fprintf(stderr, "catalog: action must be list or show\n");
                return 2;
            }
            if (c_action == "show" && c_name.empty()) {
                std::fprintf(stderr, "catalog show: entry name required\n");
                return 2;
            }
            return run_catalog(c_action, c_name, c_format, c_out, c_check);
        }
        if (*spectrum)
            return run_spectrum(s_level, s_omega, s_gamma, s_quartic, s_bits,
                                s_seed, s_out);
        if (*potentials)
            return run_potentials(p_omega, p_gamma, p_quartic, p_level,
                                  p_out);
        if (*trajectory)
            return run_trajectory(t_config, t_potential, t_omega, t_gamma,
                                  t_quartic, t_dim, t_effective, t_q, t_p,
                                  t_dt, t_steps, t_integrator, t_record,
                                  t_drift, t_seed, t_out);
        if (*nbody) return run_nbody(n_sites, n_certify, n_out);
        if (*geometry)
            return run_geometry(g_point, g_coords, g_masses, g_out);
    } catch (const njson::exception& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "config error: %s\n", ex.what());
        return 2;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 2;
}
