#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>
#include <vector>

#include "fourbody/cartesian.hpp"
#include "fourbody/tetra.hpp"

using namespace fourbody;

namespace {

std::mt19937_64 rng(0x9e0ULL);

Rat rnd_coord() {
  std::uniform_int_distribution<int> num(-12, 12), den(1, 4);
  return Rat(num(rng), (unsigned long)den(rng));
}

std::vector<Rat> edge_values_from_points(
    const std::vector<std::array<Rat, 3>>& pts) {
  std::vector<Rat> vals;
  for (auto [i, j] : edge_pairs((int)pts.size())) {
    Rat acc;
    for (int k = 0; k < 3; ++k) {
      Rat dd = pts[(std::size_t)i - 1][(std::size_t)k] -
               pts[(std::size_t)j - 1][(std::size_t)k];
      acc = acc + dd * dd;
    }
    vals.push_back(acc);
  }
  return vals;
}

std::vector<Rat> padded_point(const RegistryPtr& reg,
                              const std::vector<Rat>& edges) {
  std::vector<Rat> pt(static_cast<std::size_t>(reg->size()), Rat(0));
  for (std::size_t v = 0; v < edges.size(); ++v) pt[v] = edges[v];
  return pt;
}

Rat det3(const std::array<std::array<Rat, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

TEST_CASE("edge bookkeeping") {
  CHECK(edge_pairs(4).size() == 6);
  CHECK(edge_var(4, 1, 2) == 0);
  CHECK(edge_var(4, 3, 4) == 5);
  CHECK(edge_var(4, 4, 1) == 2);  // order-insensitive
  CHECK(tetra_edge_triples().size() == 12);
  for (const auto& t : tetra_edge_triples()) {
    CHECK(t.a < t.b);
    CHECK(t.opp != t.a);
    CHECK(t.opp != t.b);
  }
}

TEST_CASE("squared triangle area") {
  auto reg = rho_registry();
  PolyQ x = PolyQ::var(reg, "r12"), y = PolyQ::var(reg, "r13"),
        z = PolyQ::var(reg, "r23");
  PolyQ h = heron_poly(x, y, z);
  // equilateral with unit edge squares
  std::vector<Rat> p1 = padded_point(reg, {Rat(1), Rat(1), Rat(0), Rat(1), Rat(0), Rat(0)});
  CHECK(h.eval(p1) == Rat(3, 16));
  // right isoceles: legs 1, hypotenuse square 2
  std::vector<Rat> p2 = padded_point(reg, {Rat(1), Rat(1), Rat(0), Rat(2), Rat(0), Rat(0)});
  CHECK(h.eval(p2) == Rat(1, 4));
}

TEST_CASE("squared volume at reference shapes") {
  auto reg = rho_registry();
  PolyQ vol = tetra_volume_sq(reg);
  // regular tetrahedron, unit edge squares
  std::vector<Rat> ones = padded_point(reg, std::vector<Rat>(6, Rat(1)));
  CHECK(vol.eval(ones) == Rat(1, 72));
  // right corner simplex: site 1 at origin, sites 2..4 on axes
  std::vector<Rat> corner =
      padded_point(reg, {Rat(1), Rat(1), Rat(1), Rat(2), Rat(2), Rat(2)});
  CHECK(vol.eval(corner) == Rat(1, 36));
}

TEST_CASE("simplex contents specialize correctly") {
  auto reg = rho_registry();
  CHECK(content_sq(reg, 4, {1, 2}) == PolyQ::var(reg, "r12"));
  CHECK(content_sq(reg, 4, {2, 4}) == PolyQ::var(reg, "r24"));
  auto faces = tetra_faces(reg);
  CHECK(content_sq(reg, 4, {2, 3, 4}) == faces[0]);
  CHECK(content_sq(reg, 4, {1, 3, 4}) == faces[1]);
  CHECK(content_sq(reg, 4, {1, 2, 3}) == faces[3]);
  CHECK(content_sq(reg, 4, {1, 2, 3, 4}) == tetra_volume_sq(reg));
  CHECK_THROWS_AS(content_sq(reg, 4, {1}), std::invalid_argument);
}

TEST_CASE("content sums reproduce the named invariants") {
  auto reg = rho_registry();
  CHECK(content_sum(reg, 4, 2) == tetra_edge_sum(reg));
  CHECK(content_sum(reg, 4, 3) == tetra_face_sum(reg));
  CHECK(content_sum(reg, 4, 4) == tetra_volume_sq(reg));
  CHECK_THROWS_AS(content_sum(reg, 4, 1), std::invalid_argument);
}

TEST_CASE("right corner content normalization for five sites") {
  // Sites: origin plus 4 orthonormal axis points. Edge squares: 1 to the
  // origin, 2 between axis points. Content^2 of the k-simplex is 1/(k!)^2.
  auto reg = nbody_registry(5);
  std::vector<Rat> edges;
  for (auto [i, j] : edge_pairs(5))
    edges.push_back(i == 1 ? Rat(1) : Rat(2));
  std::vector<Rat> pt = padded_point(reg, edges);
  CHECK(content_sq(reg, 5, {1, 2}).eval(pt) == Rat(1));
  CHECK(content_sq(reg, 5, {1, 2, 3}).eval(pt) == Rat(1, 4));
  CHECK(content_sq(reg, 5, {1, 2, 3, 4}).eval(pt) == Rat(1, 36));
  CHECK(content_sq(reg, 5, {1, 2, 3, 4, 5}).eval(pt) == Rat(1, 576));
}

TEST_CASE("squared volume against random Cartesian embeddings") {
  auto reg = rho_registry();
  PolyQ vol = tetra_volume_sq(reg);
  for (int it = 0; it < 12; ++it) {
    std::vector<std::array<Rat, 3>> pts(4);
    for (auto& p : pts)
      for (auto& c : p) c = rnd_coord();
    auto edges = edge_values_from_points(pts);
    // Gram matrix of the displaced sites 2..4 around site 1
    std::array<std::array<Rat, 3>, 3> gram{};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Rat dot;
        for (int k = 0; k < 3; ++k) {
          Rat da = pts[(std::size_t)a + 1][(std::size_t)k] - pts[0][(std::size_t)k];
          Rat db = pts[(std::size_t)b + 1][(std::size_t)k] - pts[0][(std::size_t)k];
          dot = dot + da * db;
        }
        gram[(std::size_t)a][(std::size_t)b] = dot;
      }
    Rat vol_ref = det3(gram) / Rat(36);
    CHECK(vol.eval(padded_point(reg, edges)) == vol_ref);
  }
}

TEST_CASE("faces against random Cartesian embeddings") {
  auto reg = rho_registry();
  auto faces = tetra_faces(reg);
  for (int it = 0; it < 8; ++it) {
    std::vector<std::array<Rat, 3>> pts(4);
    for (auto& p : pts)
      for (auto& c : p) c = rnd_coord();
    auto edges = edge_values_from_points(pts);
    auto pt = padded_point(reg, edges);
    // face opposite site 1 is spanned by sites 2,3,4: Gram of 2 vectors /4
    std::array<int, 3> tri = {2, 3, 4};
    Rat g00, g01, g11;
    for (int k = 0; k < 3; ++k) {
      Rat a = pts[(std::size_t)tri[1] - 1][(std::size_t)k] - pts[(std::size_t)tri[0] - 1][(std::size_t)k];
      Rat b = pts[(std::size_t)tri[2] - 1][(std::size_t)k] - pts[(std::size_t)tri[0] - 1][(std::size_t)k];
      g00 = g00 + a * a;
      g01 = g01 + a * b;
      g11 = g11 + b * b;
    }
    CHECK(faces[0].eval(pt) == (g00 * g11 - g01 * g01) / Rat(4));
  }
}

TEST_CASE("mass-weighted invariants reduce at equal masses") {
  auto reg = rho_registry();
  std::array<Rat, 4> unit = {Rat(1), Rat(1), Rat(1), Rat(1)};
  CHECK(mass_edge_sum(reg, unit) == tetra_edge_sum(reg));
  CHECK(mass_face_sum(reg, unit) == tetra_face_sum(reg));
  CHECK(mass_metric_cofactor(reg, unit) == tetra_metric_cofactor(reg));
}

TEST_CASE("three-variable cofactor at equal masses") {
  auto reg = vsp_registry();
  PolyQ V = PolyQ::var(reg, "V"), S = PolyQ::var(reg, "S"),
        P = PolyQ::var(reg, "P");
  PolyQ g2 = S * S * (P * P - S * Rat(64)) -
             P * V * (P * P - S * Rat(72)) * Rat(9) -
             (V * V) * Rat(34992);
  CHECK(vsp_metric_cofactor(reg) == g2);
}

TEST_CASE("Cartesian embedding basics") {
  int dim = 3;
  auto cart = cartesian_registry(4, dim);
  CHECK(cart->size() == 12);
  auto images = edge_images(cart, 4, dim);
  REQUIRE(images.size() == 6);

  // squared distance at a concrete configuration
  std::vector<Rat> pt(12, Rat(0));
  pt[(std::size_t)cartesian_var(dim, 2, 1)] = Rat(3);
  pt[(std::size_t)cartesian_var(dim, 2, 2)] = Rat(4);
  CHECK(images[(std::size_t)edge_var(4, 1, 2)].eval(pt) == Rat(25));

  // kinetic normalization: P = sum of edge squares maps to 12*dim
  auto rho = rho_registry();
  PolyQ P = tetra_edge_sum(rho);
  PolyQ pushed = pushforward_to_cartesian(P, images, cart);
  DiffOpQ flat = half_flat_laplacian(cart, 4, dim);
  RatFuncQ applied = flat.apply(pushed);
  CHECK(applied == RatFuncQ::constant(cart, Rat(12 * dim)));
}

TEST_CASE("mass-weighted flat operator on the mass-weighted edge sum") {
  // sum over pairs of m_i m_j |x_i - x_j|^2 under sum 1/(2 m_v) Lap_v gives
  // dim * (sum_i<j (m_i + m_j)) = dim * 3 * M.
  int dim = 4;
  auto cart = cartesian_registry(4, dim);
  std::vector<Rat> masses = {Rat(2), Rat(3), Rat(1, 2), Rat(5)};
  Rat M = masses[0] + masses[1] + masses[2] + masses[3];
  auto rho = rho_registry();
  std::array<Rat, 4> marr = {masses[0], masses[1], masses[2], masses[3]};
  PolyQ pt = mass_edge_sum(rho, marr);
  auto images = edge_images(cart, 4, dim);
  DiffOpQ flat = half_flat_laplacian(cart, 4, dim, masses);
  RatFuncQ applied = flat.apply(pushforward_to_cartesian(pt, images, cart));
  CHECK(applied == RatFuncQ::constant(cart, Rat(3 * dim) * M));
}
