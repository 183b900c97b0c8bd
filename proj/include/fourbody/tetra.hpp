#pragma once
// Geometric layer for the four-site configuration space: edge-square
// registries, adjacency combinatorics, face/volume polynomials, simplex
// contents, and the mass-weighted invariants used by the reduced operators.

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fourbody/metric.hpp"
#include "fourbody/poly.hpp"
#include "fourbody/rational.hpp"
#include "fourbody/registry.hpp"

namespace fourbody {

/// Parameters shared by every coordinate chart in the toolkit.
inline const std::vector<std::string>& standard_params() {
  static const std::vector<std::string> p = {
      "d", "gamma", "omega", "A", "N", "m1", "m2", "m3", "m4", "a", "b", "c"};
  return p;
}

/// Site pairs (i, j), 1-based, i < j, lexicographic.
inline std::vector<std::pair<int, int>> edge_pairs(int nsites) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i <= nsites; ++i)
    for (int j = i + 1; j <= nsites; ++j) out.emplace_back(i, j);
  return out;
}

inline std::vector<std::string> edge_names(int nsites) {
  std::vector<std::string> out;
  for (auto [i, j] : edge_pairs(nsites))
    out.push_back("r" + std::to_string(i) + std::to_string(j));
  return out;
}

/// Registry slot of edge (i, j) in an edge registry over nsites sites.
inline int edge_var(int nsites, int i, int j) {
  if (i > j) std::swap(i, j);
  int pos = 0;
  for (int a = 1; a <= nsites; ++a)
    for (int b = a + 1; b <= nsites; ++b) {
      if (a == i && b == j) return pos;
      ++pos;
    }
  throw std::out_of_range("edge_var: bad site pair");
}

/// Six edge squares of the four-site chart plus the standard parameters.
inline RegistryPtr rho_registry() {
  return make_registry(edge_names(4), standard_params());
}

/// Edge chart for n sites with only the dimension parameter attached.
inline RegistryPtr nbody_registry(int nsites) {
  return make_registry(edge_names(nsites), {"d"});
}

inline RegistryPtr u_registry() {
  return make_registry({"u1", "u2", "u3"}, standard_params());
}

inline RegistryPtr vsp_registry() {
  return make_registry({"V", "S", "P"}, standard_params());
}

inline RegistryPtr sp_registry() {
  return make_registry({"S", "P"}, standard_params());
}

inline RegistryPtr p_registry() {
  return make_registry({"P"}, standard_params());
}

/// Pair of adjacent edges (sharing one site) plus the opposite edge joining
/// the two sites not shared.
struct EdgeTriple {
  int a;    // first edge slot
  int b;    // second edge slot
  int opp;  // edge between the non-shared endpoints
  int vertex;  // shared site, 1-based
};

/// All adjacent edge pairs for n sites, each with its opposite edge.
inline std::vector<EdgeTriple> shared_edge_triples(int nsites) {
  auto pairs = edge_pairs(nsites);
  std::vector<EdgeTriple> out;
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      if (p == q) continue;
      auto [a1, a2] = pairs[p];
      auto [b1, b2] = pairs[q];
      int shared = 0, oa = 0, ob = 0;
      if (a1 == b1) { shared = a1; oa = a2; ob = b2; }
      else if (a1 == b2) { shared = a1; oa = a2; ob = b1; }
      else if (a2 == b1) { shared = a2; oa = a1; ob = b2; }
      else if (a2 == b2) { shared = a2; oa = a1; ob = b1; }
      else continue;
      if (p > q) continue;  // unordered pair once
      out.push_back({static_cast<int>(p), static_cast<int>(q),
                     edge_var(nsites, oa, ob), shared});
    }
  return out;
}

/// The 12 adjacent edge pairs of the tetrahedron, grouped by shared site.
inline const std::vector<EdgeTriple>& tetra_edge_triples() {
  static const std::vector<EdgeTriple> t = shared_edge_triples(4);
  return t;
}

/// Squared triangle area from the three squared side lengths.
template <typename S>
Poly<S> heron_poly(const Poly<S>& x, const Poly<S>& y, const Poly<S>& z) {
  Poly<S> two = Poly<S>::constant(x.registry(), S::from_int(2));
  Poly<S> q = two * (x * y + x * z + y * z) - x * x - y * y - z * z;
  return q.scale(S::from_int(1) / S::from_int(16));
}

/// Faces of the tetrahedron indexed by the opposite site (1-based).
inline std::array<PolyQ, 4> tetra_faces(const RegistryPtr& reg) {
  auto e = [&](int i, int j) { return PolyQ::var(reg, edge_var(4, i, j)); };
  return {heron_poly(e(2, 3), e(2, 4), e(3, 4)),
          heron_poly(e(1, 3), e(1, 4), e(3, 4)),
          heron_poly(e(1, 2), e(1, 4), e(2, 4)),
          heron_poly(e(1, 2), e(1, 3), e(2, 3))};
}

/// Sum of the four squared face areas.
inline PolyQ tetra_face_sum(const RegistryPtr& reg) {
  auto f = tetra_faces(reg);
  return f[0] + f[1] + f[2] + f[3];
}

/// Sum of the six squared edge lengths.
inline PolyQ tetra_edge_sum(const RegistryPtr& reg) {
  PolyQ s = PolyQ::zero(reg);
  for (int v = 0; v < 6; ++v) s = s + PolyQ::var(reg, v);
  return s;
}

/// Squared volume of the tetrahedron as an explicit cubic in the edge squares.
inline PolyQ tetra_volume_sq(const RegistryPtr& reg) {
  auto e = [&](int i, int j) { return PolyQ::var(reg, edge_var(4, i, j)); };
  PolyQ r12 = e(1, 2), r13 = e(1, 3), r14 = e(1, 4);
  PolyQ r23 = e(2, 3), r24 = e(2, 4), r34 = e(3, 4);
  PolyQ t = ((r13 + r14 + r23 + r24) * r34 - (r13 - r14) * (r23 - r24) -
             r34 * r34) * r12
          - r13 * r13 * r24 - r34 * r12 * r12
          + r23 * ((r14 - r24) * r34 - r14 * (r14 + r23 - r24))
          + r13 * (r14 * (r23 + r24 - r34) + r24 * (r23 - r24 + r34));
  return t.scale(Rat::from_int(1) / Rat::from_int(144));
}

/// Second factor of the radial metric determinant; positive on genuine
/// tetrahedral configurations.
inline PolyQ tetra_metric_cofactor(const RegistryPtr& reg) {
  return tetra_edge_sum(reg) * tetra_face_sum(reg) -
         tetra_volume_sq(reg).scale(Rat::from_int(36));
}

/// Squared content of the simplex spanned by the given sites (1-based) via
/// the bordered distance determinant.
inline PolyQ content_sq(const RegistryPtr& reg, int nsites,
                        const std::vector<int>& sites) {
  int k = static_cast<int>(sites.size()) - 1;
  if (k < 1) throw std::invalid_argument("content_sq: need at least 2 sites");
  int n = k + 2;
  Mat<PolyQ> B = make_mat(n, PolyQ::zero(reg));
  PolyQ one = PolyQ::one(reg);
  for (int i = 1; i < n; ++i) {
    B[0][i] = one;
    B[i][0] = one;
  }
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      if (i == j) continue;
      B[i][j] = PolyQ::var(reg, edge_var(nsites, sites[i - 1], sites[j - 1]));
    }
  PolyQ det = poly_det(B);
  Rat norm = Rat::from_int(1);
  for (int t = 2; t <= k; ++t) norm = norm * Rat::from_int(t);
  norm = norm * norm * Rat::from_int(2).pow(k);
  Rat sign = (k % 2 == 0) ? Rat::from_int(-1) : Rat::from_int(1);
  return det.scale(sign / norm);
}

/// Sum of squared contents over all k-site subsets of {1..nsites}, k >= 2.
inline PolyQ content_sum(const RegistryPtr& reg, int nsites, int k) {
  if (k < 2) throw std::invalid_argument("content_sum: k must be >= 2");
  std::vector<int> pick(k);
  PolyQ acc = PolyQ::zero(reg);
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i + 1;
  while (true) {
    if (k == 2) {
      acc = acc + PolyQ::var(reg, edge_var(nsites, idx[0], idx[1]));
    } else {
      acc = acc + content_sq(reg, nsites, idx);
    }
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == nsites - (k - 1 - pos)) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int t = pos + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
  }
  return acc;
}

/// Mass-weighted edge sum: sum of m_i m_j r_ij over the six edges.
inline PolyQ mass_edge_sum(const RegistryPtr& reg,
                           const std::array<Rat, 4>& m) {
  PolyQ s = PolyQ::zero(reg);
  auto pairs = edge_pairs(4);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    s = s + PolyQ::var(reg, static_cast<int>(p)).scale(m[i - 1] * m[j - 1]);
  }
  return s;
}

/// Mass-weighted face sum: each squared face area divided by the mass of the
/// opposite site.
inline PolyQ mass_face_sum(const RegistryPtr& reg,
                           const std::array<Rat, 4>& m) {
  auto f = tetra_faces(reg);
  PolyQ s = PolyQ::zero(reg);
  for (int v = 0; v < 4; ++v) s = s + f[v].scale(m[v].inv());
  return s;
}

/// Mass-weighted analogue of the metric cofactor.
inline PolyQ mass_metric_cofactor(const RegistryPtr& reg,
                                  const std::array<Rat, 4>& m) {
  Rat M = m[0] + m[1] + m[2] + m[3];
  return mass_edge_sum(reg, m) * mass_face_sum(reg, m) -
         tetra_volume_sq(reg).scale(Rat::from_int(9) * M);
}

/// Pairwise sums of opposite edge squares: (r12+r34, r13+r24, r14+r23).
inline std::array<PolyQ, 3> opposite_edge_sums(const RegistryPtr& reg) {
  auto e = [&](int i, int j) { return PolyQ::var(reg, edge_var(4, i, j)); };
  return {e(1, 2) + e(3, 4), e(1, 3) + e(2, 4), e(1, 4) + e(2, 3)};
}

/// Cofactor of the planar (d = 2) metric determinant over the (S, P) chart.
inline PolyQ planar_metric_cofactor(const RegistryPtr& reg, int s_slot,
                                    int p_slot) {
  PolyQ Sv = PolyQ::var(reg, s_slot), Pv = PolyQ::var(reg, p_slot);
  return Pv * Pv - Sv.scale(Rat::from_int(64));
}

/// Cofactor of the (V, S, P) metric determinant for general masses; the
/// equal-mass case is the quartic partner of the volume factor.
inline PolyQ vsp_metric_cofactor(const RegistryPtr& reg,
                                 const std::array<Rat, 4>& masses) {
  Rat M = masses[0] + masses[1] + masses[2] + masses[3];
  Rat mq = masses[0] * masses[1] * masses[2] * masses[3];
  PolyQ V = PolyQ::var(reg, 0), S = PolyQ::var(reg, 1), P = PolyQ::var(reg, 2);
  PolyQ t1 = (P * S * V).scale(Rat::from_int(162) * M) -
             (V * V).scale(Rat::from_int(2187) * M * M) + P * P * S * S;
  return t1.scale(mq) - (S * S * S).scale(Rat::from_int(16) * mq * mq * M) -
         (P * P * P * V).scale(Rat::from_int(9));
}

inline PolyQ vsp_metric_cofactor(const RegistryPtr& reg) {
  return vsp_metric_cofactor(
      reg, {Rat::one(), Rat::one(), Rat::one(), Rat::one()});
}

}  // namespace fourbody
