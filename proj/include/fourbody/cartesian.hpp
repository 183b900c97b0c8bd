#pragma once
// Flat-space oracle: embeds the edge-square chart into Cartesian coordinates
// for n sites in dim dimensions and applies the mass-weighted flat Laplacian
// directly, giving an independent reference for every reduced operator.

#include <string>
#include <vector>

#include "fourbody/diffop.hpp"
#include "fourbody/poly.hpp"
#include "fourbody/rational.hpp"
#include "fourbody/registry.hpp"
#include "fourbody/tetra.hpp"

namespace fourbody {

/// Coordinate registry x<i>_<k> for site i in {1..nsites}, axis k in
/// {1..dim}; no parameters.
inline RegistryPtr cartesian_registry(int nsites, int dim) {
  std::vector<std::string> names;
  for (int i = 1; i <= nsites; ++i)
    for (int k = 1; k <= dim; ++k)
      names.push_back("x" + std::to_string(i) + "_" + std::to_string(k));
  return make_registry(names, {});
}

inline int cartesian_var(int dim, int site, int axis) {
  return (site - 1) * dim + (axis - 1);
}

/// Squared distance between sites i and j as a Cartesian polynomial.
inline PolyQ edge_square_image(const RegistryPtr& cart, int dim, int i,
                               int j) {
  PolyQ acc = PolyQ::zero(cart);
  for (int k = 1; k <= dim; ++k) {
    PolyQ diff = PolyQ::var(cart, cartesian_var(dim, i, k)) -
                 PolyQ::var(cart, cartesian_var(dim, j, k));
    acc = acc + diff * diff;
  }
  return acc;
}

/// Images of all edge squares, in the canonical edge order.
inline std::vector<PolyQ> edge_images(const RegistryPtr& cart, int nsites,
                                      int dim) {
  std::vector<PolyQ> out;
  for (auto [i, j] : edge_pairs(nsites))
    out.push_back(edge_square_image(cart, dim, i, j));
  return out;
}

/// Composes an edge-chart polynomial with the Cartesian embedding. Parameter
/// slots of the source registry must not occur in f.
inline PolyQ pushforward_to_cartesian(const PolyQ& f,
                                      const std::vector<PolyQ>& images,
                                      const RegistryPtr& cart) {
  std::vector<PolyQ> sub(f.registry()->size(), PolyQ::zero(cart));
  for (std::size_t v = 0; v < images.size(); ++v) sub[v] = images[v];
  return f.subst(sub);
}

/// Kinetic reference operator: sum over sites of 1/(2 m_i) times the flat
/// Laplacian in that site's coordinates.
inline DiffOpQ half_flat_laplacian(const RegistryPtr& cart, int nsites,
                                   int dim, const std::vector<Rat>& masses) {
  DiffOpQ op = DiffOpQ::zero(cart);
  for (int i = 1; i <= nsites; ++i) {
    Rat c = (Rat::from_int(2) * masses[i - 1]).inv();
    for (int k = 1; k <= dim; ++k) {
      ExpVec mi = ExpVec::unit(cart->size(), cartesian_var(dim, i, k));
      mi.bump(cartesian_var(dim, i, k));
      op.add_term(mi, RatFuncQ::constant(cart, c));
    }
  }
  return op;
}

inline DiffOpQ half_flat_laplacian(const RegistryPtr& cart, int nsites,
                                   int dim) {
  return half_flat_laplacian(cart, nsites, dim,
                             std::vector<Rat>(nsites, Rat::one()));
}

/// Exact oracle comparison: does `op` acting on f in the edge chart agree
/// with the flat operator acting on the embedded polynomial?
inline bool oracle_agrees(const DiffOpQ& op, const PolyQ& f,
                          const std::vector<PolyQ>& images,
                          const RegistryPtr& cart, const DiffOpQ& flat) {
  PolyQ down = op.apply(f).as_poly();
  PolyQ lhs = pushforward_to_cartesian(down, images, cart);
  PolyQ rhs = flat.apply(pushforward_to_cartesian(f, images, cart))
                  .as_poly();
  return lhs == rhs;
}

}  // namespace fourbody
