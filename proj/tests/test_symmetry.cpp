// Symmetry algebra checks: the formal commuting family of vector fields, the
// rotation triple relations over the extension field, the spin-2 ladder and
// its mutual commutativity with the radial operator, and the functional
// independence of the six principal symbols.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fourbody/linalg.hpp"
#include "fourbody/symmetry.hpp"

#include <vector>

using namespace fourbody;

namespace {

RegistryPtr sreg() { return nbody_registry(4); }

DiffOpR scaled(DiffOpR op, const Radical& c) {
  op.scale(c);
  return op;
}

}  // namespace

TEST_CASE("vector field family commutes with the operator formally") {
  auto reg = rho_registry();
  DiffOpQ L = edge_rotation<Rat>(reg, PolyQ::var(reg, "a"),
                                 PolyQ::var(reg, "b"), PolyQ::var(reg, "c"));
  CHECK_FALSE(L.is_zero());
  CHECK(commutator(radial_operator(reg), L).is_zero());
}

TEST_CASE("rotation triple closes cyclically") {
  auto reg = sreg();
  DiffOpR j1 = rotation_j1(reg), j2 = rotation_j2(reg), j3 = rotation_j3(reg);
  CHECK(commutator(j1, j2) == j3);
  CHECK(commutator(j2, j3) == j1);
  CHECK(commutator(j3, j1) == j2);
}

TEST_CASE("triple members commute with the lifted operator") {
  auto reg = sreg();
  DiffOpR delta = lift_op(radial_operator_n(reg, 4, param_rf(reg, "d")));
  CHECK(commutator(delta, rotation_j1(reg)).is_zero());
  CHECK(commutator(delta, rotation_j2(reg)).is_zero());
  CHECK(commutator(delta, rotation_j3(reg)).is_zero());
}

TEST_CASE("weight basis relations") {
  auto reg = sreg();
  LadderFamily fam = ladder_family(reg);
  CHECK(commutator(fam.j0, fam.jp) == fam.jp);
  CHECK(commutator(fam.j0, fam.jm) == scaled(fam.jm, Radical(-1)));
  CHECK(commutator(fam.jp, fam.jm) == scaled(fam.j0, Radical(2)));
}

TEST_CASE("top component commutes and has weight two") {
  auto reg = sreg();
  LadderFamily fam = ladder_family(reg);
  CHECK(commutator(fam.delta, fam.f[0]).is_zero());
  CHECK(commutator(fam.j0, fam.f[0]) == scaled(fam.f[0], Radical(2)));
  CHECK(commutator(fam.jp, fam.f[0]).is_zero());
}

TEST_CASE("ladder terminates and is weight graded") {
  auto reg = sreg();
  LadderFamily fam = ladder_family(reg);
  CHECK(commutator(fam.jm, fam.f[4]).is_zero());
  for (int k = 0; k < 5; ++k) {
    CHECK_FALSE(fam.f[(std::size_t)k].is_zero());
    CHECK(commutator(fam.j0, fam.f[(std::size_t)k]) ==
          scaled(fam.f[(std::size_t)k], Radical(2 - k)));
  }
}

TEST_CASE("raising returns each component with the mirrored factor") {
  auto reg = sreg();
  LadderFamily fam = ladder_family(reg);
  const Radical two(2), s6 = Radical::sqrt6();
  CHECK(commutator(fam.jp, fam.f[1]) == scaled(fam.f[0], two));
  CHECK(commutator(fam.jp, fam.f[2]) == scaled(fam.f[1], s6));
  CHECK(commutator(fam.jp, fam.f[3]) == scaled(fam.f[2], s6));
  CHECK(commutator(fam.jp, fam.f[4]) == scaled(fam.f[3], two));
}

TEST_CASE("the six operators commute pairwise") {
  auto reg = sreg();
  LadderFamily fam = ladder_family(reg);
  std::vector<DiffOpR> ops = {fam.delta, fam.f[0], fam.f[1],
                              fam.f[2],  fam.f[3], fam.f[4]};
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      CHECK(commutator(ops[i], ops[j]).is_zero());
}

TEST_CASE("principal symbols are functionally independent") {
  auto reg = sreg();
  auto phase = phase_registry(reg);
  LadderFamily fam = ladder_family(reg);
  std::vector<DiffOpR> ops = {fam.delta, fam.f[0], fam.f[1],
                              fam.f[2],  fam.f[3], fam.f[4]};

  std::vector<Radical> point;
  for (int k = 0; k < phase->size(); ++k)
    point.push_back(Radical(Rat(2 * k + 3, (unsigned long)(k % 5 + 2))));

  Rows<Radical> jac;
  for (const auto& op : ops) {
    PolyR sym = principal_symbol(op, phase, 2);
    std::vector<Radical> row;
    for (int v = 0; v < 12; ++v) row.push_back(sym.derivative(v).eval(point));
    jac.push_back(std::move(row));
  }
  CHECK(field_rank(jac) == 6);
}
