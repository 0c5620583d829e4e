#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "owb/corpus.hpp"
#include "owb/dynsys.hpp"

using namespace owb;

namespace {

// brute-force oracle, independent of validate_group
bool associative(const GroupTable& t) {
  const std::size_t n = t.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
  return true;
}

bool latin(const GroupTable& t) {
  const std::size_t n = t.size();
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<int> row(n, 0), col(n, 0);
    for (std::size_t b = 0; b < n; ++b) {
      ++row[t[a][b]];
      ++col[t[b][a]];
    }
    for (std::size_t i = 0; i < n; ++i)
      if (row[i] != 1 || col[i] != 1) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("group tables") {
  const GroupTable z2{{0, 1}, {1, 0}};
  const FiniteGroup g = validate_group(z2);
  CHECK(g.order() == 2);
  CHECK(g.identity() == 0);
  CHECK(g.inverse(1) == 1);

  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    const FiniteGroup s = FiniteGroup::symmetric(n);
    CHECK(associative(s.table()));
    CHECK(latin(s.table()));
    CHECK_NOTHROW(validate_group(s.table()));
  }
  CHECK(FiniteGroup::symmetric(3).order() == 6);
  CHECK(FiniteGroup::symmetric(4).order() == 24);

  const FiniteGroup c5 = FiniteGroup::cyclic(5);
  for (std::size_t a = 0; a < 5; ++a) {
    CHECK(c5.mul(a, c5.inverse(a)) == c5.identity());
    CHECK(c5.mul(c5.inverse(a), a) == c5.identity());
  }
  CHECK(associative(klein_four().table()));
}

TEST_CASE("broken tables name the failure") {
  // latin square of order 5 that is not a group
  const GroupTable bad{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  REQUIRE(latin(bad));
  REQUIRE_FALSE(associative(bad));
  try {
    validate_group(bad);
    FAIL("accepted a non-associative table");
  } catch (const ValidationError& e) {
    REQUIRE_FALSE(e.witnesses().empty());
    CHECK(e.witnesses().front().find("triple") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_group({{0, 1}, {1}}), ValidationError);
  CHECK_THROWS_AS(validate_group({{0, 2}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(validate_group({{1, 1}, {1, 1}}), ValidationError);
}

TEST_CASE("algebra identities") {
  const auto r = algebras::scalars();
  REQUIRE(r.unit());
  CHECK((*r.unit())[0] == doctest::Approx(1.0));

  const auto p = algebras::pointwise(2);
  REQUIRE(p.unit());
  CHECK((*p.unit())[0] == doctest::Approx(1.0));
  CHECK((*p.unit())[1] == doctest::Approx(1.0));
  CHECK(p.multiplication_bound().value == doctest::Approx(1.0));

  const auto lp = algebras::left_projection({0.5, 1.0});
  CHECK_FALSE(lp.unit());
  CHECK_FALSE(lp.right_identity());
  REQUIRE(lp.left_identity());
  const Vec x{3, -2};
  const Vec ux = lp.multiply(*lp.left_identity(), x);
  CHECK(ux[0] == doctest::Approx(3));
  CHECK(ux[1] == doctest::Approx(-2));

  const auto ut = algebras::upper_triangular();
  REQUIRE(ut.unit());
  CHECK(cone_contains(ut.cone(), *ut.unit()));
  CHECK(algebras::chain().unit());
  CHECK(algebras::cyclic_convolution(3).unit());
}

TEST_CASE("products satisfy the algebra axioms on random inputs") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-2, 2);
  const std::vector<OrderedAlgebra> all{algebras::pointwise(3), algebras::upper_triangular(), algebras::chain(),
                                        algebras::cyclic_convolution(4), algebras::left_projection({1, 0.5, 2})};
  for (const auto& a : all) {
    for (int trial = 0; trial < 30; ++trial) {
      Vec x(a.dim()), y(a.dim()), z(a.dim());
      for (auto* v : {&x, &y, &z})
        for (double& c : *v) c = u(rng);
      const Vec l = a.multiply(a.multiply(x, y), z);
      const Vec r = a.multiply(x, a.multiply(y, z));
      CHECK(max_abs_diff(l, r) < 1e-9);
      const Vec px = random_member(a.cone(), rng), py = random_member(a.cone(), rng);
      CHECK(cone_contains(a.cone(), a.multiply(px, py), 1e-8));
      const Matrix lm = a.left_multiplication(x);
      CHECK(max_abs_diff(lm * y, a.multiply(x, y)) < 1e-12);
      const Matrix rm = a.right_multiplication(y);
      CHECK(max_abs_diff(rm * x, a.multiply(x, y)) < 1e-12);
    }
  }
}

TEST_CASE("cone that is not closed under products") {
  // pointwise R^2 ordered by the ray through (1,-1): (1,-1)^2 = (1,1) leaves it
  AlgebraSpec spec{{{2, NormKind::sup()}, Cone::polyhedral({{1, -1}}, 2)}, algebras::pointwise(2).constants()};
  try {
    validate_algebra(spec);
    FAIL("accepted a non-multiplicative cone");
  } catch (const ValidationError& e) {
    CHECK_FALSE(e.witnesses().empty());
  }
}

TEST_CASE("wrong supplied unit is rejected") {
  AlgebraSpec spec{{{2, NormKind::sup()}, Cone::standard(2)}, algebras::pointwise(2).constants()};
  spec.unit = Vec{1, 0};
  CHECK_THROWS_AS(validate_algebra(spec), ValidationError);
}

TEST_CASE("actions") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const auto r = algebras::scalars();
  const auto triv = make_system(r, z2, trivial_action(z2, r));
  CHECK(triv.c_alpha == doctest::Approx(1.0));
  CHECK(triv.isometric);

  const auto p = algebras::pointwise(2);
  const auto swap = make_system(p, z2, permutation_action({{0, 1}, {1, 0}}));
  CHECK(swap.c_alpha == doctest::Approx(1.0));
  CHECK(uniform_bound(swap) == doctest::Approx(1.0));
  CHECK(max_abs_diff(swap.alpha[1] * Vec{1, 2}, Vec{2, 1}) == 0.0);

  // shear is not multiplicative on R x R
  CHECK_THROWS_WITH_AS(validate_action(z2, p, {Matrix::identity(2), Matrix{{1, 1}, {0, 1}}}),
                       "action is not by automorphisms", ValidationError);
  // order-two element must square to the identity
  const auto c3 = FiniteGroup::cyclic(3);
  CHECK_THROWS_WITH_AS(validate_action(c3, p, {Matrix::identity(2), Matrix{{0, 1}, {1, 0}}, Matrix{{0, 1}, {1, 0}}}),
                       "action is not a group homomorphism", ValidationError);
  CHECK_THROWS_AS(validate_action(z2, p, {Matrix::identity(2)}), ValidationError);

  const auto c4 = FiniteGroup::cyclic(4);
  const auto conv = algebras::pointwise(4, NormKind::one());
  const auto reg = make_system(conv, c4, regular_permutation_action(c4));
  CHECK(reg.c_alpha == doctest::Approx(1.0));
}

TEST_CASE("weighted norms make the action non-isometric") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const auto p = algebras::pointwise(2, NormKind::weighted_one({1, 3}));
  const auto ds = make_system(p, z2, permutation_action({{0, 1}, {1, 0}}));
  CHECK(ds.c_alpha == doctest::Approx(3.0));
  CHECK_FALSE(ds.isometric);
}

TEST_CASE("corpus instances are valid systems") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto inst = random_instance(rng);
    CHECK(inst.system.order() <= 6);
    CHECK(inst.system.dim() <= 3);
    CHECK_NOTHROW(validate_action(inst.system.group, inst.system.algebra, inst.system.alpha));
    CHECK_FALSE(inst.reps.empty());
  }
  for (std::size_t points : {1u, 3u, 6u}) {
    const auto g = FiniteGroup::symmetric(3);
    const auto perms = random_permutation_rep(g, points, rng);
    CHECK_NOTHROW(validate_action(g, algebras::pointwise(points), permutation_action(perms)));
  }
}

TEST_CASE("delta functions") {
  const FiniteGroup z2 = FiniteGroup::cyclic(2);
  const auto p = algebras::pointwise(2);
  const auto ds = make_system(p, z2, trivial_action(z2, p));
  const auto f = CcFunction::delta(ds, 1, Vec{1, 2});
  CHECK(f.coords == Vec{0, 0, 1, 2});
  CHECK_THROWS_AS(CcFunction(2, 2, Vec{1, 2, 3}), DimensionError);
}
