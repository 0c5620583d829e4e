#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "owb/corpus.hpp"
#include "owb/correspond.hpp"

using namespace owb;

namespace {

const OrderedSpace kLine{{1, NormKind::one()}, Cone::standard(1)};

DynamicalSystem z2_scalars() {
  const auto g = FiniteGroup::cyclic(2);
  const auto a = algebras::scalars();
  return make_system(a, g, trivial_action(g, a));
}

CovariantRep id_triv() { return make_rep(kLine, {Matrix{{1}}}, {Matrix{{1}}, Matrix{{1}}}); }

CrossedProduct two_point() { return build_crossed(z2_scalars(), RepClass(z2_scalars(), {id_triv()})); }

DynamicalSystem z2_swap() {
  const auto g = FiniteGroup::cyclic(2);
  return make_system(algebras::pointwise(2), g, permutation_action({{0, 1}, {1, 0}}));
}

}  // namespace

TEST_CASE("R-continuity") {
  const auto cp = two_point();
  const auto own = r_continuity(cp, id_triv());
  CHECK(own.continuous);
  CHECK(own.constant.value <= 1.0 + 1e-9);

  const auto sign = make_rep(kLine, {Matrix{{1}}}, {Matrix{{1}}, Matrix{{-1}}});
  const auto c = r_continuity(cp, sign);
  CHECK_FALSE(c.continuous);
  REQUIRE(c.witness);
  const auto w = *c.witness;
  // image of the kernel element under the integrated form: w0 - w1 = 2 w0
  CHECK(std::abs(w[0] - w[1]) == doctest::Approx(2 * std::abs(w[0])));
  CHECK(w[0] == doctest::Approx(-w[1]));
  CHECK_THROWS_AS(forward(cp, sign), PreconditionError);
}

TEST_CASE("two-point example in both directions") {
  const auto cp = two_point();
  const auto t = forward(cp, id_triv());
  REQUIRE(t.images.size() == 1);
  CHECK(max_abs_diff(t.images[0], Matrix{{1}}) < 1e-12);
  const auto back = backward(cp, t);
  CHECK(max_abs_diff(back.pi[0], Matrix{{1}}) < 1e-12);
  CHECK(max_abs_diff(back.u[1], Matrix{{1}}) < 1e-12);
  CHECK(roundtrip(cp, id_triv()) == 0.0);
  CHECK(roundtrip(cp, t) == 0.0);
}

TEST_CASE("forward on the swap system") {
  const auto ds = z2_swap();
  const auto reg = reps::induced_regular(ds);
  const auto cp = build_crossed(ds, RepClass(ds, {reg}));
  const auto t = forward(cp, reg);
  CHECK(t.images.size() == 4);
  CHECK(check_multiplicative(cp, t));
  CHECK(check_positive(cp, t));
  CHECK(check_nondegenerate(t));
  CHECK(roundtrip(cp, reg) < 1e-9);

  const auto sum = direct_sum(cp.reps(), SumExponent::one);
  CHECK(roundtrip(cp, sum) < 1e-9);
  const auto lr = reps::left_regular(ds);
  CHECK(r_continuity(cp, lr).continuous);
  CHECK(roundtrip(cp, lr) < 1e-9);
}

TEST_CASE("trivial group") {
  const auto g = FiniteGroup::cyclic(1);
  const auto a = algebras::upper_triangular();
  const auto ds = make_system(a, g, trivial_action(g, a));
  const auto r = reps::left_regular(ds);
  const auto cp = build_crossed(ds, RepClass(ds, {r}));
  const auto t = forward(cp, r);
  for (std::size_t k = 0; k < 3; ++k) {
    const Vec e = unit_vector(3, k);
    CHECK(max_abs_diff(t.of(cp.q(CcFunction(1, 3, e))), r.pi_of(e)) < 1e-12);
  }
  const auto back = backward(cp, t);
  CHECK(max_abs_diff(back.pi_of(*a.unit()), t.of(*cp.identity())) < 1e-12);
  const auto triple = verify_canonical_triple(cp);
  CHECK(triple.all());
  CHECK(triple.bipositive_lambda);
}

TEST_CASE("degenerate or non-positive algebra representations are rejected") {
  const auto cp = two_point();
  const AlgebraRep zero{{{1, NormKind::one()}, Cone::standard(1)}, {Matrix{{0}}}};
  CHECK_FALSE(check_nondegenerate(zero));
  CHECK_THROWS_AS(backward(cp, zero), PreconditionError);
  const AlgebraRep neg{kLine, {Matrix{{-1}}}};
  CHECK_FALSE(check_positive(cp, neg));
  CHECK_THROWS_AS(backward(cp, neg), PreconditionError);
}

TEST_CASE("missing left identity disables the backward map") {
  // nilpotent: e0 e0 = e1, every other product vanishes
  const auto g = FiniteGroup::cyclic(2);
  const OrderedSpace plane{{2, NormKind::one()}, Cone::standard(2)};
  Vec c(8, 0.0);
  c[1] = 1;
  const auto a = validate_algebra(AlgebraSpec{plane, c});
  CHECK_FALSE(a.left_identity());
  const auto ds = make_system(a, g, trivial_action(g, a));
  const auto r = make_rep(plane, {Matrix{{0, 0}, {1, 0}}, Matrix(2, 2)}, {Matrix::identity(2), Matrix::identity(2)});
  const auto cp = build_crossed(ds, RepClass(ds, {r}));
  const AlgebraRep t{plane, std::vector<Matrix>(cp.dim(), Matrix::identity(2))};
  try {
    backward(cp, t);
    FAIL("backward accepted an algebra without left identity");
  } catch (const PreconditionError& e) {
    CHECK(e.certificate() == "left identity");
  }
}

TEST_CASE("round trips on the corpus") {
  std::mt19937_64 rng(606);
  for (const auto& inst : make_corpus(17, 40)) {
    const auto& ds = inst.system;
    const auto cp = build_crossed(ds, RepClass(ds, inst.reps));
    CAPTURE(inst.label);
    for (const auto& r : inst.reps) {
      const auto t = forward(cp, r);
      CHECK(check_positive(cp, t));
      CHECK(check_multiplicative(cp, t));
      CHECK(roundtrip(cp, r) < 1e-9);
      CHECK(check_positive(backward(cp, t), ds));
    }
    if (!ds.algebra.left_identity()) continue;
    for (int k = 0; k < 2; ++k) {
      const auto t = random_algebra_rep(cp, rng);
      CHECK(roundtrip(cp, t) < 1e-9);
      CHECK(check_composition_law(cp, t, 10, 3));
    }
  }
}

TEST_CASE("canonical triple") {
  const auto two = verify_canonical_triple(two_point());
  CHECK(two.all());
  CHECK(two.bipositive_lambda);
  CHECK(two.cone_image.method == Method::exact);

  // A has no right identity, but non-degenerate reps force pi(u) = I, so the
  // quotient identity is two-sided and bipositivity is still exact
  const auto g = FiniteGroup::cyclic(7);
  const auto a = algebras::left_projection({1.0, 0.5});
  const auto ds = make_system(a, g, trivial_action(g, a));
  const auto cp = build_crossed(ds, RepClass(ds, {reps::induced_regular(ds)}));
  REQUIRE(cp.dim() > 6);
  REQUIRE_FALSE(a.right_identity());
  const auto rep = verify_canonical_triple(cp);
  CHECK(rep.centralizers);
  CHECK(rep.regular_image);
  CHECK(cp.identity_is_right());
  CHECK(rep.cone_image.method == Method::exact);
  CHECK(rep.bipositive_lambda);
  REQUIRE_FALSE(rep.notes.empty());
  CHECK(rep.notes.front().find("right identity") != std::string::npos);
}
