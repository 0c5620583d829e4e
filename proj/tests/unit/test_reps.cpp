#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "owb/corpus.hpp"
#include "owb/crossed.hpp"
#include "owb/reps.hpp"

using namespace owb;

namespace {

OrderedSpace line() { return {{1, NormKind::one()}, Cone::standard(1)}; }

DynamicalSystem z2_scalars() {
  const auto g = FiniteGroup::cyclic(2);
  const auto a = algebras::scalars();
  return make_system(a, g, trivial_action(g, a));
}

CovariantRep id_triv() { return make_rep(line(), {Matrix{{1}}}, {Matrix{{1}}, Matrix{{1}}}, "id x triv"); }

DynamicalSystem z2_swap() {
  const auto g = FiniteGroup::cyclic(2);
  return make_system(algebras::pointwise(2), g, permutation_action({{0, 1}, {1, 0}}));
}

const Matrix kSwap{{0, 1}, {1, 0}};

double l1(const DynamicalSystem& ds, const CcFunction& f) {
  double s = 0;
  for (std::size_t r = 0; r < f.order; ++r) s += vec_norm(f.at(r), ds.algebra.space());
  return s;
}

}  // namespace

TEST_CASE("covariance") {
  const auto ds = z2_swap();
  const auto reg = reps::left_regular(ds);
  CHECK(check_covariant(reg, ds));
  CHECK(max_abs_diff(reg.u[1], kSwap) == 0.0);

  auto broken = reg;
  broken.u[1] = Matrix::identity(2);
  const auto c = check_covariant(broken, ds);
  CHECK_FALSE(c.ok);
  CHECK(c.witness.find("(s, a) = (1, e0)") != std::string::npos);

  CHECK(certify(id_triv(), z2_scalars()));
}

TEST_CASE("positivity") {
  const auto ds = z2_scalars();
  CHECK(check_positive(id_triv(), ds));

  const OrderedSpace plane{{2, NormKind::sup()}, Cone::standard(2)};
  const auto flip = make_rep(plane, {Matrix{{1, 0}, {0, -1}}}, {Matrix::identity(2), Matrix::identity(2)});
  CHECK_FALSE(check_positive(flip, ds));

  CHECK(check_positive(reps::left_regular(z2_swap()), z2_swap()));
}

TEST_CASE("non-degeneracy") {
  const OrderedSpace plane{{2, NormKind::sup()}, Cone::standard(2)};
  const auto corner = make_rep(plane, {Matrix{{1, 0}, {0, 0}}}, {Matrix::identity(2), Matrix::identity(2)});
  CHECK_FALSE(check_nondegenerate(corner));
  const auto zero = make_rep(plane, {Matrix(2, 2)}, {Matrix::identity(2), Matrix::identity(2)});
  CHECK_FALSE(check_nondegenerate(zero));
  CHECK(check_nondegenerate(id_triv()));
}

TEST_CASE("integrated forms") {
  const auto ds = z2_scalars();
  const auto r = id_triv();
  const Matrix t = integrated_form(r, CcFunction(2, 1, {1, 2}));
  CHECK(t(0, 0) == doctest::Approx(3.0));

  const auto sw = z2_swap();
  const auto reg = reps::left_regular(sw);
  const Matrix unit = integrated_form(reg, CcFunction::delta(sw, 0, Vec{1, 1}));
  CHECK(max_abs_diff(unit, Matrix::identity(2)) < 1e-12);
  const Matrix m = integrated_form(reg, CcFunction::delta(sw, 1, Vec{1, 1}));
  CHECK(max_abs_diff(m, kSwap) < 1e-12);

  // flat matrix agrees with the direct sum over group elements
  const Matrix flat = integrated_form_matrix(reg, sw);
  const CcFunction f(2, 2, {1, -2, 0.5, 3});
  const Vec entries = flat * f.coords;
  const Matrix direct = integrated_form(reg, f);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(entries[i * 2 + j] == doctest::Approx(direct(i, j)));
}

TEST_CASE("sigma on the two-point example") {
  const auto ds = z2_scalars();
  const RepClass rc(ds, {id_triv()});
  CHECK(sigma_r(rc, CcFunction(2, 1, {1, -1})) == doctest::Approx(0.0));
  CHECK(sigma_r(rc, CcFunction(2, 1, {1, 2})) == doctest::Approx(3.0));
  CHECK(sigma_r(rc, CcFunction(2, 1, {0, 0})) == 0.0);
  CHECK(rc.c() == doctest::Approx(1.0));

  const RepClass two(ds, {id_triv(), id_triv()});
  const auto sum = direct_sum(two, SumExponent::one);
  CHECK(sum.dim() == 2);
  CHECK(certify(sum, ds));
  const Matrix t = integrated_form(sum, CcFunction(2, 1, {1, 2}));
  CHECK(op_norm(t, sum.space.space, sum.space.space) == doctest::Approx(3.0));
  CHECK(cone_contains(sum.space.cone, Vec{1, 2}));
  CHECK_FALSE(cone_contains(sum.space.cone, Vec{1, -2}));

  const auto single = direct_sum(RepClass(ds, {id_triv()}), SumExponent::two);
  CHECK(max_abs_diff(single.pi[0], Matrix{{1}}) == 0.0);
}

TEST_CASE("conjugate and induced representations") {
  const auto ds = z2_swap();
  const auto reg = reps::left_regular(ds);
  const auto conj = reps::conjugate_diagonal(reg, {1, 3});
  CHECK(certify(conj, ds));
  CHECK(max_abs_diff(conj.u[1], Matrix{{0, 1.0 / 3}, {3, 0}}) < 1e-12);
  CHECK_THROWS(reps::conjugate_diagonal(reg, {1, -1}));

  const auto ind = reps::induced_regular(ds, {1, 2});
  CHECK(ind.dim() == 4);
  CHECK(certify(ind, ds));
}

TEST_CASE("integrated form is multiplicative and positive on the corpus") {
  std::mt19937_64 rng(2024);
  const auto corpus = make_corpus(99, 30);
  for (const auto& inst : corpus) {
    const auto& ds = inst.system;
    for (const auto& r : inst.reps) {
      REQUIRE(certify(r, ds));
      for (int k = 0; k < 3; ++k) {
        const auto f = random_function(ds, rng), g = random_function(ds, rng);
        const Matrix lhs = integrated_form(r, convolve(ds, f, g));
        const Matrix rhs = integrated_form(r, f) * integrated_form(r, g);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-9 * std::max(1.0, max_abs(rhs)));
        const auto p = random_positive_function(ds, rng);
        CHECK(operator_positive(integrated_form(r, p), r.space, r.space).positive);
      }
    }
  }
}

TEST_CASE("sigma bounds and direct sum isometry") {
  std::mt19937_64 rng(7);
  const auto corpus = make_corpus(3, 25);
  for (const auto& inst : corpus) {
    const auto& ds = inst.system;
    const RepClass rc(ds, inst.reps);
    const double nu_max = *std::max_element(rc.nu().begin(), rc.nu().end());
    for (SumExponent p : {SumExponent::one, SumExponent::two}) {
      const auto sum = direct_sum(rc, p);
      for (int k = 0; k < 4; ++k) {
        const auto f = random_function(ds, rng);
        const double s = sigma_r(rc, f);
        CHECK(s <= rc.c() * nu_max * l1(ds, f) * (1 + 1e-9) + 1e-12);
        const double direct = op_norm(integrated_form(sum, f), sum.space.space, sum.space.space);
        CHECK(direct == doctest::Approx(s).epsilon(1e-9));
      }
    }
    // seminorm axioms
    const auto f = random_function(ds, rng), g = random_function(ds, rng);
    CcFunction fg = f;
    for (std::size_t i = 0; i < fg.coords.size(); ++i) fg.coords[i] += g.coords[i];
    CHECK(sigma_r(rc, fg) <= sigma_r(rc, f) + sigma_r(rc, g) + 1e-9);
    CHECK(sigma_r(rc, convolve(ds, f, g)) <= sigma_r(rc, f) * sigma_r(rc, g) * (1 + 1e-9) + 1e-12);
    CcFunction f3 = f;
    for (double& c : f3.coords) c *= -3;
    CHECK(sigma_r(rc, f3) == doctest::Approx(3 * sigma_r(rc, f)));
  }
}
