#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "owb/lp.hpp"
#include "owb/normlp.hpp"

using namespace owb;

namespace {

// Independent vertex enumerator for {x >= 0 : A x = b}: basic feasible
// solutions over every column subset of size rank.
double enumerate_vertices(const LpProblem& p, bool& feasible) {
  const std::size_t n = p.objective.size(), m = p.rhs.size();
  double best = 1e300;
  feasible = false;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1) cols.push_back(j);
    if (cols.size() > m) continue;
    Matrix a(m, cols.size());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < cols.size(); ++k) a(i, k) = p.equalities(i, cols[k]);
    if (rank(a) != cols.size()) continue;
    auto sol = solve(a, p.rhs);
    if (!sol) continue;
    Vec x(n, 0.0);
    bool ok = true;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if ((*sol)[k] < -1e-9) ok = false;
      x[cols[k]] = (*sol)[k];
    }
    if (!ok) continue;
    feasible = true;
    best = std::min(best, dot(p.objective, x));
  }
  return best;
}

}  // namespace

TEST_CASE("small reference programs") {
  LpProblem p;
  p.objective = {1, 1};
  p.equalities = Matrix{{1, -1}};
  p.rhs = {1};
  p.nonneg = {true, true};
  const auto r = lp_minimize(p);
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(0.0));

  LpProblem inf;
  inf.objective = {0};
  inf.equalities = Matrix{{1}};
  inf.rhs = {-1};
  inf.nonneg = {true};
  CHECK(lp_minimize(inf).status == LpStatus::infeasible);

  LpProblem unb;
  unb.objective = {-1};
  unb.equalities = Matrix(0, 1);
  unb.nonneg = {true};
  CHECK(lp_minimize(unb).status == LpStatus::unbounded);
}

TEST_CASE("free variables and redundant rows") {
  LpBuilder b;
  const auto x = b.add_free(2);
  b.add_equality({{x, 1}, {x + 1, 1}}, 2);
  b.add_equality({{x, 2}, {x + 1, 2}}, 4);
  const auto t = b.add_nonneg();
  b.add_less_equal({{x, 1}, {t, -1}}, 0);
  b.add_less_equal({{x, -1}, {t, -1}}, 0);
  b.set_cost(t, 1);
  const auto r = lp_minimize(b.build());
  REQUIRE(r.optimal());
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.x[x + 1] == doctest::Approx(2.0));
}

TEST_CASE("simplex optimum matches vertex enumeration") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  int feasible_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 4, m = 1 + rng() % 3;
    LpProblem p;
    p.equalities = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) p.equalities(i, j) = d(rng);
    p.rhs.resize(m);
    for (auto& v : p.rhs) v = d(rng);
    p.objective.resize(n);
    for (auto& v : p.objective) v = std::abs(d(rng)) + 0.1;  // bounded below by 0
    p.nonneg.assign(n, true);
    bool feasible = false;
    const double oracle = enumerate_vertices(p, feasible);
    const auto r = lp_minimize(p);
    if (!feasible) {
      CHECK(r.status == LpStatus::infeasible);
      continue;
    }
    ++feasible_count;
    REQUIRE(r.optimal());
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(max_abs(sub(p.equalities * r.x, p.rhs)) <= 1e-9);
    for (double v : r.x) CHECK(v >= -1e-9);
  }
  CHECK(feasible_count > 20);
}

TEST_CASE("norm epigraph reproduces polyhedral norms") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const std::vector<NormedSpace> spaces{
      {3, NormKind::one()}, {3, NormKind::sup()}, {3, NormKind::weighted_one({1, 2, 3})},
      {3, NormKind::block_sum(SumExponent::sup, {{2, NormKind::one()}, {1, NormKind::one()}})}};
  for (const auto& s : spaces) {
    const auto model = polyhedral_model(s);
    REQUIRE(model);
    for (int k = 0; k < 20; ++k) {
      const Vec target{d(rng), d(rng), d(rng)};
      LpBuilder lp;
      const auto v = lp.add_free(3);
      const AffineExpr x = AffineExpr::variables(v, 3);
      for (std::size_t i = 0; i < 3; ++i) lp.add_equality({{v + i, 1.0}}, target[i]);
      for (const auto& [var, c] : norm_epigraph(lp, *model, x)) lp.set_cost(var, c);
      const auto r = lp_minimize(lp.build());
      REQUIRE(r.optimal());
      CHECK(r.value == doctest::Approx(vec_norm(target, s)).epsilon(1e-9));
      CHECK(evaluate(*model, target) == doctest::Approx(vec_norm(target, s)));
    }
  }
}

TEST_CASE("cutting planes minimise Euclidean distance") {
  // min |x - (3,4)|_2 + |x|_2 over x on the segment between them: value 5
  LpBuilder lp;
  const auto v = lp.add_free(2);
  const AffineExpr x = AffineExpr::variables(v, 2);
  AffineExpr shifted = x;
  shifted.offset = {-3, -4};
  const auto r = minimize_two_norm_sum(lp, {x, shifted});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(r.lower <= r.value + 1e-12);
}
