#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "owb/linalg.hpp"

using namespace owb;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Independent brute force: maximise |Tx| over every vector with entries in
// {-1, 0, 1} that has unit norm in the domain.
double brute_force_norm(const Matrix& t, const NormedSpace& dom, const NormedSpace& cod) {
  const std::size_t n = t.cols();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  double best = 0.0;
  for (std::size_t code = 1; code < total; ++code) {
    Vec x(n);
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= 3) x[i] = static_cast<double>(c % 3) - 1.0;
    const double nx = vec_norm(x, dom);
    best = std::max(best, vec_norm(t * x, cod) / nx);
  }
  return best;
}

NormedSpace space(std::size_t n, NormKind k) { return {n, std::move(k)}; }

}  // namespace

TEST_CASE("vector norms") {
  CHECK(vec_norm(Vec{3, -4}, space(2, NormKind::two())) == doctest::Approx(5.0));
  CHECK(vec_norm(Vec{1, -2}, space(2, NormKind::one())) == doctest::Approx(3.0));
  CHECK(vec_norm(Vec{1, -2}, space(2, NormKind::weighted_one({2, 3}))) == doctest::Approx(8.0));
  CHECK(vec_norm(Vec{1, -2}, space(2, NormKind::sup())) == doctest::Approx(2.0));
  CHECK_THROWS_AS(vec_norm(Vec{1, 2, 3}, space(2, NormKind::one())), DimensionError);
  CHECK_THROWS(NormKind::weighted_one({1.0, 0.0}));
}

TEST_CASE("norm axioms on samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const std::vector<NormedSpace> spaces{space(3, NormKind::one()), space(3, NormKind::sup()),
                                        space(3, NormKind::two()), space(3, NormKind::weighted_one({1, 2, 0.5}))};
  for (const auto& s : spaces)
    for (int k = 0; k < 200; ++k) {
      Vec x{d(rng), d(rng), d(rng)}, y{d(rng), d(rng), d(rng)};
      const double a = d(rng);
      CHECK(vec_norm(add(x, y), s) <= vec_norm(x, s) + vec_norm(y, s) + 1e-12);
      CHECK(vec_norm(scaled(x, a), s) == doctest::Approx(std::abs(a) * vec_norm(x, s)));
      CHECK(vec_norm(x, s) > 0.0);
    }
}

TEST_CASE("operator norms of the reference matrix") {
  const Matrix t{{1, -2}, {3, 4}};
  CHECK(op_norm(t, space(2, NormKind::one()), space(2, NormKind::one())) == doctest::Approx(6.0));
  CHECK(op_norm(t, space(2, NormKind::sup()), space(2, NormKind::sup())) == doctest::Approx(7.0));
  CHECK(brute_force_norm(t, space(2, NormKind::one()), space(2, NormKind::one())) == doctest::Approx(6.0));
  // singular values of [[1,-2],[3,4]]: sqrt(15 + sqrt(125))
  CHECK(op_norm(t, space(2, NormKind::two()), space(2, NormKind::two())) ==
        doctest::Approx(std::sqrt(15.0 + std::sqrt(125.0))).epsilon(1e-12));
  for (auto k : {NormKind::one(), NormKind::sup(), NormKind::two(), NormKind::weighted_one({1, 5, 2})})
    CHECK(op_norm(Matrix::identity(3), space(3, k), space(3, k)) == doctest::Approx(1.0));
}

TEST_CASE("formula routes agree with brute force over ball vertices") {
  std::mt19937_64 rng(3);
  const std::vector<NormKind> kinds{NormKind::one(), NormKind::sup(), NormKind::weighted_one({0.5, 2, 1, 3})};
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 4, m = 1 + rng() % 4;
    const Matrix t = random_matrix(m, n, rng);
    for (const auto& dk : kinds)
      for (const auto& ck : kinds) {
        NormKind dkk = dk.family() == NormKind::Family::weighted_one ? NormKind::weighted_one(Vec(dk.weights().begin(), dk.weights().begin() + static_cast<long>(n))) : dk;
        NormKind ckk = ck.family() == NormKind::Family::weighted_one ? NormKind::weighted_one(Vec(ck.weights().begin(), ck.weights().begin() + static_cast<long>(m))) : ck;
        const NormedSpace ds = space(n, dkk), cs = space(m, ckk);
        // The {-1,0,1} grid contains every vertex of the one and sup balls.
        CHECK(op_norm(t, ds, cs) == doctest::Approx(brute_force_norm(t, ds, cs)).epsilon(1e-9));
      }
  }
}

TEST_CASE("operator norm is submultiplicative") {
  std::mt19937_64 rng(5);
  const std::vector<NormKind> kinds{NormKind::one(), NormKind::sup(), NormKind::two()};
  for (int trial = 0; trial < 60; ++trial) {
    const Matrix s = random_matrix(3, 3, rng), t = random_matrix(3, 3, rng);
    for (const auto& k : kinds) {
      const NormedSpace sp = space(3, k);
      CHECK(op_norm(s * t, sp, sp) <= op_norm(s, sp, sp) * op_norm(t, sp, sp) + 1e-9);
    }
  }
}

TEST_CASE("two-norm operator norm matches sampled lower bound") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix t = random_matrix(4, 3, rng);
    const double s = spectral_norm(t);
    double sampled = 0.0;
    for (int k = 0; k < 2000; ++k) {
      Vec x{g(rng), g(rng), g(rng)};
      const Vec y = t * x;
      sampled = std::max(sampled, std::sqrt(dot(y, y) / dot(x, x)));
    }
    CHECK(sampled <= s + 1e-12);
    CHECK(sampled >= 0.95 * s);
    // |T|_2^2 <= |T|_1 |T|_inf
    const double one = op_norm(t, space(3, NormKind::one()), space(4, NormKind::one()));
    const double sup = op_norm(t, space(3, NormKind::sup()), space(4, NormKind::sup()));
    CHECK(s * s <= one * sup + 1e-9);
  }
}

TEST_CASE("block sum norms") {
  const std::vector<NormedSpace> blocks{space(2, NormKind::sup()), space(1, NormKind::one())};
  const NormedSpace l1{3, NormKind::block_sum(SumExponent::one, blocks)};
  const NormedSpace l2{3, NormKind::block_sum(SumExponent::two, blocks)};
  const NormedSpace linf{3, NormKind::block_sum(SumExponent::sup, blocks, {1.0, 2.0})};
  const Vec x{1, -3, 4};
  CHECK(vec_norm(x, l1) == doctest::Approx(7.0));
  CHECK(vec_norm(x, l2) == doctest::Approx(5.0));
  CHECK(vec_norm(x, linf) == doctest::Approx(8.0));
  // block-diagonal operators on l^p sums have norm max of block norms
  const Matrix a{{1, 2}, {0, -1}};
  const Matrix b{{3}};
  const Matrix parts[] = {a, b};
  const Matrix d = block_diagonal(parts);
  const double na = op_norm(a, blocks[0], blocks[0]);
  CHECK(op_norm(d, l1, l1) == doctest::Approx(std::max(na, 3.0)));
  CHECK(op_norm(d, l2, l2) == doctest::Approx(std::max(na, 3.0)));
}

TEST_CASE("nullspace and rank") {
  const auto k = nullspace(Matrix{{1, 1}});
  REQUIRE(k.size() == 1);
  CHECK(k[0][0] == doctest::Approx(-k[0][1]));
  CHECK(nullspace(Matrix::identity(3)).empty());
  CHECK(nullspace(Matrix(2, 2)).size() == 2);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix a = random_matrix(2, 3, rng), b = random_matrix(3, 5, rng);
    const Matrix m = a * b;  // rank 2 generically
    const auto ns = nullspace(m);
    CHECK(rank(m) == 2);
    CHECK(ns.size() == 3);
    for (const auto& v : ns) CHECK(max_abs(m * v) <= 1e-9 * std::max(1.0, max_abs(v)));
  }
}

TEST_CASE("inverse and solve") {
  const Matrix m{{2, 1}, {1, 1}};
  const auto inv = inverse(m);
  REQUIRE(inv);
  CHECK(max_abs_diff(m * *inv, Matrix::identity(2)) <= 1e-12);
  CHECK_FALSE(inverse(Matrix{{1, 2}, {2, 4}}));
  const auto x = solve(Matrix{{1, 1}}, Vec{2});
  REQUIRE(x);
  CHECK((*x)[0] + (*x)[1] == doctest::Approx(2.0));
  CHECK_FALSE(solve(Matrix{{1, 1}, {1, 1}}, Vec{1, 2}));
}
