#include "owb/dynsys.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace owb {

ValidationError::ValidationError(const std::string& what, std::vector<std::string> witnesses)
    : std::runtime_error(what), witnesses_(std::move(witnesses)) {}

namespace {

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

std::string fmt(std::span<const double> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

// ------------------------------------------------------------------ groups

FiniteGroup validate_group(const GroupTable& table) {
  const std::size_t n = table.size();
  if (n == 0) throw ValidationError("group table is empty", {});
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n)
      throw ValidationError("group table is not square", {cat("row ", a, " has ", table[a].size(), " entries")});
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] >= n)
        throw ValidationError("group table entry out of range", {cat("cell [", a, "][", b, "] = ", table[a][b])});
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw ValidationError("group table is not associative", {cat("triple (", a, ",", b, ",", c, ")")});
  std::optional<std::size_t> e;
  for (std::size_t c = 0; c < n && !e; ++c) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table[c][a] == a && table[a][c] == a;
    if (ok) e = c;
  }
  if (!e) throw ValidationError("group table has no identity", {});
  std::vector<std::size_t> inv(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] == *e && table[b][a] == *e) inv[a] = b;
    if (inv[a] == n) throw ValidationError("group element has no inverse", {cat("element ", a)});
  }
  return FiniteGroup::from_table(table);
}

FiniteGroup FiniteGroup::from_table(const GroupTable& table) {
  FiniteGroup g;
  g.table_ = table;
  const std::size_t n = table.size();
  for (std::size_t c = 0; c < n; ++c) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table[c][a] == a && table[a][c] == a;
    if (ok) {
      g.identity_ = c;
      break;
    }
  }
  g.inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] == g.identity_) g.inverse_[a] = b;
  return g;
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n == 0) throw std::invalid_argument("cyclic group order must be positive");
  GroupTable t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  FiniteGroup g = from_table(t);
  g.name_ = cat("cyclic(", n, ")");
  return g;
}

FiniteGroup FiniteGroup::symmetric(std::size_t n) {
  if (n == 0 || n > 4) throw std::invalid_argument("symmetric groups are supported on 1 to 4 letters");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  GroupTable t(perms.size(), std::vector<std::size_t>(perms.size()));
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b) {
      std::vector<std::size_t> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  FiniteGroup g = from_table(t);
  g.name_ = cat("symmetric(", n, ")");
  return g;
}

// ---------------------------------------------------------------- algebras

namespace {

double coef(const Vec& c, std::size_t dim, std::size_t i, std::size_t j, std::size_t k) {
  return c[(i * dim + j) * dim + k];
}

Vec product(const Vec& c, std::size_t dim, std::span<const double> a, std::span<const double> b) {
  Vec out(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      const double w = a[i] * b[j];
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < dim; ++k) out[k] += w * coef(c, dim, i, j, k);
    }
  }
  return out;
}

std::optional<Vec> find_identity(const Vec& c, std::size_t dim, bool left) {
  // left: sum_i u_i c_{ijk} = delta_jk ; right: sum_i u_i c_{jik} = delta_jk
  Matrix m(dim * dim, dim);
  Vec rhs(dim * dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) m(j * dim + k, i) = left ? coef(c, dim, i, j, k) : coef(c, dim, j, i, k);
      rhs[j * dim + k] = j == k ? 1.0 : 0.0;
    }
  return solve(m, rhs);
}

bool same(std::span<const double> a, std::span<const double> b) {
  return max_abs_diff(a, b) <= kTol * std::max({1.0, max_abs(a), max_abs(b)});
}

}  // namespace

std::optional<Vec> find_left_identity(const Vec& constants, std::size_t dim) {
  return find_identity(constants, dim, true);
}

std::optional<Vec> find_right_identity(const Vec& constants, std::size_t dim) {
  return find_identity(constants, dim, false);
}

Vec OrderedAlgebra::multiply(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != dim() || b.size() != dim()) throw DimensionError("algebra product of wrong dimension");
  return product(constants_, dim(), a, b);
}

Matrix OrderedAlgebra::left_multiplication(std::span<const double> a) const {
  Matrix m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    const Vec col = multiply(a, unit_vector(dim(), j));
    for (std::size_t k = 0; k < dim(); ++k) m(k, j) = col[k];
  }
  return m;
}

Matrix OrderedAlgebra::right_multiplication(std::span<const double> b) const {
  Matrix m(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Vec col = multiply(unit_vector(dim(), i), b);
    for (std::size_t k = 0; k < dim(); ++k) m(k, i) = col[k];
  }
  return m;
}

OrderedAlgebra validate_algebra(AlgebraSpec spec) {
  const std::size_t n = spec.carrier.dim();
  if (spec.constants.size() != n * n * n)
    throw ValidationError("structure constants must have dim^3 entries",
                          {cat("expected ", n * n * n, ", got ", spec.constants.size())});
  OrderedAlgebra a(std::move(spec.carrier));
  a.constants_ = std::move(spec.constants);
  std::vector<std::string> bad;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Vec ei = unit_vector(n, i), ej = unit_vector(n, j), ek = unit_vector(n, k);
        if (!same(a.multiply(a.multiply(ei, ej), ek), a.multiply(ei, a.multiply(ej, ek))))
          bad.push_back(cat("associativity fails on basis triple (", i, ",", j, ",", k, ")"));
      }
  if (!bad.empty()) throw ValidationError("product is not associative", bad);

  if (a.cone().is_lorentz()) {
    std::mt19937_64 rng(17);
    for (int s = 0; s < 200; ++s) {
      const Vec x = random_member(a.cone(), rng), y = random_member(a.cone(), rng);
      if (!cone_contains(a.cone(), a.multiply(x, y))) {
        bad.push_back(cat("product of ", fmt(x), " and ", fmt(y), " leaves the cone"));
        break;
      }
    }
  } else {
    const auto& gens = a.cone().generators();
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < gens.size(); ++j) {
        const Vec p = a.multiply(gens[i], gens[j]);
        if (!cone_contains(a.cone(), p))
          bad.push_back(cat("generators ", fmt(gens[i]), " * ", fmt(gens[j]), " = ", fmt(p), " is not positive"));
      }
  }
  if (!bad.empty()) throw ValidationError("cone is not closed under multiplication", bad);

  auto check_identity = [&](const Vec& u, bool left, bool right, const char* what) {
    if (u.size() != n) {
      bad.push_back(cat(what, " has wrong dimension"));
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Vec e = unit_vector(n, j);
      if (left && !same(a.multiply(u, e), e)) bad.push_back(cat(what, " fails u*e", j, " = e", j));
      if (right && !same(a.multiply(e, u), e)) bad.push_back(cat(what, " fails e", j, "*u = e", j));
    }
  };
  if (spec.unit) check_identity(*spec.unit, true, true, "unit");
  if (spec.left_identity) check_identity(*spec.left_identity, true, false, "left identity");
  if (spec.right_identity) check_identity(*spec.right_identity, false, true, "right identity");
  if (!bad.empty()) throw ValidationError("supplied identity is wrong", bad);

  auto left = spec.unit ? spec.unit : spec.left_identity ? spec.left_identity : find_left_identity(a.constants_, n);
  auto right = spec.unit ? spec.unit : spec.right_identity ? spec.right_identity : find_right_identity(a.constants_, n);
  if (left && right && same(*left, *right)) a.unit_ = left;
  if (spec.unit) a.unit_ = spec.unit;
  a.left_ = left;
  a.right_ = right;

  if (auto verts = unit_ball_vertices(a.space(), 4096); verts && is_polyhedral(a.space().norm)) {
    double best = 0.0;
    for (const auto& v : *verts) best = std::max(best, op_norm(a.left_multiplication(v), a.space(), a.space()));
    a.mult_bound_ = {best, Method::exact, "left multiplication norms at unit-ball vertices"};
  } else {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss;
    double best = 0.0;
    for (std::size_t s = 0; s < 200 + n; ++s) {
      Vec v = s < n ? unit_vector(n, s) : Vec(n);
      if (s >= n)
        for (auto& x : v) x = gauss(rng);
      v = scaled(v, 1.0 / vec_norm(v, a.space()));
      best = std::max(best, op_norm(a.left_multiplication(v), a.space(), a.space()));
    }
    a.mult_bound_ = {best, Method::lower_bound, "left multiplication norms on sampled unit vectors"};
  }
  return a;
}

namespace algebras {

namespace {

AlgebraSpec spec(std::size_t n, NormKind norm, Cone cone, Vec constants) {
  return AlgebraSpec{OrderedSpace({n, std::move(norm)}, std::move(cone)), std::move(constants), {}, {}, {}};
}

}  // namespace

OrderedAlgebra scalars(NormKind norm) { return validate_algebra(spec(1, std::move(norm), Cone::standard(1), {1.0})); }

OrderedAlgebra pointwise(std::size_t n, NormKind norm) {
  Vec c(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) c[(i * n + i) * n + i] = 1.0;
  return validate_algebra(spec(n, std::move(norm), Cone::standard(n), std::move(c)));
}

OrderedAlgebra upper_triangular(NormKind norm) {
  // basis E11, E12, E22
  Vec c(27, 0.0);
  auto set = [&](std::size_t i, std::size_t j, std::size_t k) { c[(i * 3 + j) * 3 + k] = 1.0; };
  set(0, 0, 0);
  set(0, 1, 1);
  set(1, 2, 1);
  set(2, 2, 2);
  return validate_algebra(spec(3, std::move(norm), Cone::standard(3), std::move(c)));
}

OrderedAlgebra cyclic_convolution(std::size_t n, NormKind norm) {
  Vec c(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[(i * n + j) * n + (i + j) % n] = 1.0;
  return validate_algebra(spec(n, std::move(norm), Cone::standard(n), std::move(c)));
}

OrderedAlgebra chain(NormKind norm) {
  Vec c(27, 0.0);
  for (std::size_t i = 0; i < 3; ++i) c[(i * 3 + i) * 3 + i] = 1.0;
  return validate_algebra(spec(3, std::move(norm), Cone::polyhedral({{1, 1, 1}, {1, 1, 0}, {1, 0, 0}}, 3),
                               std::move(c)));
}

OrderedAlgebra left_projection(const Vec& phi, NormKind norm) {
  const std::size_t n = phi.size();
  Vec c(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[(i * n + j) * n + j] = phi[i];
  return validate_algebra(spec(n, std::move(norm), Cone::standard(n), std::move(c)));
}

}  // namespace algebras

// ----------------------------------------------------------------- actions

std::vector<Matrix> validate_action(const FiniteGroup& g, const OrderedAlgebra& a, std::vector<Matrix> m) {
  const std::size_t n = a.dim();
  if (m.size() != g.order())
    throw ValidationError("action needs one matrix per group element",
                          {cat("expected ", g.order(), ", got ", m.size())});
  for (std::size_t s = 0; s < m.size(); ++s)
    if (m[s].rows() != n || m[s].cols() != n)
      throw ValidationError("action matrix has wrong shape", {cat("element ", s)});
  std::vector<std::string> bad;
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Vec ei = unit_vector(n, i), ej = unit_vector(n, j);
        const Vec lhs = m[s] * a.multiply(ei, ej);
        const Vec rhs = a.multiply(m[s] * ei, m[s] * ej);
        if (!same(lhs, rhs)) bad.push_back(cat("alpha_", s, "(e", i, " e", j, ") != alpha_", s, "(e", i, ") alpha_", s, "(e", j, ")"));
      }
  if (!bad.empty()) throw ValidationError("action is not by automorphisms", bad);
  if (max_abs_diff(m[g.identity()], Matrix::identity(n)) > kTol) bad.push_back("identity element does not act trivially");
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t)
      if (max_abs_diff(m[s] * m[t], m[g.mul(s, t)]) > kTol * std::max(1.0, max_abs(m[g.mul(s, t)])))
        bad.push_back(cat("alpha_", s, " alpha_", t, " != alpha_", g.mul(s, t)));
  if (!bad.empty()) throw ValidationError("action is not a group homomorphism", bad);
  for (std::size_t s = 0; s < g.order(); ++s) {
    const auto p = operator_positive(m[s], a.carrier(), a.carrier());
    if (!p.positive) bad.push_back(cat("alpha_", s, " is not positive"));
  }
  if (!bad.empty()) throw ValidationError("action is not bipositive", bad);
  return m;
}

std::vector<Matrix> trivial_action(const FiniteGroup& g, const OrderedAlgebra& a) {
  return std::vector<Matrix>(g.order(), Matrix::identity(a.dim()));
}

std::vector<Matrix> permutation_action(const std::vector<std::vector<std::size_t>>& perms) {
  std::vector<Matrix> out;
  for (const auto& p : perms) {
    Matrix m(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] >= p.size()) throw std::invalid_argument("permutation entry out of range");
      m(p[i], i) = 1.0;
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Matrix> regular_permutation_action(const FiniteGroup& g) {
  std::vector<std::vector<std::size_t>> perms(g.order(), std::vector<std::size_t>(g.order()));
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t h = 0; h < g.order(); ++h) perms[s][h] = g.mul(s, h);
  return permutation_action(perms);
}

DynamicalSystem make_system(OrderedAlgebra a, FiniteGroup g, std::vector<Matrix> matrices) {
  auto alpha = validate_action(g, a, std::move(matrices));
  DynamicalSystem ds{std::move(a), std::move(g), std::move(alpha)};
  ds.c_alpha = uniform_bound(ds);
  ds.isometric = ds.c_alpha <= 1.0 + kTol;
  return ds;
}

double uniform_bound(const DynamicalSystem& ds) {
  double best = 0.0;
  for (const auto& m : ds.alpha) best = std::max(best, op_norm(m, ds.algebra.space(), ds.algebra.space()));
  return best;
}

// ------------------------------------------------------------- C_c(G, A)

CcFunction::CcFunction(std::size_t order, std::size_t dim, Vec c) : order(order), dim(dim), coords(std::move(c)) {
  if (coords.size() != order * dim) throw DimensionError("function coordinates have wrong length");
}

CcFunction CcFunction::delta(const DynamicalSystem& ds, std::size_t s, std::span<const double> a) {
  if (a.size() != ds.dim()) throw DimensionError("algebra element has wrong dimension");
  CcFunction f = zero(ds);
  std::copy(a.begin(), a.end(), f.at(s).begin());
  return f;
}

}  // namespace owb
