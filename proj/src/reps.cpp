#include "owb/reps.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace owb {

namespace {

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

Certificate fail(std::string witness, Method m = Method::exact) { return {false, m, std::move(witness)}; }

bool close(const Matrix& a, const Matrix& b) {
  return max_abs_diff(a, b) <= kTol * std::max({1.0, max_abs(a), max_abs(b)});
}

Matrix combine(const std::vector<Matrix>& basis, std::span<const double> a, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (a[k] != 0.0) {
      Matrix term = basis[k];
      term *= a[k];
      m += term;
    }
  return m;
}

}  // namespace

Matrix CovariantRep::pi_of(std::span<const double> a) const {
  if (a.size() != pi.size()) throw DimensionError("algebra element has wrong dimension for this representation");
  return combine(pi, a, dim(), dim());
}

CovariantRep make_rep(OrderedSpace space, std::vector<Matrix> pi, std::vector<Matrix> u, std::string label) {
  return CovariantRep{std::move(space), std::move(pi), std::move(u), std::move(label)};
}

Certificate check_shapes(const CovariantRep& r, const DynamicalSystem& ds) {
  if (r.pi.size() != ds.dim()) return fail(cat("pi has ", r.pi.size(), " basis images, algebra has dimension ", ds.dim()));
  if (r.u.size() != ds.order()) return fail(cat("U has ", r.u.size(), " matrices, group has order ", ds.order()));
  for (std::size_t k = 0; k < r.pi.size(); ++k)
    if (r.pi[k].rows() != r.dim() || r.pi[k].cols() != r.dim()) return fail(cat("pi(e", k, ") has wrong shape"));
  for (std::size_t s = 0; s < r.u.size(); ++s)
    if (r.u[s].rows() != r.dim() || r.u[s].cols() != r.dim()) return fail(cat("U_", s, " has wrong shape"));
  return {};
}

Certificate check_pi_homomorphism(const CovariantRep& r, const DynamicalSystem& ds) {
  const std::size_t n = ds.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vec prod = ds.algebra.multiply(unit_vector(n, i), unit_vector(n, j));
      if (!close(r.pi_of(prod), r.pi[i] * r.pi[j])) return fail(cat("pi(e", i, " e", j, ") != pi(e", i, ") pi(e", j, ")"));
    }
  return {};
}

Certificate check_u_homomorphism(const CovariantRep& r, const DynamicalSystem& ds) {
  const auto& g = ds.group;
  if (!close(r.u[g.identity()], Matrix::identity(r.dim()))) return fail("U_e is not the identity");
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t)
      if (!close(r.u[s] * r.u[t], r.u[g.mul(s, t)])) return fail(cat("U_", s, " U_", t, " != U_", g.mul(s, t)));
  return {};
}

Certificate check_covariant(const CovariantRep& r, const DynamicalSystem& ds) {
  if (auto c = check_shapes(r, ds); !c) return c;
  for (std::size_t s = 0; s < ds.order(); ++s) {
    const auto inv = inverse(r.u[s]);
    if (!inv) return fail(cat("U_", s, " is not invertible"));
    for (std::size_t k = 0; k < ds.dim(); ++k) {
      const Vec moved = ds.alpha[s] * unit_vector(ds.dim(), k);
      if (!close(r.pi_of(moved), r.u[s] * r.pi[k] * *inv))
        return fail(cat("pi(alpha_", s, "(e", k, ")) != U_", s, " pi(e", k, ") U_", s, "^-1 at (s, a) = (", s, ", e", k, ")"));
    }
  }
  return {};
}

Certificate check_positive(const CovariantRep& r, const DynamicalSystem& ds) {
  Certificate out;
  const OrderedSpace& x = r.space;
  auto positive = [&](const Matrix& m) {
    const auto p = operator_positive(m, x, x);
    if (p.method != Method::exact) out.method = p.method;
    return p.positive;
  };
  if (ds.algebra.cone().is_lorentz()) {
    out.method = Method::sampled;
    std::mt19937_64 rng(31);
    for (int s = 0; s < 200; ++s) {
      const Vec a = random_member(ds.algebra.cone(), rng);
      if (!positive(r.pi_of(a))) return fail("pi of a sampled positive element is not positive", Method::sampled);
    }
  } else {
    const auto& gens = ds.algebra.cone().generators();
    for (std::size_t j = 0; j < gens.size(); ++j)
      if (!positive(r.pi_of(gens[j]))) return fail(cat("pi of cone generator ", j, " is not positive"), out.method);
  }
  for (std::size_t s = 0; s < ds.order(); ++s)
    if (!positive(r.u[s])) return fail(cat("U_", s, " is not positive"), out.method);
  return out;
}

Certificate check_nondegenerate(const CovariantRep& r) {
  if (r.dim() == 0) return {};
  if (r.pi.empty()) return fail("pi has no basis images");
  const std::size_t rk = rank(hstack(r.pi));
  if (rk < r.dim()) return fail(cat("ranges of pi span dimension ", rk, " < ", r.dim()));
  return {};
}

Certificate certify(const CovariantRep& r, const DynamicalSystem& ds) {
  for (auto check : {check_shapes, check_pi_homomorphism, check_u_homomorphism, check_covariant, check_positive})
    if (auto c = check(r, ds); !c) return c;
  return check_nondegenerate(r);
}

Matrix integrated_form(const CovariantRep& r, const CcFunction& f) {
  if (f.dim != r.pi.size() || f.order != r.u.size()) throw DimensionError("function does not match representation");
  Matrix out(r.dim(), r.dim());
  for (std::size_t s = 0; s < f.order; ++s) {
    if (max_abs(f.at(s)) == 0.0) continue;
    out += r.pi_of(f.at(s)) * r.u[s];
  }
  return out;
}

Matrix integrated_form_matrix(const CovariantRep& r, const DynamicalSystem& ds) {
  const std::size_t n = r.dim();
  Matrix m(n * n, ds.order() * ds.dim());
  for (std::size_t s = 0; s < ds.order(); ++s)
    for (std::size_t k = 0; k < ds.dim(); ++k) {
      const Matrix block = r.pi[k] * r.u[s];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i * n + j, s * ds.dim() + k) = block(i, j);
    }
  return m;
}

Tagged pi_norm(const CovariantRep& r, const DynamicalSystem& ds) {
  const NormedSpace& a = ds.algebra.space();
  if (auto verts = unit_ball_vertices(a, 4096); verts && is_polyhedral(a.norm)) {
    double best = 0.0;
    for (const auto& v : *verts) best = std::max(best, op_norm(r.pi_of(v), r.space.space, r.space.space));
    return {best, Method::exact, "operator norms at unit-ball vertices"};
  }
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss;
  double best = 0.0;
  for (std::size_t s = 0; s < 400 + ds.dim(); ++s) {
    Vec v = s < ds.dim() ? unit_vector(ds.dim(), s) : Vec(ds.dim());
    if (s >= ds.dim())
      for (auto& x : v) x = gauss(rng);
    v = scaled(v, 1.0 / vec_norm(v, a));
    best = std::max(best, op_norm(r.pi_of(v), r.space.space, r.space.space));
  }
  return {best, Method::lower_bound, "operator norms on sampled unit vectors"};
}

Vec nu(const CovariantRep& r) {
  Vec out;
  for (const auto& u : r.u) out.push_back(op_norm(u, r.space.space, r.space.space));
  return out;
}

RepClass::RepClass(const DynamicalSystem& ds, std::vector<CovariantRep> reps) : reps_(std::move(reps)) {
  if (reps_.empty()) throw std::invalid_argument("representation class must be nonempty");
  nu_.assign(ds.order(), 0.0);
  for (const auto& r : reps_) {
    if (auto c = check_shapes(r, ds); !c) throw ValidationError("representation does not fit the system", {c.witness});
    c_ = std::max(c_, pi_norm(r, ds).value);
    const Vec n = owb::nu(r);
    for (std::size_t s = 0; s < n.size(); ++s) nu_[s] = std::max(nu_[s], n[s]);
  }
}

double sigma_r(const RepClass& r, const CcFunction& f) {
  double best = 0.0;
  for (const auto& rep : r.reps()) best = std::max(best, op_norm(integrated_form(rep, f), rep.space.space, rep.space.space));
  return best;
}

CovariantRep direct_sum(const RepClass& s, SumExponent p) {
  std::vector<NormedSpace> spaces;
  std::vector<Cone> cones;
  std::size_t total = 0;
  for (const auto& r : s.reps()) {
    spaces.push_back(r.space.space);
    cones.push_back(r.space.cone);
    total += r.dim();
  }
  const std::size_t na = s[0].pi.size(), ng = s[0].u.size();
  std::vector<Matrix> pi, u;
  for (std::size_t k = 0; k < na; ++k) {
    std::vector<Matrix> blocks;
    for (const auto& r : s.reps()) blocks.push_back(r.pi[k]);
    pi.push_back(block_diagonal(blocks));
  }
  for (std::size_t g = 0; g < ng; ++g) {
    std::vector<Matrix> blocks;
    for (const auto& r : s.reps()) blocks.push_back(r.u[g]);
    u.push_back(block_diagonal(blocks));
  }
  const char* tag = p == SumExponent::one ? "l1" : p == SumExponent::two ? "l2" : "linf";
  return make_rep(OrderedSpace({total, NormKind::block_sum(p, std::move(spaces))}, product_cone(cones)), std::move(pi),
                  std::move(u), cat(tag, " direct sum of ", s.size()));
}

namespace reps {

CovariantRep left_regular(const DynamicalSystem& ds) {
  std::vector<Matrix> pi;
  for (std::size_t k = 0; k < ds.dim(); ++k) pi.push_back(ds.algebra.left_multiplication(unit_vector(ds.dim(), k)));
  return make_rep(ds.algebra.carrier(), std::move(pi), ds.alpha, "left regular");
}

CovariantRep induced(const DynamicalSystem& ds, const OrderedSpace& base, const std::vector<Matrix>& base_pi,
                     const Vec& weights) {
  const std::size_t ng = ds.order(), nb = base.dim(), na = ds.dim();
  Vec w = weights.empty() ? Vec(ng, 1.0) : weights;
  if (w.size() != ng) throw DimensionError("one weight per group element is required");
  if (base_pi.size() != na) throw DimensionError("base representation has wrong number of basis images");
  std::vector<NormedSpace> blocks(ng, base.space);
  std::vector<Cone> cones(ng, base.cone);
  const NormedSpace space{ng * nb, NormKind::block_sum(SumExponent::one, blocks, w)};
  std::vector<Matrix> pi;
  for (std::size_t k = 0; k < na; ++k) {
    Matrix m(ng * nb, ng * nb);
    for (std::size_t s = 0; s < ng; ++s) {
      const Vec moved = ds.alpha[ds.group.inverse(s)] * unit_vector(na, k);
      const Matrix b = combine(base_pi, moved, nb, nb);
      for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = 0; j < nb; ++j) m(s * nb + i, s * nb + j) = b(i, j);
    }
    pi.push_back(std::move(m));
  }
  std::vector<Matrix> u;
  for (std::size_t r = 0; r < ng; ++r) {
    Matrix m(ng * nb, ng * nb);
    for (std::size_t s = 0; s < ng; ++s) {
      const std::size_t from = ds.group.mul(ds.group.inverse(r), s);
      for (std::size_t i = 0; i < nb; ++i) m(s * nb + i, from * nb + i) = 1.0;
    }
    u.push_back(std::move(m));
  }
  return make_rep(OrderedSpace(space, product_cone(cones)), std::move(pi), std::move(u), "induced");
}

CovariantRep induced_regular(const DynamicalSystem& ds, const Vec& weights) {
  const CovariantRep lr = left_regular(ds);
  CovariantRep r = induced(ds, lr.space, lr.pi, weights);
  r.label = "induced regular";
  return r;
}

CovariantRep conjugate_diagonal(const CovariantRep& r, const Vec& diagonal) {
  if (diagonal.size() != r.dim()) throw DimensionError("diagonal has wrong length");
  Matrix d(r.dim(), r.dim()), di(r.dim(), r.dim());
  for (std::size_t i = 0; i < r.dim(); ++i) {
    if (diagonal[i] <= 0.0) throw std::invalid_argument("diagonal entries must be positive");
    d(i, i) = diagonal[i];
    di(i, i) = 1.0 / diagonal[i];
  }
  CovariantRep out = r;
  for (auto& m : out.pi) m = d * m * di;
  for (auto& m : out.u) m = d * m * di;
  out.label = r.label + " (diagonal conjugate)";
  return out;
}

}  // namespace reps

}  // namespace owb
