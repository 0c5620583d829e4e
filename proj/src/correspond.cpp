#include "owb/correspond.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "owb/lp.hpp"
#include "owb/normlp.hpp"

namespace owb {

namespace {

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

Certificate fail(std::string w, Method m = Method::exact) { return {false, m, std::move(w)}; }

bool close(const Matrix& a, const Matrix& b) {
  return max_abs_diff(a, b) <= kTol * std::max({1.0, max_abs(a), max_abs(b)});
}

Matrix combine(const std::vector<Matrix>& images, std::span<const double> d, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) m += d[i] * images[i];
  return m;
}

Matrix left_regular(const CrossedProduct& cp, std::span<const double> d) {
  return combine(cp.product_table(), d, cp.dim());
}

Vec flatten(const Matrix& m) { return Vec(m.data().begin(), m.data().end()); }

}  // namespace

Matrix AlgebraRep::of(std::span<const double> d) const {
  if (d.size() != images.size()) throw DimensionError("quotient element has wrong dimension for this representation");
  return combine(images, d, dim());
}

PreconditionError::PreconditionError(std::string certificate, const std::string& detail)
    : std::invalid_argument(certificate + ": " + detail), certificate_(std::move(certificate)) {}

// ------------------------------------------------------------ map norms

Tagged linear_map_norm(const std::vector<Matrix>& images, const NormedSpace& domain, const NormedSpace& target,
                       NormRoute route) {
  if (images.size() != domain.dim) throw DimensionError("one image per domain coordinate is required");
  const std::size_t n = target.dim;
  if (route != NormRoute::programs) {
    if (auto verts = unit_ball_vertices(domain, 1u << 14); verts && is_polyhedral(domain.norm)) {
      double best = 0.0;
      for (const auto& v : *verts) best = std::max(best, op_norm(combine(images, v, n), target, target));
      return {best, Method::exact, "operator norms at domain unit-ball vertices"};
    }
    if (route == NormRoute::vertices) throw UnsupportedNorm("domain unit ball has no vertex list");
  }
  auto dom = polyhedral_model(domain);
  auto tgt = polyhedral_model(target);
  auto tverts = unit_ball_vertices(target, 1u << 12);
  std::optional<std::vector<Vec>> funcs;
  if (tgt) funcs = dual_functionals(*tgt, 1u << 12);
  if (dom && tgt && tverts && funcs) {
    LpBuilder lp;
    const std::size_t first = lp.add_free(domain.dim);
    const AffineExpr d = AffineExpr::variables(first, domain.dim);
    add_norm_bound(lp, *dom, d, 1.0);
    const LpProblem base = lp.build();
    double best = 0.0;
    for (const auto& v : *tverts) {
      Matrix cols(n, domain.dim);
      for (std::size_t i = 0; i < domain.dim; ++i) {
        const Vec c = images[i] * v;
        for (std::size_t r = 0; r < n; ++r) cols(r, i) = c[r];
      }
      auto val = maximize_functionals(base, apply(cols, d), *funcs);
      if (!val) throw std::runtime_error("map norm program is infeasible");
      best = std::max(best, *val);
    }
    return {best, Method::exact, "linear programs per target vertex and dual functional"};
  }
  if (route == NormRoute::programs) throw UnsupportedNorm("map norm programs need polyhedral norms");
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss;
  double best = 0.0;
  for (std::size_t s = 0; s < 500 + domain.dim; ++s) {
    Vec v = s < domain.dim ? unit_vector(domain.dim, s) : Vec(domain.dim);
    if (s >= domain.dim)
      for (auto& x : v) x = gauss(rng);
    v = scaled(v, 1.0 / vec_norm(v, domain));
    best = std::max(best, op_norm(combine(images, v, n), target, target));
  }
  return {best, Method::lower_bound, "operator norms on sampled unit vectors"};
}

// ------------------------------------------------------------ continuity

namespace {

std::optional<Vec> kernel_escape(const CrossedProduct& cp, const CovariantRep& r) {
  const auto& ds = cp.system();
  for (const auto& k : cp.kernel())
    if (max_abs(integrated_form(r, CcFunction(ds.order(), ds.dim(), k))) > kTol * std::max(1.0, max_abs(k))) return k;
  return std::nullopt;
}

}  // namespace

Continuity r_continuity(const CrossedProduct& cp, const CovariantRep& r) {
  const auto& ds = cp.system();
  if (auto c = check_covariant(r, ds); !c) throw PreconditionError("covariance", c.witness);
  Continuity out;
  out.witness = kernel_escape(cp, r);
  if (out.witness) return out;
  out.continuous = true;
  std::vector<Matrix> imgs;
  for (std::size_t idx : cp.basis()) imgs.push_back(r.pi[idx % ds.dim()] * r.u[idx / ds.dim()]);
  out.constant = linear_map_norm(imgs, cp.space(), r.space.space);
  return out;
}

// --------------------------------------------------------- certificates

Certificate check_multiplicative(const CrossedProduct& cp, const AlgebraRep& t) {
  const std::size_t n = cp.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vec prod = cp.multiply(unit_vector(n, i), unit_vector(n, j));
      if (!close(t.of(prod), t.images[i] * t.images[j])) return fail(cat("T(b", i, " b", j, ") != T(b", i, ") T(b", j, ")"));
    }
  return {};
}

Certificate check_positive(const CrossedProduct& cp, const AlgebraRep& t) {
  Certificate out;
  for (std::size_t g = 0; g < cp.cone().generators().size(); ++g) {
    const auto p = operator_positive(t.of(cp.cone().generators()[g]), t.space, t.space);
    if (p.method != Method::exact) out.method = p.method;
    if (!p.positive) return fail(cat("T of quotient cone generator ", g, " is not positive"), out.method);
  }
  return out;
}

Certificate check_nondegenerate(const AlgebraRep& t) {
  const std::size_t rk = t.images.empty() ? 0 : rank(hstack(t.images));
  if (rk < t.dim()) return fail(cat("ranges of T span dimension ", rk, " < ", t.dim()));
  return {};
}

// ---------------------------------------------------------- the two maps

AlgebraRep forward(const CrossedProduct& cp, const CovariantRep& r) {
  const auto& ds = cp.system();
  if (auto c = certify(r, ds); !c) throw PreconditionError("covariant representation", c.witness);
  if (kernel_escape(cp, r)) throw PreconditionError("R-continuity", "a kernel element has nonzero image");
  AlgebraRep t{r.space, {}};
  for (std::size_t idx : cp.basis()) t.images.push_back(r.pi[idx % ds.dim()] * r.u[idx / ds.dim()]);
  return t;
}

CovariantRep backward(const CrossedProduct& cp, const AlgebraRep& t) {
  const auto& ds = cp.system();
  const auto& u = ds.algebra.left_identity();
  if (!u) throw PreconditionError("left identity", "the algebra has no left identity");
  if (!cone_contains(ds.algebra.cone(), *u)) throw PreconditionError("left identity", "the left identity is not positive");
  if (t.images.size() != cp.dim()) throw DimensionError("representation does not match the crossed product");
  if (auto c = check_multiplicative(cp, t); !c) throw PreconditionError("multiplicativity", c.witness);
  if (auto c = check_positive(cp, t); !c) throw PreconditionError("positivity", c.witness);
  if (auto c = check_nondegenerate(t); !c) throw PreconditionError("non-degeneracy", c.witness);
  std::vector<Matrix> pi, us;
  const std::size_t e = ds.group.identity();
  for (std::size_t k = 0; k < ds.dim(); ++k) {
    const Vec au = ds.algebra.multiply(unit_vector(ds.dim(), k), *u);
    pi.push_back(t.of(cp.q(CcFunction::delta(ds, e, au))));
  }
  for (std::size_t s = 0; s < ds.order(); ++s) us.push_back(t.of(cp.q(CcFunction::delta(ds, s, ds.alpha[s] * *u))));
  CovariantRep r = make_rep(t.space, std::move(pi), std::move(us), "recovered");
  if (auto c = certify(r, ds); !c) throw std::logic_error("recovered pair fails its certificates: " + c.witness);
  return r;
}

double deviation(const CovariantRep& a, const CovariantRep& b) {
  if (a.pi.size() != b.pi.size() || a.u.size() != b.u.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t k = 0; k < a.pi.size(); ++k) d = std::max(d, max_abs_diff(a.pi[k], b.pi[k]));
  for (std::size_t s = 0; s < a.u.size(); ++s) d = std::max(d, max_abs_diff(a.u[s], b.u[s]));
  return d;
}

double deviation(const AlgebraRep& a, const AlgebraRep& b) {
  if (a.images.size() != b.images.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.images.size(); ++i) d = std::max(d, max_abs_diff(a.images[i], b.images[i]));
  return d;
}

double roundtrip(const CrossedProduct& cp, const CovariantRep& r) { return deviation(backward(cp, forward(cp, r)), r); }

double roundtrip(const CrossedProduct& cp, const AlgebraRep& t) { return deviation(forward(cp, backward(cp, t)), t); }

AlgebraRep random_algebra_rep(const CrossedProduct& cp, std::mt19937_64& rng) {
  const auto& cls = cp.reps();
  std::uniform_real_distribution<double> unit(0.25, 4.0);
  const CovariantRep& base = cls[rng() % cls.size()];
  CovariantRep r = base;
  if (base.space.cone.is_standard()) {
    Vec d(base.dim());
    for (auto& x : d) x = unit(rng);
    r = reps::conjugate_diagonal(base, d);
  }
  return forward(cp, r);
}

// ------------------------------------------------------ canonical triple

TripleReport verify_canonical_triple(const CrossedProduct& cp) {
  TripleReport rep;
  const auto& ds = cp.system();
  const std::size_t n = cp.dim();

  std::vector<Matrix> ia, ig;
  for (std::size_t k = 0; k < ds.dim(); ++k) ia.push_back(i_a(cp, unit_vector(ds.dim(), k)));
  for (std::size_t s = 0; s < ds.order(); ++s) ig.push_back(i_g(cp, s));

  auto centralizer = [&](const Matrix& l) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Vec bi = unit_vector(n, i), bj = unit_vector(n, j);
        if (max_abs_diff(l * cp.multiply(bi, bj), cp.multiply(l * bi, bj)) > kTol * std::max(1.0, max_abs(l)))
          return false;
      }
    return true;
  };
  for (std::size_t k = 0; k < ia.size() && rep.centralizers.ok; ++k)
    if (!centralizer(ia[k])) rep.centralizers = fail(cat("i_A(e", k, ") is not a left centralizer"));
  for (std::size_t s = 0; s < ig.size() && rep.centralizers.ok; ++s)
    if (!centralizer(ig[s])) rep.centralizers = fail(cat("i_G(", s, ") is not a left centralizer"));

  std::vector<Vec> image_span, regular_span;
  for (std::size_t s = 0; s < ds.order(); ++s)
    for (std::size_t k = 0; k < ds.dim(); ++k) {
      const Matrix lhs = ia[k] * ig[s];
      const Matrix rhs = left_regular(cp, cp.q(CcFunction::delta(ds, s, unit_vector(ds.dim(), k))));
      if (rep.regular_image.ok && !close(lhs, rhs))
        rep.regular_image = fail(cat("i_A(e", k, ") i_G(", s, ") differs from left multiplication by q(delta_", s, " e", k, ")"));
      image_span.push_back(flatten(lhs));
    }
  for (const auto& m : cp.product_table()) regular_span.push_back(flatten(m));
  {
    const std::size_t ri = rank(Matrix::from_rows(image_span, n * n));
    const std::size_t rr = rank(Matrix::from_rows(regular_span, n * n));
    std::vector<Vec> both = image_span;
    both.insert(both.end(), regular_span.begin(), regular_span.end());
    const std::size_t rb = rank(Matrix::from_rows(both, n * n));
    if (ri != rr || rb != rr) rep.dense_image = fail(cat("span ranks differ: image ", ri, ", regular ", rr, ", joint ", rb));
  }

  // Image cone inside the positive operators.
  const auto& gens = cp.cone().generators();
  for (std::size_t g = 0; g < gens.size() && rep.cone_image.ok; ++g)
    if (!operator_positive(left_regular(cp, gens[g]), cp.ordered_space(), cp.ordered_space()).positive)
      rep.cone_image = fail(cat("left multiplication by quotient cone generator ", g, " is not positive"));

  // Positive left multiplications come from the cone.
  const bool right_unit = cp.identity() && cp.identity_is_right() && cone_contains(cp.cone(), *cp.identity());
  if (rep.cone_image.ok && right_unit) {
    rep.notes.push_back("positive right identity e: lambda(d) >= 0 gives d = lambda(d) e >= 0");
  } else if (rep.cone_image.ok) {
    if (n <= 6) {
      const HRep& h = cp.cone().facets();
      std::vector<Vec> rows;
      for (const auto& g : gens) {
        Matrix lg(n, n);  // column i = L_i g
        for (std::size_t i = 0; i < n; ++i) {
          const Vec c = cp.product_table()[i] * g;
          for (std::size_t r = 0; r < n; ++r) lg(r, i) = c[r];
        }
        const Matrix lgt = lg.transpose();
        for (const auto& a : h.inequalities) rows.push_back(lgt * a);
        for (const auto& e : h.equalities) {
          rows.push_back(lgt * e);
          rows.push_back(scaled(lgt * e, -1.0));
        }
      }
      const RayDescription pos = rows.empty() ? RayDescription{{}, [&] {
        std::vector<Vec> all;
        for (std::size_t i = 0; i < n; ++i) all.push_back(unit_vector(n, i));
        return all;
      }()} : double_description(Matrix::from_rows(rows, n));
      for (const auto& r : pos.rays)
        if (rep.cone_image.ok && !cone_contains(cp.cone(), r, 1e-7))
          rep.cone_image = fail("a positive left multiplication does not come from a positive element");
      for (const auto& l : pos.lineality)
        if (rep.cone_image.ok && (!cone_contains(cp.cone(), l, 1e-7) || !cone_contains(cp.cone(), scaled(l, -1.0), 1e-7)))
          rep.cone_image = fail("a line of positive left multiplications leaves the cone");
    } else {
      rep.cone_image.method = Method::sampled;
      std::mt19937_64 rng(91);
      std::normal_distribution<double> gauss;
      for (int s = 0; s < 500 && rep.cone_image.ok; ++s) {
        Vec d(n);
        for (auto& x : d) x = gauss(rng);
        if (operator_positive(left_regular(cp, d), cp.ordered_space(), cp.ordered_space()).positive &&
            !cone_contains(cp.cone(), d))
          rep.cone_image = fail("a positive left multiplication does not come from a positive element", Method::sampled);
      }
      rep.notes.push_back("quotient dimension above 6: reverse cone inclusion sampled");
    }
  }

  // Bipositive: injective and the cone equality above holds exactly.
  if (rank(Matrix::from_rows(regular_span, n * n)) < n) {
    rep.bipositive_lambda = fail("left regular representation is not injective");
  } else if (!rep.cone_image.ok) {
    rep.bipositive_lambda = fail("left regular representation is not bipositive");
  } else if (!right_unit && rep.cone_image.method != Method::exact) {
    rep.bipositive_lambda = fail("not certified: no positive right identity", rep.cone_image.method);
  }
  return rep;
}

Certificate check_composition_law(const CrossedProduct& cp, const AlgebraRep& t, std::size_t samples,
                                  std::uint64_t seed) {
  const CovariantRep r = backward(cp, t);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const CcFunction f = random_function(cp.system(), rng);
    if (!close(integrated_form(r, f), t.of(cp.q(f)))) return fail(cat("sample ", s, " breaks the composition law"), Method::sampled);
  }
  return {true, Method::sampled, ""};
}

}  // namespace owb
