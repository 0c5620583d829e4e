#include "owb/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "owb/lp.hpp"
#include "owb/normlp.hpp"

namespace owb {

std::string to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::lower_bound: return "lower-bound";
    case Method::upper_bound: return "upper-bound";
    case Method::sampled: return "sampled";
  }
  return "?";
}

std::string to_string(NormalityMode m) {
  switch (m) {
    case NormalityMode::normal: return "normal";
    case NormalityMode::absolute: return "absolute";
    case NormalityMode::abs_conormal: return "abs-conormal";
    case NormalityMode::sum_conormal: return "sum-conormal";
  }
  return "?";
}

// ------------------------------------------------------ double description

namespace {

void normalise_ray(Vec& r) {
  const double m = max_abs(r);
  if (m > 0.0)
    for (double& v : r) v /= m;
}

bool near_zero(double value, const Vec& a, const Vec& r) {
  return std::abs(value) <= 1e-9 * std::max(1.0, max_abs(a) * max_abs(r) * static_cast<double>(a.size()));
}

}  // namespace

RayDescription double_description(const Matrix& constraints) {
  const std::size_t d = constraints.cols();
  RayDescription out;
  for (std::size_t i = 0; i < d; ++i) out.lineality.push_back(unit_vector(d, i));
  std::vector<Vec> processed;

  for (std::size_t c = 0; c < constraints.rows(); ++c) {
    const Vec a(constraints.row(c).begin(), constraints.row(c).end());
    if (max_abs(a) == 0.0) continue;

    // A lineality direction not orthogonal to a becomes a ray.
    std::size_t pick = out.lineality.size();
    double best = 0.0;
    for (std::size_t k = 0; k < out.lineality.size(); ++k) {
      const double v = std::abs(dot(a, out.lineality[k]));
      if (v > best && !near_zero(v, a, out.lineality[k])) {
        best = v;
        pick = k;
      }
    }
    if (pick < out.lineality.size()) {
      Vec l = out.lineality[pick];
      if (dot(a, l) < 0.0) l = scaled(l, -1.0);
      const double al = dot(a, l);
      out.lineality.erase(out.lineality.begin() + static_cast<std::ptrdiff_t>(pick));
      for (auto& other : out.lineality) axpy(-dot(a, other) / al, l, other);
      for (auto& r : out.rays) {
        axpy(-dot(a, r) / al, l, r);
        normalise_ray(r);
      }
      normalise_ray(l);
      out.rays.push_back(std::move(l));
      processed.push_back(a);
      continue;
    }

    std::vector<Vec> plus, zero, minus;
    for (auto& r : out.rays) {
      const double v = dot(a, r);
      if (near_zero(v, a, r)) zero.push_back(r);
      else if (v > 0.0) plus.push_back(r);
      else minus.push_back(r);
    }
    const long target = static_cast<long>(d) - static_cast<long>(out.lineality.size()) - 2;
    std::vector<Vec> next = plus;
    next.insert(next.end(), zero.begin(), zero.end());
    for (const auto& p : plus)
      for (const auto& n : minus) {
        std::vector<Vec> tight;
        for (const auto& h : processed)
          if (near_zero(dot(h, p), h, p) && near_zero(dot(h, n), h, n)) tight.push_back(h);
        if (static_cast<long>(tight.size()) < target) continue;
        const long rk = tight.empty() ? 0 : static_cast<long>(rank(Matrix::from_rows(tight, d), 1e-9));
        if (rk != target) continue;
        Vec w = scaled(n, dot(a, p));
        axpy(-dot(a, n), p, w);
        normalise_ray(w);
        next.push_back(std::move(w));
      }
    out.rays = std::move(next);
    processed.push_back(a);
  }

  // Drop duplicates left by numerically coincident combinations.
  std::vector<Vec> unique;
  for (auto& r : out.rays) {
    if (max_abs(r) == 0.0) continue;
    bool seen = false;
    for (const auto& u : unique)
      if (max_abs_diff(u, r) <= 1e-9) seen = true;
    if (!seen) unique.push_back(r);
  }
  out.rays = std::move(unique);
  return out;
}

// ------------------------------------------------------------------ cones

struct Cone::FacetCache {
  std::once_flag once;
  HRep rep;
};

Cone Cone::polyhedral(std::vector<Vec> generators, std::size_t dim) {
  if (dim == 0) throw DimensionError("cone ambient dimension must be positive");
  for (const auto& g : generators) {
    if (g.size() != dim) throw DimensionError("generator length differs from ambient dimension");
    if (max_abs(g) == 0.0) throw std::invalid_argument("cone generators must be nonzero");
  }
  Cone c;
  c.dim_ = dim;
  c.generators_ = std::move(generators);
  c.cache_ = std::make_shared<FacetCache>();
  std::vector<bool> covered(dim, false);
  bool standard = true;
  for (const auto& g : c.generators_) {
    std::size_t nz = 0, at = 0;
    for (std::size_t i = 0; i < dim; ++i)
      if (g[i] != 0.0) {
        ++nz;
        at = i;
      }
    if (nz != 1 || g[at] < 0.0) {
      standard = false;
      break;
    }
    covered[at] = true;
  }
  c.standard_ = standard && std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  return c;
}

Cone Cone::standard(std::size_t dim) {
  std::vector<Vec> g;
  for (std::size_t i = 0; i < dim; ++i) g.push_back(unit_vector(dim, i));
  return polyhedral(std::move(g), dim);
}

Cone Cone::lorentz(Vec axis) {
  if (axis.empty()) throw DimensionError("Lorentz axis must be nonempty");
  if (std::abs(std::sqrt(dot(axis, axis)) - 1.0) > 1e-9)
    throw std::invalid_argument("Lorentz axis must have unit two-norm");
  Cone c;
  c.dim_ = axis.size();
  c.lorentz_ = true;
  c.axis_ = std::move(axis);
  return c;
}

const std::vector<Vec>& Cone::generators() const {
  if (lorentz_) throw std::logic_error("Lorentz cones have no finite generator list");
  return generators_;
}

const Vec& Cone::axis() const {
  if (!lorentz_) throw std::logic_error("polyhedral cone has no axis");
  return axis_;
}

Matrix Cone::generator_matrix() const { return Matrix::from_columns(generators(), dim_); }

const HRep& Cone::facets() const {
  if (lorentz_) throw std::logic_error("Lorentz cones have no facet description");
  std::call_once(cache_->once, [this] {
    const RayDescription dual = double_description(Matrix::from_rows(generators_, dim_));
    cache_->rep.inequalities = dual.rays;
    cache_->rep.equalities = dual.lineality;
  });
  return cache_->rep;
}

OrderedSpace::OrderedSpace(NormedSpace s, Cone c) : space(std::move(s)), cone(std::move(c)) {
  if (space.dim != cone.dim()) throw DimensionError("cone and normed space dimensions differ");
}

bool facets_contain(const HRep& h, std::span<const double> x, double tol) {
  const double scale = std::max(1.0, max_abs(x));
  for (const auto& a : h.inequalities)
    if (dot(a, x) < -tol * scale * std::max(1.0, max_abs(a))) return false;
  for (const auto& e : h.equalities)
    if (std::abs(dot(e, x)) > tol * scale * std::max(1.0, max_abs(e))) return false;
  return true;
}

bool cone_contains(const Cone& c, std::span<const double> x, double tol) {
  if (x.size() != c.dim()) throw DimensionError("membership query has wrong dimension");
  const double scale = std::max(1.0, max_abs(x));
  if (c.is_lorentz()) {
    const Vec& v = c.axis();
    const double t = dot(v, x);
    Vec perp(x.begin(), x.end());
    axpy(-t, v, perp);
    return t >= std::sqrt(dot(perp, perp)) - tol * scale;
  }
  if (c.is_standard())
    return std::all_of(x.begin(), x.end(), [&](double v) { return v >= -tol * scale; });
  const auto& gens = c.generators();
  if (gens.empty()) return max_abs(x) <= tol * scale;
  LpProblem p;
  p.objective.assign(gens.size(), 0.0);
  p.nonneg.assign(gens.size(), true);
  p.equalities = c.generator_matrix();
  p.rhs.assign(x.begin(), x.end());
  return lp_minimize(p).optimal();
}

std::size_t lineality_dim(const Cone& c) {
  if (c.is_lorentz()) return 0;
  std::vector<Vec> two_sided;
  for (const auto& g : c.generators())
    if (cone_contains(c, scaled(g, -1.0))) two_sided.push_back(g);
  if (two_sided.empty()) return 0;
  return rank(Matrix::from_rows(two_sided, c.dim()));
}

bool is_banach_lattice(const OrderedSpace& os) {
  return os.cone.is_standard() && os.space.norm.family() != NormKind::Family::operator_max;
}

bool is_proper(const Cone& c) { return lineality_dim(c) == 0; }

bool is_generating(const Cone& c) {
  if (c.is_lorentz()) return true;
  if (c.generators().empty()) return false;
  return rank(c.generator_matrix()) == c.dim();
}

Cone image_cone(const Cone& c, const Matrix& q) {
  if (c.is_lorentz()) throw std::invalid_argument("image cones are computed for polyhedral cones only");
  if (q.cols() != c.dim()) throw DimensionError("projection does not match cone dimension");
  std::vector<Vec> gens;
  for (const auto& g : c.generators()) {
    Vec img = q * g;
    if (max_abs(img) > 1e-12 * std::max(1.0, max_abs(g))) gens.push_back(std::move(img));
  }
  return Cone::polyhedral(std::move(gens), q.rows());
}

Cone product_cone(std::span<const Cone> factors) {
  std::size_t total = 0;
  for (const auto& f : factors) {
    if (f.is_lorentz()) throw std::invalid_argument("product cones need polyhedral factors");
    total += f.dim();
  }
  std::vector<Vec> gens;
  std::size_t off = 0;
  for (const auto& f : factors) {
    for (const auto& g : f.generators()) {
      Vec e(total, 0.0);
      std::copy(g.begin(), g.end(), e.begin() + static_cast<std::ptrdiff_t>(off));
      gens.push_back(std::move(e));
    }
    off += f.dim();
  }
  return Cone::polyhedral(std::move(gens), total);
}

Vec random_member(const Cone& c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (c.is_lorentz()) {
    std::normal_distribution<double> gauss;
    const Vec& v = c.axis();
    Vec w(c.dim());
    for (double& x : w) x = gauss(rng);
    axpy(-dot(v, w), v, w);
    const double nw = std::sqrt(dot(w, w));
    const double t = 0.1 + unit(rng);
    const double radius = unit(rng) < 0.25 ? t : t * unit(rng);
    Vec x = scaled(v, t);
    if (nw > 0.0) axpy(radius / nw, w, x);
    return x;
  }
  Vec x(c.dim(), 0.0);
  const auto& gens = c.generators();
  if (gens.empty()) return x;
  bool any = false;
  for (const auto& g : gens) {
    if (unit(rng) < 0.35) continue;
    axpy(unit(rng), g, x);
    any = true;
  }
  if (!any) axpy(0.5 + unit(rng), gens[rng() % gens.size()], x);
  return x;
}

// ------------------------------------------------------------- decomposition

namespace {

AffineExpr generator_image(const Matrix& g, std::size_t first) {
  return apply(g, AffineExpr::variables(first, g.cols()));
}

void add_equal(LpBuilder& lp, const AffineExpr& e, std::span<const double> target) {
  for (std::size_t i = 0; i < e.dim(); ++i) lp.add_equality(e.coords[i], target[i] - e.offset[i]);
}

}  // namespace

Decomposition ando_decompose(std::span<const double> x, const OrderedSpace& os) {
  if (x.size() != os.dim()) throw DimensionError("decomposition input has wrong dimension");
  if (os.cone.is_lorentz()) throw std::invalid_argument("decomposition needs a polyhedral cone");
  if (!is_generating(os.cone)) throw std::invalid_argument("decomposition needs a generating cone");
  Decomposition d;
  if (max_abs(x) == 0.0) {
    d.positive.assign(x.size(), 0.0);
    d.negative.assign(x.size(), 0.0);
    return d;
  }
  const Matrix g = os.cone.generator_matrix();
  const std::size_t k = g.cols();
  LpBuilder lp;
  const std::size_t lam = lp.add_nonneg(k);
  const std::size_t mu = lp.add_nonneg(k);
  const AffineExpr plus = generator_image(g, lam);
  const AffineExpr minus = generator_image(g, mu);
  add_equal(lp, plus - minus, x);

  Vec sol;
  if (auto model = polyhedral_model(os.space)) {
    auto obj = norm_epigraph(lp, *model, plus);
    auto more = norm_epigraph(lp, *model, minus);
    obj.insert(obj.end(), more.begin(), more.end());
    for (const auto& [var, coef] : obj) lp.set_cost(var, coef);
    const LpResult r = lp_minimize(lp.build());
    if (!r.optimal()) throw std::runtime_error("decomposition linear program failed");
    sol = r.x;
  } else if (os.space.norm.family() == NormKind::Family::two) {
    const TwoNormSum r = minimize_two_norm_sum(lp, {plus, minus});
    if (r.solution.empty()) throw std::runtime_error("decomposition cutting-plane solve failed");
    sol = r.solution;
    if (!r.converged) d.method = Method::upper_bound;
  } else {
    throw UnsupportedNorm("decomposition supports polyhedral norms and the two-norm");
  }
  d.positive = evaluate(plus, sol);
  d.negative = evaluate(minus, sol);
  d.value = vec_norm(d.positive, os.space) + vec_norm(d.negative, os.space);
  return d;
}

// ---------------------------------------------------------------- normality

namespace {

Vec random_direction(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec v(n);
  do {
    for (double& x : v) x = gauss(rng);
  } while (max_abs(v) == 0.0);
  return v;
}

// Largest t with (normal) t d, y - t d in C, or (absolute) y +- t d in C.
double max_step(const Cone& c, const Vec& y, const Vec& d, bool absolute) {
  if (!c.is_lorentz()) {
    const Matrix g = c.generator_matrix();
    const std::size_t k = g.cols();
    LpBuilder lp;
    const std::size_t t = lp.add_nonneg();
    const std::size_t lam = lp.add_nonneg(k);
    const std::size_t mu = lp.add_nonneg(k);
    lp.set_cost(t, -1.0);
    // first: (absolute ? y + t d : t d) = G lam ; second: y - t d = G mu
    for (std::size_t i = 0; i < y.size(); ++i) {
      LpBuilder::Terms r1{{t, d[i]}};
      for (std::size_t j = 0; j < k; ++j) r1.emplace_back(lam + j, -g(i, j));
      lp.add_equality(r1, absolute ? -y[i] : 0.0);
      LpBuilder::Terms r2{{t, d[i]}};
      for (std::size_t j = 0; j < k; ++j) r2.emplace_back(mu + j, g(i, j));
      lp.add_equality(r2, y[i]);
    }
    const LpResult r = lp_minimize(lp.build());
    if (r.status == LpStatus::unbounded) return std::numeric_limits<double>::infinity();
    if (!r.optimal()) return 0.0;
    return r.x[t];
  }
  auto feasible = [&](double t) {
    Vec lo = y, hi = y;
    axpy(-t, d, lo);
    axpy(t, d, hi);
    return cone_contains(c, lo, 0.0) && cone_contains(c, absolute ? hi : scaled(d, t), 0.0);
  };
  if (!feasible(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

Tagged sampled_normality(const OrderedSpace& os, bool absolute, const EstimateOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  double best = 0.0;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    Vec y = random_member(os.cone, rng);
    const double ny = vec_norm(y, os.space);
    if (ny == 0.0) continue;
    y = scaled(y, 1.0 / ny);
    std::vector<Vec> dirs{y, absolute ? random_direction(os.dim(), rng) : random_member(os.cone, rng)};
    if (absolute) dirs.push_back(sub(y, scaled(random_member(os.cone, rng), 0.5)));
    for (const auto& d : dirs) {
      const double nd = vec_norm(d, os.space);
      if (nd == 0.0) continue;
      best = std::max(best, max_step(os.cone, y, d, absolute) * nd);
    }
  }
  return {best, Method::lower_bound, "sampled " + std::to_string(opt.samples) + " order intervals"};
}

// Minimal |a| with a +- x in C (abs) or minimal |a|+|b| with a - b = x (sum),
// for polyhedral cones.
std::optional<double> inner_conormal(const OrderedSpace& os, const Vec& x, bool absolute, Method& method) {
  const Matrix g = os.cone.generator_matrix();
  LpBuilder lp;
  const std::size_t lam = lp.add_nonneg(g.cols());
  const std::size_t mu = lp.add_nonneg(g.cols());
  const AffineExpr p = generator_image(g, lam);
  const AffineExpr m = generator_image(g, mu);
  // absolute: a + x = G lam, a - x = G mu  =>  G(lam - mu) = 2x, a = (p + m)/2
  add_equal(lp, p - m, absolute ? scaled(x, 2.0) : x);
  const Matrix half = 0.5 * Matrix::identity(os.dim());
  std::vector<AffineExpr> parts;
  if (absolute) parts.push_back(apply(half, p + m));
  else parts = {p, m};
  if (auto model = polyhedral_model(os.space)) {
    LpBuilder::Terms obj;
    for (const auto& e : parts) {
      auto t = norm_epigraph(lp, *model, e);
      obj.insert(obj.end(), t.begin(), t.end());
    }
    for (const auto& [var, coef] : obj) lp.set_cost(var, coef);
    const LpResult r = lp_minimize(lp.build());
    if (r.status == LpStatus::infeasible) return std::nullopt;
    if (!r.optimal()) throw std::runtime_error("conormality linear program failed");
    return r.value;
  }
  if (os.space.norm.family() != NormKind::Family::two)
    throw UnsupportedNorm("conormality needs a polyhedral norm or the two-norm");
  if (!lp_minimize(lp.build()).optimal()) return std::nullopt;
  const TwoNormSum r = minimize_two_norm_sum(lp, parts);
  if (!r.converged) method = Method::sampled;
  return r.value;
}

// Lorentz cone with the Euclidean norm: the order on the plane spanned by the
// axis and x is a lattice order, so the optimal dominating element is |x|
// (absolute) and the optimal splitting is x = x+ - x- (sum).
double lorentz_inner(const Vec& axis, const Vec& x, bool absolute) {
  const double c = dot(axis, x);
  Vec perp = x;
  axpy(-c, axis, perp);
  const double pn = std::sqrt(dot(perp, perp));
  const double u = c + pn, w = c - pn;
  auto planar = [](double uu, double ww) { return std::sqrt(0.5 * (uu * uu + ww * ww)); };
  if (absolute) return planar(std::abs(u), std::abs(w));
  return planar(std::max(u, 0.0), std::max(w, 0.0)) + planar(std::max(-u, 0.0), std::max(-w, 0.0));
}

Tagged conormality(const OrderedSpace& os, bool absolute, const EstimateOptions& opt) {
  if (os.cone.is_lorentz()) {
    std::mt19937_64 rng(opt.seed);
    double best = 0.0;
    const bool euclid = os.space.norm.family() == NormKind::Family::two;
    for (std::size_t s = 0; s < opt.samples + os.dim(); ++s) {
      Vec x = s < os.dim() ? unit_vector(os.dim(), s) : random_direction(os.dim(), rng);
      x = scaled(x, 1.0 / vec_norm(x, os.space));
      double inner;
      if (euclid) {
        inner = lorentz_inner(os.cone.axis(), x, absolute);
      } else {
        // Feasible candidates only: t v dominates +-x once t >= |<v,x>| + |x_perp|.
        const Vec& v = os.cone.axis();
        const double c = dot(v, x);
        Vec perp = x;
        axpy(-c, v, perp);
        const double t = std::abs(c) + std::sqrt(dot(perp, perp));
        const Vec a = scaled(v, absolute ? t : 0.5 * t);
        inner = absolute ? vec_norm(a, os.space)
                         : vec_norm(add(a, scaled(x, 0.5)), os.space) + vec_norm(sub(a, scaled(x, 0.5)), os.space);
      }
      best = std::max(best, inner);
    }
    return {best, Method::sampled,
            euclid ? "planar lattice formula on sampled directions" : "feasible dominating elements on samples"};
  }
  if (!is_generating(os.cone))
    return {std::numeric_limits<double>::infinity(), Method::exact, "cone is not generating"};
  Method method = Method::exact;
  std::vector<Vec> points;
  auto verts = unit_ball_vertices(os.space, opt.lp_budget);
  if (verts && is_polyhedral(os.space.norm)) {
    points = *verts;
  } else {
    method = Method::sampled;
    std::mt19937_64 rng(opt.seed);
    for (std::size_t i = 0; i < os.dim(); ++i) points.push_back(unit_vector(os.dim(), i));
    for (std::size_t s = 0; s < opt.samples; ++s) points.push_back(random_direction(os.dim(), rng));
    for (auto& p : points) p = scaled(p, 1.0 / vec_norm(p, os.space));
  }
  double best = 0.0;
  for (const auto& x : points) {
    auto v = inner_conormal(os, x, absolute, method);
    if (!v) return {std::numeric_limits<double>::infinity(), Method::exact, "no dominating element"};
    best = std::max(best, *v);
  }
  return {best, method,
          method == Method::exact ? "inner program at every unit-ball vertex" : "inner program on sampled unit vectors"};
}

std::optional<Tagged> exact_normality(const OrderedSpace& os, bool absolute, const EstimateOptions& opt) {
  if (os.cone.is_lorentz()) return std::nullopt;
  auto model = polyhedral_model(os.space);
  if (!model) return std::nullopt;
  auto funcs = dual_functionals(*model, opt.lp_budget);
  if (!funcs) return std::nullopt;
  const Matrix g = os.cone.generator_matrix();
  LpBuilder lp;
  const std::size_t lam = lp.add_nonneg(g.cols());
  const std::size_t mu = lp.add_nonneg(g.cols());
  const AffineExpr p = generator_image(g, lam);
  const AffineExpr m = generator_image(g, mu);
  const Matrix half = 0.5 * Matrix::identity(os.dim());
  // normal: x = G lam, y = x + G mu.  absolute: x = (p - m)/2, y = (p + m)/2.
  const AffineExpr x = absolute ? apply(half, p - m) : p;
  const AffineExpr y = absolute ? apply(half, p + m) : p + m;
  add_norm_bound(lp, *model, y, 1.0);
  auto best = maximize_functionals(lp.build(), x, *funcs);
  if (!best) return std::nullopt;
  return Tagged{*best, Method::exact, "linear program per dual-ball vertex"};
}

}  // namespace

Tagged normality_constant(const OrderedSpace& os, NormalityMode mode, const EstimateOptions& opt) {
  switch (mode) {
    case NormalityMode::normal:
    case NormalityMode::absolute: {
      const bool absolute = mode == NormalityMode::absolute;
      if (auto e = exact_normality(os, absolute, opt)) return *e;
      return sampled_normality(os, absolute, opt);
    }
    case NormalityMode::abs_conormal:
      return conormality(os, true, opt);
    case NormalityMode::sum_conormal:
      return conormality(os, false, opt);
  }
  throw std::logic_error("unknown normality mode");
}

// ---------------------------------------------------------------- positivity

PositivityResult operator_positive(const Matrix& t, const OrderedSpace& from, const OrderedSpace& to) {
  if (t.cols() != from.dim() || t.rows() != to.dim()) throw DimensionError("operator does not map between spaces");
  PositivityResult res;
  if (from.cone.is_lorentz()) {
    res.method = Method::sampled;
    std::mt19937_64 rng(0x5eed);
    const Vec& v = from.cone.axis();
    std::vector<Vec> probes{v};
    for (int s = 0; s < 256; ++s) {
      Vec w = random_direction(from.dim(), rng);
      axpy(-dot(v, w), v, w);
      const double nw = std::sqrt(dot(w, w));
      if (nw == 0.0) continue;
      Vec r = v;
      axpy(1.0 / nw, w, r);
      probes.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (!cone_contains(to.cone, t * probes[i])) {
        res.positive = false;
        return res;
      }
    return res;
  }
  const auto& gens = from.cone.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!cone_contains(to.cone, t * gens[i])) {
      res.positive = false;
      res.failing_generator = i;
      return res;
    }
  return res;
}

ConeReport cone_report(const OrderedSpace& os, const EstimateOptions& opt) {
  ConeReport r;
  r.proper = is_proper(os.cone);
  r.generating = is_generating(os.cone);
  if (!r.proper) r.notes.push_back("cone is not proper; normality constants may be infinite");
  r.normality = normality_constant(os, NormalityMode::normal, opt);
  r.abs_normality = normality_constant(os, NormalityMode::absolute, opt);
  r.abs_conormality = normality_constant(os, NormalityMode::abs_conormal, opt);
  r.sum_conormality = normality_constant(os, NormalityMode::sum_conormal, opt);
  return r;
}

// ------------------------------------------------------------ operator cones

namespace {

Vec random_positive_functional(const Cone& c, std::mt19937_64& rng) {
  if (c.is_lorentz()) return random_member(c, rng);  // Lorentz cones are self-dual
  const HRep& h = c.facets();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  Vec phi(c.dim(), 0.0);
  bool any = false;
  for (const auto& a : h.inequalities) {
    if (unit(rng) < 0.4) continue;
    axpy(unit(rng), a, phi);
    any = true;
  }
  if (!any && !h.inequalities.empty()) axpy(1.0, h.inequalities[rng() % h.inequalities.size()], phi);
  for (const auto& e : h.equalities) axpy(gauss(rng), e, phi);
  return phi;
}

}  // namespace

Matrix random_positive_operator(const OrderedSpace& x, const OrderedSpace& y, std::mt19937_64& rng) {
  Matrix p(y.dim(), x.dim());
  const std::size_t pieces = 1 + rng() % 3;
  for (std::size_t k = 0; k < pieces; ++k) {
    const Vec phi = random_positive_functional(x.cone, rng);
    const Vec img = random_member(y.cone, rng);
    for (std::size_t i = 0; i < y.dim(); ++i)
      for (std::size_t j = 0; j < x.dim(); ++j) p(i, j) += img[i] * phi[j];
  }
  return p;
}

TransferReport verify_normality_transfer(const OrderedSpace& x, const OrderedSpace& y, std::size_t samples,
                                         std::uint64_t seed, const TransferOverrides& ov) {
  TransferReport rep;
  EstimateOptions opt;
  opt.seed = seed;
  rep.alpha_abs = ov.alpha_abs ? *ov.alpha_abs : normality_constant(x, NormalityMode::abs_conormal, opt);
  rep.beta_abs = ov.beta_abs ? *ov.beta_abs : normality_constant(y, NormalityMode::absolute, opt);
  rep.alpha_sum = ov.alpha_sum ? *ov.alpha_sum : normality_constant(x, NormalityMode::sum_conormal, opt);
  rep.beta_normal = ov.beta_normal ? *ov.beta_normal : normality_constant(y, NormalityMode::normal, opt);
  rep.samples = samples;

  const std::size_t gen_rank = x.cone.is_lorentz() ? x.dim() : (x.cone.generators().empty() ? 0 : rank(x.cone.generator_matrix()));
  const std::size_t lin = (x.dim() - gen_rank) * y.dim() + gen_rank * lineality_dim(y.cone);
  rep.operator_cone_proper = lin == 0;
  rep.properness_predicted = is_generating(x.cone) && is_proper(y.cone);

  std::mt19937_64 rng(seed);
  const double ab = rep.alpha_abs.value * rep.beta_abs.value;
  const double sn = rep.alpha_sum.value * rep.beta_normal.value;
  for (std::size_t s = 0; s < samples; ++s) {
    Matrix p = random_positive_operator(x, y, rng);
    Matrix q = random_positive_operator(x, y, rng);
    if (s == 0) p = Matrix(y.dim(), x.dim());  // T = P - Q with P = 0 and the trivial case below
    const Matrix sum = p + q;
    const Matrix diff = p - q;
    const double ns = op_norm(sum, x.space, y.space);
    const double nt = op_norm(diff, x.space, y.space);
    rep.worst_abs_slack = std::max(rep.worst_abs_slack, nt - ab * ns);
    if (nt > ab * ns + kTol) {
      ++rep.abs_violations;
      std::ostringstream w;
      w << "sample " << s << ": |T| = " << nt << " > " << ab << " * " << ns;
      rep.witnesses.push_back(w.str());
    }
    const double np = op_norm(p, x.space, y.space);
    if (np > sn * ns + kTol) {
      ++rep.normal_violations;
      std::ostringstream w;
      w << "sample " << s << ": |P| = " << np << " > " << sn << " * " << ns;
      rep.witnesses.push_back(w.str());
    }
  }
  return rep;
}

}  // namespace owb
