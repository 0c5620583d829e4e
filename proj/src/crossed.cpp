#include "owb/crossed.hpp"

#include <algorithm>
#include <cmath>
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

bool is_zero(std::span<const double> v, double scale = 1.0) { return max_abs(v) <= kTol * std::max(1.0, scale); }

// Operators on C_c(G, A) in flat coordinates.
Matrix cc_left_algebra(const DynamicalSystem& ds, std::span<const double> a) {
  const Matrix l = ds.algebra.left_multiplication(a);
  std::vector<Matrix> blocks(ds.order(), l);
  return block_diagonal(blocks);
}

Matrix cc_translate(const DynamicalSystem& ds, std::size_t r) {
  const std::size_t n = ds.dim();
  Matrix m(ds.order() * n, ds.order() * n);
  for (std::size_t s = 0; s < ds.order(); ++s) {
    const std::size_t from = ds.group.mul(ds.group.inverse(r), s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(s * n + i, from * n + j) = ds.alpha[r](i, j);
  }
  return m;
}

}  // namespace

CcFunction convolve(const DynamicalSystem& ds, const CcFunction& f, const CcFunction& g) {
  if (f.order != ds.order() || g.order != ds.order() || f.dim != ds.dim() || g.dim != ds.dim())
    throw DimensionError("functions do not belong to this system");
  CcFunction out = CcFunction::zero(ds);
  for (std::size_t r = 0; r < ds.order(); ++r) {
    if (max_abs(f.at(r)) == 0.0) continue;
    const std::size_t ri = ds.group.inverse(r);
    for (std::size_t s = 0; s < ds.order(); ++s) {
      const auto gv = g.at(ds.group.mul(ri, s));
      if (max_abs(gv) == 0.0) continue;
      const Vec moved = ds.alpha[r] * gv;
      const Vec term = ds.algebra.multiply(f.at(r), moved);
      axpy(1.0, term, out.at(s));
    }
  }
  return out;
}

CcFunction random_positive_function(const DynamicalSystem& ds, std::mt19937_64& rng) {
  CcFunction f = CcFunction::zero(ds);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < ds.order(); ++s) {
    if (unit(rng) < 0.3) continue;
    const Vec a = random_member(ds.algebra.cone(), rng);
    std::copy(a.begin(), a.end(), f.at(s).begin());
  }
  return f;
}

CcFunction random_function(const DynamicalSystem& ds, std::mt19937_64& rng) {
  CcFunction f = CcFunction::zero(ds);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (double& v : f.coords) v = d(rng);
  return f;
}

ConvolutionPositivity convolve_positivity_check(const DynamicalSystem& ds, std::size_t samples, std::uint64_t seed) {
  ConvolutionPositivity rep;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const CcFunction f = random_positive_function(ds, rng), g = random_positive_function(ds, rng);
    const CcFunction h = convolve(ds, f, g);
    ++rep.samples;
    for (std::size_t s = 0; s < ds.order(); ++s)
      if (!cone_contains(ds.algebra.cone(), h.at(s))) {
        ++rep.violations;
        rep.witnesses.push_back(cat("sample ", k, ": (f*g)(", s, ") not positive"));
        break;
      }
  }
  return rep;
}

// -------------------------------------------------------- crossed product

Vec CrossedProduct::q(const CcFunction& f) const {
  if (f.coords.size() != lift_dim()) throw DimensionError("function has wrong length for this crossed product");
  return projection_ * f.coords;
}

CcFunction CrossedProduct::lift(std::span<const double> d) const {
  if (d.size() != dim()) throw DimensionError("quotient element has wrong dimension");
  CcFunction f = CcFunction::zero(ds_);
  for (std::size_t i = 0; i < d.size(); ++i) f.coords[basis_[i]] = d[i];
  return f;
}

Vec CrossedProduct::multiply(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != dim() || b.size() != dim()) throw DimensionError("quotient element has wrong dimension");
  Vec out(dim(), 0.0);
  for (std::size_t i = 0; i < dim(); ++i)
    if (a[i] != 0.0) axpy(a[i], table_[i] * b, out);
  return out;
}

CrossedProduct build_crossed(DynamicalSystem ds, RepClass reps) {
  if (ds.algebra.cone().is_lorentz()) throw std::invalid_argument("crossed products need a polyhedral cone on the algebra");
  std::vector<Matrix> stacked;
  for (const auto& r : reps.reps()) {
    if (auto c = check_covariant(r, ds); !c) throw ValidationError("representation is not covariant", {c.witness});
    stacked.push_back(integrated_form_matrix(r, ds));
  }
  const Matrix big = vstack(stacked);
  const Echelon e = row_reduce(big);
  const double scale = std::max(1.0, max_abs(big));
  if (!e.pivots.empty() && e.smallest_pivot < 1e-7 * scale)
    throw RankAmbiguity(cat("kernel rank is ambiguous: smallest accepted pivot ", e.smallest_pivot));
  if (e.pivots.empty()) throw std::invalid_argument("sigma^R vanishes identically; the quotient is zero");

  const std::size_t n = e.pivots.size();
  const std::size_t na = ds.dim();
  const Matrix q = e.reduced;
  std::vector<Vec> gens;
  for (std::size_t s = 0; s < ds.order(); ++s)
    for (const auto& c : ds.algebra.cone().generators()) {
      Vec img(n, 0.0);
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t i = 0; i < n; ++i) img[i] += q(i, s * na + k) * c[k];
      if (!is_zero(img)) gens.push_back(std::move(img));
    }
  Cone cone = gens.empty() ? Cone::polyhedral({}, n) : Cone::polyhedral(std::move(gens), n);

  std::vector<OperatorFamily> families;
  std::vector<std::vector<Matrix>> induced;
  for (const auto& r : reps.reps()) {
    std::vector<Matrix> imgs;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = e.pivots[i];
      imgs.push_back(r.pi[idx % na] * r.u[idx / na]);
    }
    families.push_back({imgs, r.space.space});
    induced.push_back(std::move(imgs));
  }
  NormedSpace space{n, NormKind::operator_max(std::move(families))};

  CrossedProduct cp(std::move(ds), std::move(reps), OrderedSpace(std::move(space), std::move(cone)));
  cp.kernel_ = nullspace(big);
  cp.basis_ = e.pivots;
  cp.projection_ = q;
  cp.induced_ = std::move(induced);

  for (std::size_t i = 0; i < n; ++i) {
    Matrix l(n, n);
    const CcFunction bi = cp.lift(unit_vector(n, i));
    for (std::size_t j = 0; j < n; ++j) {
      const Vec col = cp.q(convolve(cp.ds_, bi, cp.lift(unit_vector(n, j))));
      for (std::size_t k = 0; k < n; ++k) l(k, j) = col[k];
    }
    cp.table_.push_back(std::move(l));
  }

  const auto& alg = cp.ds_.algebra;
  for (const auto& u : {alg.left_identity(), alg.right_identity()}) {
    if (!u || cp.identity_) continue;
    const Vec id = cp.q(CcFunction::delta(cp.ds_, cp.ds_.group.identity(), *u));
    bool left = true, right = true;
    for (std::size_t j = 0; j < n; ++j) {
      const Vec b = unit_vector(n, j);
      left = left && max_abs_diff(cp.multiply(id, b), b) <= kTol;
      right = right && max_abs_diff(cp.multiply(b, id), b) <= kTol;
    }
    if (left || right) {
      cp.identity_ = id;
      cp.identity_left_ = left;
      cp.identity_right_ = right;
    }
  }
  return cp;
}

double quotient_norm(const CrossedProduct& cp, std::span<const double> d) { return vec_norm(d, cp.space()); }

Matrix induced_operator(const CrossedProduct& cp, std::size_t rep, std::span<const double> d) {
  const auto& imgs = cp.induced().at(rep);
  const std::size_t x = cp.reps()[rep].dim();
  Matrix m(x, x);
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) m += d[i] * imgs[i];
  return m;
}

namespace {

Matrix on_quotient(const CrossedProduct& cp, const Matrix& cc) {
  const std::size_t n = cp.dim();
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec col = cp.projection() * (cc * cp.lift(unit_vector(n, j)).coords);
    for (std::size_t k = 0; k < n; ++k) m(k, j) = col[k];
  }
  return m;
}

}  // namespace

Matrix i_a(const CrossedProduct& cp, std::span<const double> a) {
  return on_quotient(cp, cc_left_algebra(cp.system(), a));
}

Matrix i_g(const CrossedProduct& cp, std::size_t r) { return on_quotient(cp, cc_translate(cp.system(), r)); }

Certificate check_kernel_invariance(const CrossedProduct& cp) {
  const auto& ds = cp.system();
  for (const auto& k : cp.kernel()) {
    const double scale = max_abs(k);
    for (std::size_t m = 0; m < ds.dim(); ++m)
      if (!is_zero(cp.projection() * (cc_left_algebra(ds, unit_vector(ds.dim(), m)) * k), scale))
        return {false, Method::exact, cat("i_A(e", m, ") moves a kernel vector out of the kernel")};
    for (std::size_t r = 0; r < ds.order(); ++r)
      if (!is_zero(cp.projection() * (cc_translate(ds, r) * k), scale))
        return {false, Method::exact, cat("i_G(", r, ") moves a kernel vector out of the kernel")};
  }
  return {};
}

Certificate check_ideal(const CrossedProduct& cp, std::size_t samples, std::uint64_t seed) {
  const auto& ds = cp.system();
  std::mt19937_64 rng(seed);
  for (const auto& k : cp.kernel()) {
    const CcFunction kf(ds.order(), ds.dim(), k);
    for (std::size_t s = 0; s < samples; ++s) {
      const CcFunction f = random_function(ds, rng);
      const double scale = max_abs(k) * max_abs(f.coords) * static_cast<double>(ds.order() * ds.dim());
      if (!is_zero(cp.q(convolve(ds, kf, f)), scale)) return {false, Method::sampled, "k * f leaves the kernel"};
      if (!is_zero(cp.q(convolve(ds, f, kf)), scale)) return {false, Method::sampled, "f * k leaves the kernel"};
    }
  }
  return {true, cp.kernel().empty() ? Method::exact : Method::sampled, ""};
}

Certificate check_well_defined(const CrossedProduct& cp) {
  const auto& ds = cp.system();
  for (const auto& k : cp.kernel()) {
    const CcFunction kf(ds.order(), ds.dim(), k);
    for (std::size_t j = 0; j < cp.dim(); ++j) {
      const CcFunction b = cp.lift(unit_vector(cp.dim(), j));
      const double scale = max_abs(k);
      if (!is_zero(cp.q(convolve(ds, kf, b)), scale) || !is_zero(cp.q(convolve(ds, b, kf)), scale))
        return {false, Method::exact, cat("product depends on the lift of basis vector ", j)};
    }
  }
  return {};
}

OrderIdealReport kernel_order_ideal(const CrossedProduct& cp) {
  if (!cp.system().algebra.cone().is_standard())
    throw std::invalid_argument("order ideals are checked for coordinate lattices only");
  OrderIdealReport rep;
  const std::size_t n = cp.lift_dim();
  std::vector<bool> support(n, false);
  for (const auto& k : cp.kernel())
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(k[i]) > kTol * max_abs(k)) support[i] = true;
  const auto count = static_cast<std::size_t>(std::count(support.begin(), support.end(), true));
  rep.is_order_ideal = count == cp.kernel().size();
  if (rep.is_order_ideal) return rep;
  for (const auto& k : cp.kernel()) {
    Vec a(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) a[i] = std::abs(k[i]);
    if (!is_zero(cp.projection() * a, max_abs(a))) {
      rep.witness = k;
      return rep;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (support[i] && !is_zero(cp.projection() * unit_vector(n, i))) {
      rep.witness = unit_vector(n, i);
      break;
    }
  return rep;
}

CrossedConeReport crossed_cone_report(const CrossedProduct& cp, const EstimateOptions& opt) {
  CrossedConeReport r;
  r.cone = cone_report(cp.ordered_space(), opt);
  const auto& ds = cp.system();
  r.generating_predicted = is_generating(ds.algebra.cone());
  bool all_positive = true, operator_proper = true, lattices = true;
  for (const auto& rep : cp.reps().reps()) {
    all_positive = all_positive && check_positive(rep, ds).ok;
    operator_proper = operator_proper && is_generating(rep.space.cone) && is_proper(rep.space.cone);
    lattices = lattices && is_banach_lattice(rep.space);
  }
  r.proper_predicted = all_positive && operator_proper;
  r.lattice_predicted = all_positive && lattices;
  if (r.generating_predicted) r.notes.push_back("A+ is generating, so the quotient cone is generating");
  if (r.proper_predicted) r.notes.push_back("all reps positive on spaces with proper operator cones: the cone is proper");
  if (r.lattice_predicted) r.notes.push_back("all reps positive on Banach lattices: 1-absolutely normal");
  return r;
}

}  // namespace owb
