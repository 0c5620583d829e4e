#include "owb/beurling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

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

bool within(double value, double bound) { return value <= bound * (1.0 + kTol) + kTol; }

// Images pi(e_k) U_s on the flat C_c basis, index s * dim + k.
std::vector<Matrix> integrated_images(const CovariantRep& r, const DynamicalSystem& ds) {
  std::vector<Matrix> out;
  for (std::size_t s = 0; s < ds.order(); ++s)
    for (std::size_t k = 0; k < ds.dim(); ++k) out.push_back(r.pi[k] * r.u[s]);
  return out;
}

void require_lattice(const BeurlingAlgebra& ba) {
  if (!ba.lattice()) throw std::invalid_argument("lattice operations need the standard cone on A");
}

// c1 = 1 / max{|f|_w : sigma(f) <= 1}.  Exact by one program per dual
// functional of the Beurling norm when there are few of them.  Otherwise the
// block bound  sum_s w(s) max |f(s)|_A  and the right-identity bound give a
// certified lower bound on c1, and coordinate ascent over block functionals
// an upper bound.
Tagged lower_constant(const BeurlingAlgebra& ba, const CrossedProduct& cp, const Matrix& lift) {
  const auto& ds = ba.system();
  const std::size_t n = cp.dim();
  auto crossed_model = polyhedral_model(cp.space());
  auto block_model = polyhedral_model(ds.algebra.space());
  if (!crossed_model || !block_model) throw UnsupportedNorm("norm constants need polyhedral norms");
  LpBuilder lp;
  const std::size_t first = lp.add_free(n);
  const AffineExpr d = AffineExpr::variables(first, n);
  add_norm_bound(lp, *crossed_model, d, 1.0);
  const LpProblem ball = lp.build();
  const AffineExpr f = apply(lift, d);

  if (auto model = polyhedral_model(ba.space())) {
    if (auto funcs = dual_functionals(*model, 1u << 12)) {
      auto best = maximize_functionals(ball, f, *funcs);
      if (!best || !(*best > 0.0) || !std::isfinite(*best)) throw std::logic_error("crossed unit ball is degenerate");
      return {1.0 / *best, Method::exact, "reciprocal of the largest Beurling norm on the crossed unit ball"};
    }
  }
  auto block_funcs = dual_functionals(*block_model, 1u << 12);
  if (!block_funcs) throw UnsupportedNorm("algebra norm has too many dual functionals");
  const std::size_t m = ds.dim();
  double upper = 0.0;
  for (std::size_t s = 0; s < ds.order(); ++s) {
    AffineExpr block;
    block.coords.assign(f.coords.begin() + s * m, f.coords.begin() + (s + 1) * m);
    block.offset.assign(f.offset.begin() + s * m, f.offset.begin() + (s + 1) * m);
    auto v = maximize_functionals(ball, block, *block_funcs);
    if (!v || !std::isfinite(*v)) throw std::logic_error("crossed unit ball is degenerate");
    upper += ba.weight()(s) * *v;
  }
  // |f * (delta_e (x) r)| = |f| for a right identity r.
  if (const auto& r = ds.algebra.right_identity())
    upper = std::min(upper, ba.weight().at_identity * vec_norm(*r, ds.algebra.space()));
  // Ascent: fix one functional per block, maximise, re-pick the attaining functionals.
  std::mt19937_64 rng(23);
  double lower = 0.0;
  const std::size_t starts = block_funcs->size() + 8;
  for (std::size_t start = 0; start < starts; ++start) {
    std::vector<std::size_t> pick(ds.order(), start);
    if (start >= block_funcs->size())
      for (auto& p : pick) p = rng() % block_funcs->size();
    double last = -1.0;
    for (int round = 0; round < 50; ++round) {
      Vec phi(ds.order() * m);
      for (std::size_t s = 0; s < ds.order(); ++s)
        for (std::size_t k = 0; k < m; ++k) phi[s * m + k] = ba.weight()(s) * (*block_funcs)[pick[s]][k];
      LpProblem prob = ball;
      std::fill(prob.objective.begin(), prob.objective.end(), 0.0);
      for (std::size_t i = 0; i < f.dim(); ++i)
        for (const auto& [var, coef] : f.coords[i]) prob.objective[var] -= phi[i] * coef;
      const LpResult res = lp_minimize(prob);
      if (!res.optimal()) break;
      const Vec point = evaluate(f, res.x);
      const double value = vec_norm(point, ba.space());
      lower = std::max(lower, value);
      if (value <= last * (1.0 + 1e-12)) break;
      last = value;
      for (std::size_t s = 0; s < ds.order(); ++s) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < block_funcs->size(); ++j) {
          const double v = dot((*block_funcs)[j], std::span<const double>(point).subspan(s * m, m));
          if (v > best) best = v, pick[s] = j;
        }
      }
    }
  }
  if (upper - lower <= 1e-9 * upper)
    return {1.0 / upper, Method::exact, "block bound attained by coordinate ascent"};
  return {1.0 / upper, Method::lower_bound, cat("certified lower bound; ascent reaches ", 1.0 / lower)};
}

}  // namespace

Weight validate_weight(const FiniteGroup& g, Vec values) {
  if (values.size() != g.order()) throw ValidationError("weight needs one value per group element", {});
  for (std::size_t s = 0; s < values.size(); ++s)
    if (!(values[s] > 0.0) || !std::isfinite(values[s]))
      throw ValidationError("weight values must be positive and finite", {cat("w(", s, ") = ", values[s])});
  for (std::size_t s = 0; s < g.order(); ++s)
    for (std::size_t t = 0; t < g.order(); ++t) {
      const double lhs = values[g.mul(s, t)], rhs = values[s] * values[t];
      if (lhs > rhs * (1.0 + kTol))
        throw ValidationError("weight is not submultiplicative",
                              {cat("pair (", s, ", ", t, "): w(st) = ", lhs, " > w(s) w(t) = ", rhs)});
    }
  const double at_e = values[g.identity()];
  if (at_e < 1.0 - kTol) throw std::logic_error("submultiplicative weight below 1 at the identity");
  return {std::move(values), at_e};
}

BeurlingAlgebra build_beurling(DynamicalSystem ds, Weight w) {
  if (w.values.size() != ds.order()) throw DimensionError("weight does not match the group");
  std::vector<NormedSpace> blocks(ds.order(), ds.algebra.space());
  std::vector<Cone> cones(ds.order(), ds.algebra.cone());
  const NormedSpace space{ds.order() * ds.dim(), NormKind::block_sum(SumExponent::one, blocks, w.values)};
  OrderedSpace carrier(space, product_cone(cones));
  return BeurlingAlgebra(std::move(ds), std::move(w), std::move(carrier));
}

std::optional<CcFunction> BeurlingAlgebra::identity() const {
  const auto& u = ds_.algebra.unit();
  if (!u) return std::nullopt;
  return CcFunction::delta(ds_, ds_.group.identity(), *u);
}

Tagged submultiplicativity(const BeurlingAlgebra& ba, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const CcFunction f = random_function(ba.system(), rng), g = random_function(ba.system(), rng);
    const double denom = ba.c_alpha() * ba.norm(f) * ba.norm(g);
    if (denom > 0.0) worst = std::max(worst, ba.norm(ba.multiply(f, g)) / denom);
  }
  return {worst, Method::sampled, cat(samples, " random pairs")};
}

CovariantRep lambda_tilde_Lambda(const BeurlingAlgebra& ba) {
  const auto& ds = ba.system();
  CovariantRep r = reps::induced_regular(ds, ba.weight().values);
  r.label = "lambda~ x Lambda";
  if (auto c = check_nondegenerate(reps::left_regular(ds)); !c)
    throw std::invalid_argument("left regular representation of A is degenerate: " + c.witness);
  if (auto c = certify(r, ds); !c) throw std::logic_error("induced regular pair fails certification: " + c.witness);
  for (std::size_t s = 0; s < ds.order(); ++s) {
    const double n = op_norm(r.u[s], r.space.space, r.space.space);
    if (!within(n, ba.weight()(s))) throw std::logic_error(cat("|Lambda_", s, "| = ", n, " exceeds the weight"));
  }
  return r;
}

// ---------------------------------------------------------- isomorphism

IsomorphismReport beurling_vs_crossed(const BeurlingAlgebra& ba) {
  const auto& ds = ba.system();
  const auto& right = ds.algebra.right_identity();
  if (!right) throw PreconditionError("right identity", "A has no right identity");
  const CrossedProduct cp = build_crossed(ds, RepClass(ds, {lambda_tilde_Lambda(ba)}));
  IsomorphismReport rep;
  rep.kernel_dim = cp.kernel().size();
  rep.quotient_dim = cp.dim();
  if (rep.kernel_dim != 0) throw std::logic_error("integrated form of lambda~ x Lambda is not faithful");

  const std::size_t n = cp.dim();
  // q is invertible here; the Beurling norm in quotient coordinates.
  Matrix lift(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec c = cp.lift(unit_vector(n, i)).coords;
    for (std::size_t r = 0; r < n; ++r) lift(r, i) = c[r];
  }

  if (auto verts = unit_ball_vertices(ba.space(), 1u << 14); verts && is_polyhedral(ba.space().norm)) {
    double c2 = 0.0;
    for (const auto& v : *verts) c2 = std::max(c2, quotient_norm(cp, cp.q(CcFunction(ds.order(), ds.dim(), v))));
    rep.upper = {c2, Method::exact, "crossed norm at Beurling unit-ball vertices"};
  } else {
    std::mt19937_64 rng(19);
    double c2 = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const CcFunction f = random_function(ds, rng);
      const double nf = ba.norm(f);
      if (nf > 0.0) c2 = std::max(c2, quotient_norm(cp, cp.q(f)) / nf);
    }
    rep.upper = {c2, Method::lower_bound, "sampled ratio"};
  }

  rep.lower = lower_constant(ba, cp, lift);

  rep.crossed_cone_in_beurling = std::all_of(cp.cone().generators().begin(), cp.cone().generators().end(),
                                             [&](const Vec& g) { return cone_contains(ba.carrier().cone, lift * g); });
  rep.beurling_cone_in_crossed =
      std::all_of(ba.carrier().cone.generators().begin(), ba.carrier().cone.generators().end(), [&](const Vec& g) {
        return cone_contains(cp.cone(), cp.q(CcFunction(ds.order(), ds.dim(), g)));
      });

  rep.isometric = std::abs(rep.lower.value - 1.0) <= kTol && std::abs(rep.upper.value - 1.0) <= kTol &&
                  rep.lower.method == Method::exact && rep.upper.method == Method::exact;
  const bool bounded_identity = vec_norm(*right, ds.algebra.space()) <= 1.0 + kTol;
  rep.isometric_predicted = bounded_identity && ds.isometric && std::abs(ba.weight().at_identity - 1.0) <= kTol;
  if (rep.isometric_predicted && !rep.isometric) rep.notes.push_back("isometry predicted but not observed");
  return rep;
}

// --------------------------------------------------------------- bounds

std::size_t BoundsReport::violations() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += c.violations.size();
  return n;
}

BoundsReport rep_bounds_check(const BeurlingAlgebra& ba, const std::vector<CovariantRep>& corpus) {
  const auto& ds = ba.system();
  const auto& w = ba.weight();
  const std::size_t e = ds.group.identity();
  BoundsReport report;
  const auto& u = ds.algebra.left_identity();
  if (!u) report.notes.push_back("A has no left identity: bounds (2) and (3) skipped");
  for (const auto& r : corpus) {
    if (auto c = certify(r, ds); !c) throw PreconditionError("covariant representation", r.label + ": " + c.witness);
    BoundsCase bc;
    bc.label = r.label;
    for (std::size_t s = 0; s < ds.order(); ++s)
      bc.c_u = std::max(bc.c_u, op_norm(r.u[s], r.space.space, r.space.space) / w(s));
    bc.pi_norm = pi_norm(r, ds);
    const std::vector<Matrix> images = integrated_images(r, ds);
    bc.t_norm = linear_map_norm(images, ba.space(), r.space.space);
    if (!within(bc.t_norm.value, bc.c_u * bc.pi_norm.value))
      bc.violations.push_back(cat("(1) |T| = ", bc.t_norm.value, " > C_U |pi| = ", bc.c_u * bc.pi_norm.value));
    if (u) {
      auto t_of = [&](const CcFunction& f) {
        Matrix m(r.dim(), r.dim());
        for (std::size_t i = 0; i < f.coords.size(); ++i)
          if (f.coords[i] != 0.0) m += f.coords[i] * images[i];
        return m;
      };
      std::vector<Matrix> pi_t;
      for (std::size_t k = 0; k < ds.dim(); ++k)
        pi_t.push_back(t_of(CcFunction::delta(ds, e, ds.algebra.multiply(unit_vector(ds.dim(), k), *u))));
      const CovariantRep recovered = make_rep(r.space, pi_t, r.u, "pi^T");
      bc.pi_t_norm = pi_norm(recovered, ds);
      bc.identity_norm = vec_norm(*u, ds.algebra.space());
      if (!within(bc.pi_t_norm->value, w.at_identity * bc.t_norm.value))
        bc.violations.push_back(cat("(2) |pi^T| = ", bc.pi_t_norm->value, " > w(e) |T|"));
      for (std::size_t s = 0; s < ds.order(); ++s) {
        const double n = op_norm(t_of(CcFunction::delta(ds, s, *u)), r.space.space, r.space.space);
        bc.u_t_norms.push_back(n);
        if (!within(n, bc.identity_norm * w.at_identity * bc.t_norm.value * w(s)))
          bc.violations.push_back(cat("(3) |U^T_", s, "| = ", n, " > M w(e) |T| w(s)"));
      }
    }
    report.cases.push_back(std::move(bc));
  }
  return report;
}

// -------------------------------------------------------------- lattice

CcFunction lattice_sup(const BeurlingAlgebra& ba, const CcFunction& f, const CcFunction& g) {
  require_lattice(ba);
  CcFunction h = f;
  for (std::size_t i = 0; i < h.coords.size(); ++i) h.coords[i] = std::max(f.coords[i], g.coords[i]);
  return h;
}

CcFunction lattice_inf(const BeurlingAlgebra& ba, const CcFunction& f, const CcFunction& g) {
  require_lattice(ba);
  CcFunction h = f;
  for (std::size_t i = 0; i < h.coords.size(); ++i) h.coords[i] = std::min(f.coords[i], g.coords[i]);
  return h;
}

CcFunction lattice_abs(const BeurlingAlgebra& ba, const CcFunction& f) {
  require_lattice(ba);
  CcFunction h = f;
  for (auto& x : h.coords) x = std::abs(x);
  return h;
}

LatticeReport lattice_report(const BeurlingAlgebra& ba, std::size_t samples, std::uint64_t seed) {
  require_lattice(ba);
  const auto& ds = ba.system();
  LatticeReport rep;
  rep.samples = samples;
  rep.lattice_algebra = ds.isometric && ds.algebra.submultiplicative();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shrink(0.0, 1.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const CcFunction f = random_function(ds, rng), g = random_function(ds, rng);
    const CcFunction af = lattice_abs(ba, f);
    CcFunction neg = f;
    for (auto& x : neg.coords) x = -x;
    if (max_abs_diff(lattice_sup(ba, f, neg).coords, af.coords) > 0.0) {
      ++rep.identity_violations;
      rep.witnesses.push_back(cat("sample ", i, ": f v (-f) != |f|"));
    }
    // h with |h| <= |g| coordinatewise
    CcFunction h = g;
    for (auto& x : h.coords) x *= (shrink(rng) * 2.0 - 1.0);
    if (ba.norm(h) > ba.norm(g) * (1.0 + kTol) + kTol) {
      ++rep.norm_violations;
      rep.witnesses.push_back(cat("sample ", i, ": |h| <= |g| but norm grows"));
    }
    const CcFunction lhs = lattice_abs(ba, ba.multiply(f, g));
    const CcFunction rhs = ba.multiply(af, lattice_abs(ba, g));
    const Vec gap = sub(rhs.coords, lhs.coords);
    if (std::any_of(gap.begin(), gap.end(), [&](double x) { return x < -kTol * (1.0 + max_abs(rhs.coords)); })) {
      ++rep.product_violations;
      rep.witnesses.push_back(cat("sample ", i, ": |f*g| exceeds |f|*|g|"));
    }
  }
  return rep;
}

// ------------------------------------------------------------ classical

ClassicalReport classical_corollary(const FiniteGroup& g, const Weight& w, const OrderedSpace& x,
                                    const std::vector<Matrix>& u) {
  const std::size_t n = x.dim();
  if (u.size() != g.order()) throw DimensionError("one operator per group element is required");
  for (const auto& m : u)
    if (m.rows() != n || m.cols() != n) throw DimensionError("operator shape does not match the space");
  if (max_abs_diff(u[g.identity()], Matrix::identity(n)) > kTol) throw ValidationError("U_e is not the identity", {});
  for (std::size_t r = 0; r < g.order(); ++r)
    for (std::size_t s = 0; s < g.order(); ++s)
      if (max_abs_diff(u[r] * u[s], u[g.mul(r, s)]) > kTol * std::max(1.0, max_abs(u[g.mul(r, s)])))
        throw ValidationError("U is not a homomorphism", {cat("pair (", r, ", ", s, ")")});

  ClassicalReport rep;
  const NormedSpace l1w{g.order(), NormKind::weighted_one(w.values)};
  const NormRoute route = is_polyhedral(x.space.norm) ? NormRoute::programs : NormRoute::automatic;
  rep.t_norm = linear_map_norm(u, l1w, x.space, route);
  for (std::size_t r = 0; r < g.order(); ++r)
    rep.formula = std::max(rep.formula, op_norm(u[r], x.space, x.space) / w(r));
  rep.formula_matches = std::abs(rep.t_norm.value - rep.formula) <= kTol * std::max(1.0, rep.formula);

  rep.positive = std::all_of(u.begin(), u.end(), [&](const Matrix& m) { return operator_positive(m, x, x).positive; });
  // T(delta_e) is the identity, so T is non-degenerate.
  rep.nondegenerate = rank(hstack(u)) == n;
  rep.multiplicative = true;
  for (std::size_t r = 0; r < g.order(); ++r)
    for (std::size_t s = 0; s < g.order(); ++s)
      rep.multiplicative = rep.multiplicative && max_abs_diff(u[r] * u[s], u[g.mul(r, s)]) <= kTol;
  // U^T_s = T(delta_s): sum over r of delta_s(r) U_r.
  for (std::size_t s = 0; s < g.order(); ++s) {
    Matrix t(n, n);
    for (std::size_t r = 0; r < g.order(); ++r)
      if (r == s) t += u[r];
    rep.roundtrip = std::max(rep.roundtrip, max_abs_diff(t, u[s]));
  }
  return rep;
}

}  // namespace owb
