#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "owb/beurling.hpp"
#include "owb/config.hpp"
#include "owb/corpus.hpp"

using namespace owb;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Tallies checks and keeps the first failing message.
class Tally {
 public:
  void expect(bool cond, const std::string& what) {
    ++checks_;
    if (!cond && first_.empty()) first_ = what;
    if (!cond) ++failures_;
  }
  Outcome done(const std::string& summary) const {
    std::ostringstream os;
    os << summary << "; " << checks_ << " checks, " << failures_ << " failures";
    if (!first_.empty()) os << "; first: " << first_;
    return {failures_ == 0, os.str()};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

const CorpusOptions kCaps{6, 3, true};
constexpr std::size_t kCorpusSize = 120;
constexpr std::uint64_t kCorpusSeed = 20240611;

const std::vector<CorpusInstance>& corpus() {
  static const auto c = make_corpus(kCorpusSeed, kCorpusSize, kCaps);
  return c;
}

bool has_positive_left_identity(const DynamicalSystem& ds) {
  const auto& u = ds.algebra.left_identity();
  return u && cone_contains(ds.algebra.cone(), *u);
}

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(OWB_SOURCE_DIR) / "configs" / (name + ".config");
}

Outcome worked_example() {
  Tally t;
  const auto g = FiniteGroup::cyclic(2);
  const auto a = algebras::scalars();
  const auto ds = make_system(a, g, trivial_action(g, a));
  const OrderedSpace line{{1, NormKind::one()}, Cone::standard(1)};
  const auto r = make_rep(line, {Matrix{{1}}}, {Matrix{{1}}, Matrix{{1}}});
  const auto cp = build_crossed(ds, RepClass(ds, {r}));
  t.expect(cp.kernel().size() == 1, "kernel dimension");
  if (cp.kernel().size() == 1) {
    const Vec& k = cp.kernel()[0];
    t.expect(std::abs(k[0] + k[1]) <= 1e-12 * max_abs(k), "kernel direction (1,-1)");
  }
  t.expect(cp.dim() == 1, "quotient dimension");
  t.expect(std::abs(quotient_norm(cp, cp.q(CcFunction(2, 1, {1, 2}))) - 3.0) <= 1e-12, "norm of q((1,2))");
  const auto oi = kernel_order_ideal(cp);
  t.expect(!oi.is_order_ideal, "kernel is an order ideal");
  if (oi.witness) {
    const Vec abs{std::abs((*oi.witness)[0]), std::abs((*oi.witness)[1])};
    t.expect(std::abs(cp.q(CcFunction(2, 1, abs))[0]) > 1e-12, "|k| lies in the kernel");
  }
  return t.done("kernel span{(1,-1)}, dim 1, |q(1,2)| = 3, not an order ideal");
}

Outcome roundtrips() {
  Tally t;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  std::size_t reps = 0, algebra_reps = 0;
  for (const auto& inst : corpus()) {
    const auto& ds = inst.system;
    const auto cp = build_crossed(ds, RepClass(ds, inst.reps));
    for (const auto& r : inst.reps) {
      const double d = roundtrip(cp, r);
      worst = std::max(worst, d);
      t.expect(d <= 1e-9, inst.label + ": backward(forward(r))");
      ++reps;
    }
    if (!has_positive_left_identity(ds)) continue;
    for (int k = 0; k < 2; ++k) {
      const auto tr = random_algebra_rep(cp, rng);
      const double d = roundtrip(cp, tr);
      worst = std::max(worst, d);
      t.expect(d <= 1e-9, inst.label + ": forward(backward(T))");
      ++algebra_reps;
    }
  }
  std::ostringstream os;
  os << corpus().size() << " systems, " << reps << " pairs, " << algebra_reps << " algebra reps, worst " << worst;
  return t.done(os.str());
}

Outcome positivity() {
  Tally t;
  std::mt19937_64 rng(2);
  for (const auto& inst : corpus()) {
    const auto& ds = inst.system;
    const auto cp = build_crossed(ds, RepClass(ds, inst.reps));
    for (const auto& r : inst.reps) {
      const auto tr = forward(cp, r);
      t.expect(check_positive(cp, tr).ok, inst.label + ": forward not positive");
    }
    if (!has_positive_left_identity(ds)) continue;
    for (int k = 0; k < 2; ++k) {
      const auto tr = random_algebra_rep(cp, rng);
      t.expect(check_positive(cp, tr).ok, inst.label + ": random T not positive");
      const auto back = backward(cp, tr);
      t.expect(check_positive(back, ds).ok, inst.label + ": backward not positive");
    }
  }
  return t.done("forward and backward over the corpus");
}

Outcome cone_properties() {
  Tally t;
  std::size_t generating = 0, proper = 0, exact = 0;
  for (const auto& inst : corpus()) {
    const auto& ds = inst.system;
    const auto cp = build_crossed(ds, RepClass(ds, inst.reps));
    const bool lattice_reps = std::all_of(inst.reps.begin(), inst.reps.end(),
                                          [](const CovariantRep& r) { return is_banach_lattice(r.space); });
    if (is_generating(ds.algebra.cone())) {
      ++generating;
      t.expect(is_generating(cp.cone()), inst.label + ": quotient cone not generating");
    }
    if (lattice_reps) {
      ++proper;
      t.expect(is_proper(cp.cone()), inst.label + ": quotient cone not proper");
      const auto c = normality_constant(cp.ordered_space(), NormalityMode::absolute);
      t.expect(c.value <= 1.0 + 1e-9, inst.label + ": absolute normality " + std::to_string(c.value));
      if (c.method == Method::exact) ++exact;
    }
  }
  std::ostringstream os;
  os << generating << " generating, " << proper << " proper and normal (" << exact << " normality constants exact)";
  return t.done(os.str());
}

OrderedSpace random_generating_space(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim_pick(1, 4);
  std::uniform_real_distribution<double> u(-1, 1), w(0.5, 2.5);
  const std::size_t n = dim_pick(rng);
  for (;;) {
    std::vector<Vec> gens;
    const std::size_t count = n + std::uniform_int_distribution<std::size_t>(0, 3)(rng);
    for (std::size_t j = 0; j < count; ++j) {
      Vec g(n);
      for (double& x : g) x = u(rng);
      if (max_abs(g) > 1e-3) gens.push_back(g);
    }
    if (gens.empty()) continue;
    const Cone c = Cone::polyhedral(gens, n);
    if (!is_generating(c)) continue;
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: return {{n, NormKind::one()}, c};
      case 1: return {{n, NormKind::sup()}, c};
      default: {
        Vec weights(n);
        for (double& x : weights) x = w(rng);
        return {{n, NormKind::weighted_one(weights)}, c};
      }
    }
  }
}

Outcome ando() {
  Tally t;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> scale(0.1, 10);
  for (int i = 0; i < 1000; ++i) {
    const auto os = random_generating_space(rng);
    Vec x(os.dim());
    for (double& c : x) c = gauss(rng);
    const auto d = ando_decompose(x, os);
    const double tol = 1e-9 * std::max(1.0, max_abs(x));
    t.expect(max_abs_diff(sub(d.positive, d.negative), x) <= tol, "reconstruction");
    t.expect(cone_contains(os.cone, d.positive, 1e-9) && cone_contains(os.cone, d.negative, 1e-9), "parts in cone");
    const double lambda = scale(rng);
    const auto dl = ando_decompose(scaled(x, lambda), os);
    t.expect(std::abs(dl.value - lambda * d.value) <= 1e-9 * std::max(1.0, lambda * d.value), "homogeneity");
  }
  return t.done("1000 random vectors in generating polyhedral cones");
}

Outcome normality_transfer() {
  Tally t;
  const std::vector<OrderedSpace> spaces{
      {{2, NormKind::one()}, Cone::standard(2)},
      {{2, NormKind::sup()}, Cone::standard(2)},
      {{3, NormKind::one()}, Cone::standard(3)},
      {{2, NormKind::sup()}, Cone::polyhedral({{1, 0.5}, {1, -0.5}}, 2)},
      {{3, NormKind::weighted_one({1, 2, 0.5})}, Cone::polyhedral({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}, 3)},
  };
  std::size_t samples = 0;
  std::uint64_t seed = 11;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    for (std::size_t j = 0; j < spaces.size(); j += 2) {
      const auto rep = verify_normality_transfer(spaces[i], spaces[j], 67, seed++);
      samples += rep.samples;
      t.expect(rep.abs_violations == 0, "|T| <= ab|S| for pair " + std::to_string(i) + "," + std::to_string(j));
      t.expect(rep.normal_violations == 0, "normal transfer for pair " + std::to_string(i) + "," + std::to_string(j));
    }
  }
  t.expect(samples >= 1000, "sample count " + std::to_string(samples));
  for (std::size_t n : {2u, 3u, 4u}) {
    Vec axis(n, 0.0);
    axis[0] = 1.0;
    const OrderedSpace lor{{n, NormKind::two()}, Cone::lorentz(axis)};
    const auto a = normality_constant(lor, NormalityMode::absolute);
    t.expect(a.value <= 1.0 + 1e-9, "Lorentz absolute normality " + std::to_string(a.value));
  }
  return t.done(std::to_string(samples) + " operator pairs, Lorentz dims 2-4");
}

Outcome beurling_isomorphism() {
  Tally t;
  std::vector<FiniteGroup> groups;
  for (std::size_t n = 1; n <= 8; ++n) groups.push_back(FiniteGroup::cyclic(n));
  groups.push_back(klein_four());
  groups.push_back(FiniteGroup::symmetric(3));
  const auto a = algebras::scalars();
  for (const auto& g : groups) {
    const auto ds = make_system(a, g, trivial_action(g, a));
    const auto iso = beurling_vs_crossed(build_beurling(ds, validate_weight(g, Vec(g.order(), 1.0))));
    t.expect(std::abs(iso.lower.value - 1) <= 1e-9 && std::abs(iso.upper.value - 1) <= 1e-9,
             g.name() + ": c1, c2 = " + std::to_string(iso.lower.value) + ", " + std::to_string(iso.upper.value));
    t.expect(iso.isometric, g.name() + ": not isometric");
  }
  for (const char* name : {"z2_swap", "z2_weighted", "s3_natural", "upper_triangular"}) {
    const auto cfg = load_config_file(fixture(name));
    const auto iso = beurling_vs_crossed(build_beurling(cfg.system, validate_weight(cfg.system.group, *cfg.weight)));
    t.expect(iso.kernel_dim == 0, std::string(name) + ": kernel");
    t.expect(iso.lower.value > 0 && iso.lower.value <= iso.upper.value + 1e-9, std::string(name) + ": constants");
    t.expect(iso.cones_equal(), std::string(name) + ": cones");
  }
  return t.done("scalar algebra on 10 groups, 4 weighted fixtures");
}

Vec word_weight(const FiniteGroup& g) {
  Vec w(g.order(), 1.0);
  if (g.name().rfind("cyclic", 0) != 0) return w;
  for (std::size_t s = 0; s < g.order(); ++s)
    w[s] = std::pow(1.5, static_cast<double>(std::min(s, g.order() - s)));
  return w;
}

Outcome representation_bounds() {
  Tally t;
  std::size_t cases = 0;
  for (const auto& inst : corpus()) {
    const auto& ds = inst.system;
    if (!ds.algebra.left_identity()) continue;
    for (const Vec& w : {Vec(ds.order(), 1.0), word_weight(ds.group)}) {
      const auto ba = build_beurling(ds, validate_weight(ds.group, w));
      const auto rep = rep_bounds_check(ba, inst.reps);
      cases += rep.cases.size();
      t.expect(rep.violations() == 0, inst.label + ": bound violated");
    }
  }
  // classical corollary with w(e) = 1
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.25, 4);
  const OrderedSpace plane{{2, NormKind::one()}, Cone::standard(2)};
  for (std::size_t n : {2u, 4u, 6u}) {
    const auto g = FiniteGroup::cyclic(n);
    const auto w = validate_weight(g, word_weight(g));
    // U_r = D P^r D^{-1}, P the coordinate swap
    const double a = d(rng);
    const Matrix D{{a, 0}, {0, 1}}, Dinv{{1 / a, 0}, {0, 1}}, P{{0, 1}, {1, 0}};
    std::vector<Matrix> u;
    for (std::size_t r = 0; r < n; ++r) u.push_back(r % 2 == 0 ? Matrix::identity(2) : D * P * Dinv);
    const auto cr = classical_corollary(g, w, plane, u);
    t.expect(cr.formula_matches && std::abs(cr.t_norm.value - cr.formula) <= 1e-9,
             "classical norm " + std::to_string(cr.t_norm.value) + " vs " + std::to_string(cr.formula));
    t.expect(cr.roundtrip <= 1e-12 && cr.positive && cr.nondegenerate && cr.multiplicative, "classical certificates");
  }
  return t.done(std::to_string(cases) + " bound cases, 3 classical instances");
}

Outcome direct_sums() {
  Tally t;
  std::mt19937_64 rng(9);
  std::size_t samples = 0;
  for (const auto& inst : corpus()) {
    const auto& ds = inst.system;
    const RepClass rc(ds, inst.reps);
    for (SumExponent p : {SumExponent::one, SumExponent::two}) {
      const auto sum = direct_sum(rc, p);
      for (int k = 0; k < 5; ++k) {
        const auto f = random_function(ds, rng);
        const double s = sigma_r(rc, f);
        const double direct = op_norm(integrated_form(sum, f), sum.space.space, sum.space.space);
        t.expect(std::abs(direct - s) <= 1e-9 * std::max(1.0, s), inst.label + ": direct sum norm");
        ++samples;
      }
    }
  }
  return t.done(std::to_string(samples) + " functions, p in {1, 2}");
}

Outcome canonical_triples() {
  Tally t;
  std::size_t checked = 0;
  for (const auto& inst : corpus()) {
    const auto& ds = inst.system;
    const auto& u = ds.algebra.unit();
    if (!u || !cone_contains(ds.algebra.cone(), *u)) continue;
    const auto cp = build_crossed(ds, RepClass(ds, inst.reps));
    const auto rep = verify_canonical_triple(cp);
    t.expect(rep.centralizers.ok, inst.label + ": centralizers");
    t.expect(rep.regular_image.ok, inst.label + ": regular image");
    t.expect(rep.dense_image.ok, inst.label + ": dense image");
    t.expect(rep.cone_image.ok, inst.label + ": cone image");
    ++checked;
  }
  t.expect(checked > 0, "no unital systems");
  return t.done(std::to_string(checked) + " unital systems");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"worked two-point example", worked_example},
      {"correspondence round trips", roundtrips},
      {"positivity preservation", positivity},
      {"crossed product cone properties", cone_properties},
      {"positive-part decomposition", ando},
      {"normality transfer", normality_transfer},
      {"Beurling isomorphism", beurling_isomorphism},
      {"representation bounds", representation_bounds},
      {"direct sum isometry", direct_sums},
      {"canonical triple", canonical_triples},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
