#include "owb/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "owb/beurling.hpp"
#include "owb/config.hpp"
#include "owb/correspond.hpp"
#include "owb/crossed.hpp"

namespace owb {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kRoundtripTol = 1e-9;

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream os;
  os << std::setprecision(12);
  (os << ... << parts);
  return os.str();
}

std::string fmt(std::span<const double> v) {
  std::ostringstream os;
  os << std::setprecision(12) << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i] + 0.0;
  os << ')';
  return os.str();
}

void add_certificate(Report& rep, const std::string& name, const Certificate& c) {
  rep.check(name, c.ok, c.method, c.witness);
}

// Loads the configuration, turning schema and axiom failures into report lines.
std::optional<SystemConfig> load(Report& rep, const std::filesystem::path& file) {
  try {
    SystemConfig cfg = load_config_file(file);
    rep.subject = cfg.name;
    return cfg;
  } catch (const ConfigError& e) {
    rep.add("config schema", Status::fail, Method::exact, e.what());
  } catch (const ValidationError& e) {
    std::string detail = e.what();
    for (const auto& w : e.witnesses()) detail += "; " + w;
    rep.add("config validation", Status::fail, Method::exact, detail);
  } catch (const std::exception& e) {
    rep.add("config", Status::fail, Method::exact, e.what());
  }
  rep.subject = file.stem().string();
  return std::nullopt;
}

bool positive_left_identity(const DynamicalSystem& ds) {
  const auto& u = ds.algebra.left_identity();
  return u && cone_contains(ds.algebra.cone(), *u);
}

void certify_reps(Report& rep, const SystemConfig& cfg) {
  for (const auto& r : cfg.reps) {
    const std::string p = "rep '" + r.label + "' ";
    add_certificate(rep, p + "shapes", check_shapes(r, cfg.system));
    add_certificate(rep, p + "pi homomorphism", check_pi_homomorphism(r, cfg.system));
    add_certificate(rep, p + "U homomorphism", check_u_homomorphism(r, cfg.system));
    add_certificate(rep, p + "covariance", check_covariant(r, cfg.system));
    add_certificate(rep, p + "positivity", check_positive(r, cfg.system));
    add_certificate(rep, p + "non-degeneracy", check_nondegenerate(r));
  }
}

void crossed_basics(Report& rep, const CrossedProduct& cp) {
  Entry& k = rep.add("kernel of sigma^R", Status::info);
  put(k, "kernel_dim", static_cast<double>(cp.kernel().size()));
  put(k, "quotient_dim", static_cast<double>(cp.dim()));
  for (std::size_t i = 0; i < cp.kernel().size(); ++i) k.detail += (i ? " " : "span ") + fmt(cp.kernel()[i]);
  add_certificate(rep, "product well defined", check_well_defined(cp));
  add_certificate(rep, "kernel invariant under i_A, i_G", check_kernel_invariance(cp));
  add_certificate(rep, "kernel is a two-sided ideal", check_ideal(cp, 20, 3));
  if (cp.system().algebra.cone().is_standard()) {
    const OrderIdealReport oi = kernel_order_ideal(cp);
    Entry& e = rep.add("kernel is an order ideal", Status::info);
    e.values["is_order_ideal"] = oi.is_order_ideal;
    if (oi.witness) e.detail = "|k| leaves the kernel for k = " + fmt(*oi.witness);
  }
  const ConvolutionPositivity pos = convolve_positivity_check(cp.system(), 50, 5);
  rep.check("convolution of positives is positive", pos.violations == 0, Method::sampled,
            pos.witnesses.empty() ? "" : pos.witnesses.front());
  if (cp.identity()) {
    Entry& e = rep.add("quotient identity", Status::info);
    e.detail = fmt(*cp.identity());
    e.values["left"] = cp.identity_is_left();
    e.values["right"] = cp.identity_is_right();
  }
}

void cone_section(Report& rep, const CrossedProduct& cp) {
  const CrossedConeReport cr = crossed_cone_report(cp);
  rep.check("quotient cone generating", cr.cone.generating || !cr.generating_predicted, Method::exact,
            cr.generating_predicted ? "predicted by A+ generating" : "no prediction");
  rep.entries.back().values["generating"] = cr.cone.generating;
  rep.check("quotient cone proper", cr.cone.proper || !cr.proper_predicted, Method::exact,
            cr.proper_predicted ? "predicted by positive reps with proper operator cones" : "no prediction");
  rep.entries.back().values["proper"] = cr.cone.proper;
  Entry& c = rep.add("cone constants", Status::info);
  if (cr.cone.normality) put(c, "normality", *cr.cone.normality);
  if (cr.cone.abs_normality) put(c, "absolute_normality", *cr.cone.abs_normality);
  if (cr.cone.abs_conormality) put(c, "absolute_conormality", *cr.cone.abs_conormality);
  if (cr.cone.sum_conormality) put(c, "sum_conormality", *cr.cone.sum_conormality);
  if (cr.lattice_predicted && cr.cone.abs_normality) {
    const Tagged& n = *cr.cone.abs_normality;
    rep.check("1-absolutely normal (lattice-valued reps)", n.value <= 1.0 + kTol, n.method, cat("measured ", n.value));
  }
}

void correspond_section(Report& rep, const CrossedProduct& cp) {
  const auto& ds = cp.system();
  for (const auto& r : cp.reps().reps()) {
    const std::string p = "rep '" + r.label + "' ";
    try {
      const Continuity c = r_continuity(cp, r);
      Entry& e = rep.check(p + "R-continuous", c.continuous);
      put(e, "constant", c.constant);
      const AlgebraRep t = forward(cp, r);
      add_certificate(rep, p + "forward is positive", check_positive(cp, t));
      add_certificate(rep, p + "forward is multiplicative", check_multiplicative(cp, t));
      if (!positive_left_identity(ds)) {
        rep.add(p + "round trip", Status::skipped, Method::exact, "no positive left identity");
        continue;
      }
      const double dev = deviation(backward(cp, t), r);
      Entry& d = rep.check(p + "backward(forward) = identity", dev <= kRoundtripTol, Method::exact, cat("deviation ", dev));
      put(d, "deviation", dev);
    } catch (const std::exception& e) {
      rep.add(p + "correspondence", Status::fail, Method::exact, e.what());
    }
  }
  if (!positive_left_identity(ds)) return;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 3; ++i) {
    const std::string p = cat("random algebra rep ", i, " ");
    try {
      const AlgebraRep t = random_algebra_rep(cp, rng);
      const CovariantRep back = backward(cp, t);
      add_certificate(rep, p + "backward is positive", check_positive(back, ds));
      const double dev = deviation(forward(cp, back), t);
      Entry& d = rep.check(p + "forward(backward) = identity", dev <= kRoundtripTol, Method::exact, cat("deviation ", dev));
      put(d, "deviation", dev);
      add_certificate(rep, p + "composition law", check_composition_law(cp, t, 10, 17 + i));
    } catch (const std::exception& e) {
      rep.add(p + "correspondence", Status::fail, Method::exact, e.what());
    }
  }
}

void triple_section(Report& rep, const CrossedProduct& cp) {
  if (!cp.system().algebra.unit() || !positive_left_identity(cp.system())) {
    rep.add("canonical triple", Status::skipped, Method::exact, "needs a unital algebra with positive identity");
    return;
  }
  const TripleReport t = verify_canonical_triple(cp);
  add_certificate(rep, "(1) i_A, i_G are left centralizers", t.centralizers);
  add_certificate(rep, "(2)+(3) image of i_A x i_G is lambda(E)", t.regular_image);
  add_certificate(rep, "dense image", t.dense_image);
  add_certificate(rep, "(4) positive image cone", t.cone_image);
  Entry& b = rep.add("lambda bipositive", t.bipositive_lambda.ok ? Status::pass : Status::info, t.bipositive_lambda.method,
                     t.bipositive_lambda.witness);
  for (const auto& n : t.notes) b.detail += (b.detail.empty() ? "" : "; ") + n;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::sampled: return "sampled";
    case Status::info: return "info";
    case Status::skipped: return "skipped";
  }
  return "?";
}

void put(Entry& e, const std::string& key, const Tagged& t) {
  e.values[key] = ojson{{"value", t.value}, {"method", to_string(t.method)}};
}

void put(Entry& e, const std::string& key, double exact_value) { put(e, key, Tagged{exact_value, Method::exact, ""}); }

Entry& Report::add(std::string name, Status status, Method method, std::string detail) {
  entries.push_back(Entry{std::move(name), status, method, std::move(detail), ojson::object()});
  return entries.back();
}

Entry& Report::check(std::string name, bool ok, Method method, std::string detail) {
  const Status s = !ok ? Status::fail : method == Method::sampled ? Status::sampled : Status::pass;
  return add(std::move(name), s, method, std::move(detail));
}

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const Entry& e) { return e.status == Status::fail; }));
}

ojson Report::to_json() const {
  ojson out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = command;
  out["subject"] = subject;
  ojson list = ojson::array();
  for (const auto& e : entries) {
    ojson j;
    j["name"] = e.name;
    j["status"] = to_string(e.status);
    j["method"] = to_string(e.method);
    if (!e.detail.empty()) j["detail"] = e.detail;
    if (!e.values.empty()) j["values"] = e.values;
    list.push_back(std::move(j));
  }
  out["entries"] = std::move(list);
  out["failures"] = failures();
  return out;
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "owb " << command << ": " << subject << "\n";
  for (const auto& e : entries) {
    os << "  [" << to_string(e.status) << "] " << e.name << " (" << to_string(e.method) << ")";
    for (const auto& [key, v] : e.values.items()) {
      os << " " << key << "=";
      if (v.is_object() && v.contains("value"))
        os << v["value"].get<double>() << "/" << v["method"].get<std::string>();
      else
        os << v.dump();
    }
    if (!e.detail.empty()) os << ": " << e.detail;
    os << "\n";
  }
  os << failures() << " failure(s)\n";
  return os.str();
}

// ------------------------------------------------------------- commands

Report cmd_check(const std::filesystem::path& config) {
  Report rep;
  rep.command = "check";
  auto cfg = load(rep, config);
  if (!cfg) return rep;
  const auto& ds = cfg->system;
  Entry& g = rep.add("group axioms", Status::pass);
  put(g, "order", static_cast<double>(ds.order()));
  Entry& a = rep.add("algebra axioms", Status::pass);
  put(a, "dim", static_cast<double>(ds.dim()));
  put(a, "multiplication_bound", ds.algebra.multiplication_bound());
  if (ds.algebra.unit()) a.detail = "unit " + fmt(*ds.algebra.unit());
  else if (ds.algebra.left_identity()) a.detail = "left identity " + fmt(*ds.algebra.left_identity());
  Entry& act = rep.add("positive action by automorphisms", Status::pass);
  put(act, "c_alpha", ds.c_alpha);
  act.values["isometric"] = ds.isometric;
  certify_reps(rep, *cfg);
  if (cfg->weight) {
    try {
      const Weight w = validate_weight(ds.group, *cfg->weight);
      put(rep.add("weight submultiplicative", Status::pass), "at_identity", w.at_identity);
    } catch (const ValidationError& e) {
      rep.add("weight submultiplicative", Status::fail, Method::exact,
              e.witnesses().empty() ? e.what() : e.witnesses().front());
    }
  }
  return rep;
}

Report cmd_crossed(const std::filesystem::path& config, const CrossedFlags& flags) {
  Report rep;
  rep.command = "crossed";
  auto cfg = load(rep, config);
  if (!cfg) return rep;
  if (cfg->reps.empty()) {
    rep.add("representations", Status::fail, Method::exact, "the crossed product needs at least one representation");
    return rep;
  }
  certify_reps(rep, *cfg);
  try {
    const CrossedProduct cp = build_crossed(cfg->system, RepClass(cfg->system, cfg->reps));
    crossed_basics(rep, cp);
    if (flags.report_cone) cone_section(rep, cp);
    if (flags.correspond) correspond_section(rep, cp);
    if (flags.triple) triple_section(rep, cp);
  } catch (const std::exception& e) {
    rep.add("crossed product", Status::fail, Method::exact, e.what());
  }
  return rep;
}

Report cmd_beurling(const std::filesystem::path& config, const BeurlingFlags& flags) {
  Report rep;
  rep.command = "beurling";
  auto cfg = load(rep, config);
  if (!cfg) return rep;
  if (!cfg->weight) {
    rep.add("weight", Status::fail, Method::exact, "configuration has no weight");
    return rep;
  }
  const auto& ds = cfg->system;
  std::optional<Weight> w;
  try {
    w = validate_weight(ds.group, *cfg->weight);
    put(rep.add("weight submultiplicative", Status::pass), "at_identity", w->at_identity);
  } catch (const ValidationError& e) {
    rep.add("weight submultiplicative", Status::fail, Method::exact,
            e.witnesses().empty() ? e.what() : e.witnesses().front());
    return rep;
  }
  try {
    const BeurlingAlgebra ba = build_beurling(ds, *w);
    const Tagged sub = submultiplicativity(ba, 200, 29);
    put(rep.check("|f*g| <= C_alpha |f||g|", sub.value <= 1.0 + kTol, Method::sampled), "worst_ratio", sub);
    const CovariantRep lt = lambda_tilde_Lambda(ba);
    rep.add("lambda~ x Lambda certified, |Lambda_r| <= w(r)", Status::pass);
    if (!ds.algebra.right_identity()) {
      rep.add("Beurling vs crossed product", Status::skipped, Method::exact, "A has no right identity");
    } else {
      const IsomorphismReport iso = beurling_vs_crossed(ba);
      put(rep.check("sigma^R is a norm (kernel {0})", iso.kernel_dim == 0), "kernel_dim",
          static_cast<double>(iso.kernel_dim));
      Entry& c = rep.check("two-sided norm equivalence", iso.lower.value > 0.0 && iso.lower.value <= iso.upper.value * (1 + kTol),
                           iso.lower.method == Method::exact && iso.upper.method == Method::exact ? Method::exact
                                                                                                  : Method::sampled);
      put(c, "c1", iso.lower);
      put(c, "c2", iso.upper);
      rep.check("crossed cone inside Beurling cone", iso.crossed_cone_in_beurling);
      rep.check("Beurling cone inside crossed cone", iso.beurling_cone_in_crossed);
      Entry& i = rep.check("isometric when predicted", iso.isometric || !iso.isometric_predicted);
      i.values["isometric"] = iso.isometric;
      i.values["predicted"] = iso.isometric_predicted;
    }
    if (flags.bounds) {
      std::vector<CovariantRep> corpus = cfg->reps;
      corpus.push_back(lt);
      const BoundsReport br = rep_bounds_check(ba, corpus);
      for (const auto& bc : br.cases) {
        Entry& e = rep.check("bounds (1)-(3) for '" + bc.label + "'", bc.violations.empty(), bc.t_norm.method,
                             bc.violations.empty() ? "" : bc.violations.front());
        put(e, "T_norm", bc.t_norm);
        put(e, "C_U", bc.c_u);
        put(e, "pi_norm", bc.pi_norm);
        if (bc.pi_t_norm) put(e, "pi_T_norm", *bc.pi_t_norm);
        put(e, "M", bc.identity_norm);
      }
      for (const auto& n : br.notes) rep.add("bounds", Status::info, Method::exact, n);
    }
    if (flags.lattice) {
      if (!ba.lattice()) {
        rep.add("lattice structure", Status::skipped, Method::exact, "A is not a coordinate lattice");
      } else {
        const LatticeReport lr = lattice_report(ba, 200, 31);
        rep.check("normed lattice laws", lr.violations() == 0, Method::sampled,
                  lr.witnesses.empty() ? "" : lr.witnesses.front());
        rep.add("lattice algebra", lr.lattice_algebra ? Status::pass : Status::info, Method::exact,
                lr.lattice_algebra ? "alpha acts by bipositive isometries" : "alpha is not isometric");
      }
    }
    if (flags.classical) {
      std::optional<ClassicalSpec> spec = cfg->classical;
      if (!spec && ds.dim() == 1 && !cfg->reps.empty()) spec = ClassicalSpec{cfg->reps.front().space, cfg->reps.front().u};
      if (!spec) {
        rep.add("classical corollary", Status::skipped, Method::exact, "no classical operators given");
      } else {
        const ClassicalReport cr = classical_corollary(ds.group, *w, spec->space, spec->u);
        Entry& e = rep.check("|T^U| = sup_r |U_r|/w(r)", cr.formula_matches, cr.t_norm.method);
        put(e, "T_norm", cr.t_norm);
        put(e, "formula", cr.formula);
        rep.check("T^U positive", cr.positive);
        rep.check("T^U non-degenerate", cr.nondegenerate);
        rep.check("T^U multiplicative", cr.multiplicative);
        put(rep.check("U^T_s = U_s", cr.roundtrip <= kRoundtripTol), "deviation", cr.roundtrip);
      }
    }
  } catch (const std::exception& e) {
    rep.add("Beurling algebra", Status::fail, Method::exact, e.what());
  }
  return rep;
}

Report cmd_random(std::uint64_t seed, std::size_t count, const CorpusOptions& caps) {
  Report rep;
  rep.command = "random";
  rep.subject = cat("seed ", seed, ", count ", count);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const CorpusInstance inst = random_instance(rng, caps);
    const auto& ds = inst.system;
    std::vector<std::string> failed;
    std::size_t checks = 0;
    auto expect = [&](bool ok, const std::string& what) {
      ++checks;
      if (!ok) failed.push_back(what);
    };
    try {
      for (const auto& r : inst.reps) expect(certify(r, ds).ok, "certify " + r.label);
      const CrossedProduct cp = build_crossed(ds, RepClass(ds, inst.reps));
      expect(check_well_defined(cp).ok, "well defined");
      expect(check_kernel_invariance(cp).ok, "kernel invariance");
      expect(check_ideal(cp, 5, seed + i).ok, "ideal");
      expect(is_generating(cp.cone()) || !is_generating(ds.algebra.cone()), "generating");
      const bool pos_id = positive_left_identity(ds);
      for (const auto& r : inst.reps) {
        const AlgebraRep t = forward(cp, r);
        expect(check_positive(cp, t).ok, "forward positive");
        if (pos_id) expect(deviation(backward(cp, t), r) <= kRoundtripTol, "backward(forward)");
      }
      if (pos_id) {
        const AlgebraRep t = random_algebra_rep(cp, rng);
        expect(deviation(forward(cp, backward(cp, t)), t) <= kRoundtripTol, "forward(backward)");
        if (ds.algebra.unit()) expect(verify_canonical_triple(cp).all(), "canonical triple");
      }
      for (SumExponent p : {SumExponent::one, SumExponent::two}) {
        const CovariantRep sum = direct_sum(cp.reps(), p);
        const CcFunction f = random_function(ds, rng);
        const double lhs = op_norm(integrated_form(sum, f), sum.space.space, sum.space.space);
        const double rhs = sigma_r(cp.reps(), f);
        expect(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs), "direct-sum isometry");
      }
      const BeurlingAlgebra ba = build_beurling(ds, validate_weight(ds.group, Vec(ds.order(), 1.0)));
      expect(rep_bounds_check(ba, inst.reps).violations() == 0, "representation bounds");
    } catch (const std::exception& e) {
      failed.push_back(e.what());
    }
    std::string detail;
    for (const auto& f : failed) detail += (detail.empty() ? "" : "; ") + f;
    Entry& e = rep.check(cat("instance ", i, ": ", inst.label), failed.empty(), Method::exact, detail);
    put(e, "checks", static_cast<double>(checks));
  }
  return rep;
}

}  // namespace owb
