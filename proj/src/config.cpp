#include "owb/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace owb {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(at(path, key), "missing");
  return *it;
}

const json* optional_member(const json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& path, std::optional<std::size_t> size = std::nullopt) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  if (size && j.size() != *size)
    throw ConfigError(path, "expected " + std::to_string(*size) + " entries, found " + std::to_string(j.size()));
  return j;
}

Vec vec(const json& j, const std::string& path, std::optional<std::size_t> size = std::nullopt) {
  array(j, path, size);
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], at(path, i)));
  return v;
}

std::vector<std::size_t> indices(const json& j, const std::string& path) {
  array(j, path);
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(count(j[i], at(path, i)));
  return v;
}

Matrix matrix(const json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  array(j, path, rows);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const Vec row = vec(j[r], at(path, r), cols);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

std::vector<Matrix> matrices(const json& j, const std::string& path, std::size_t items, std::size_t n) {
  array(j, path, items);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < items; ++i) out.push_back(matrix(j[i], at(path, i), n, n));
  return out;
}

NormKind parse_norm(const json& j, const std::string& path, std::size_t dim) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "one") return NormKind::one();
    if (s == "sup") return NormKind::sup();
    if (s == "two") return NormKind::two();
    throw ConfigError(path, "unknown norm '" + s + "'");
  }
  if (const json* w = optional_member(j, "weighted_one")) {
    Vec weights = vec(*w, at(path, "weighted_one"), dim);
    for (std::size_t i = 0; i < dim; ++i)
      if (!(weights[i] > 0.0)) throw ConfigError(at(at(path, "weighted_one"), i), "weights must be positive");
    return NormKind::weighted_one(std::move(weights));
  }
  throw ConfigError(path, "expected one, sup, two or {weighted_one: [...]}");
}

Cone parse_cone(const json& j, const std::string& path, std::size_t dim) {
  if (j.is_string()) {
    if (j.get<std::string>() == "standard") return Cone::standard(dim);
    throw ConfigError(path, "unknown cone '" + j.get<std::string>() + "'");
  }
  if (const json* g = optional_member(j, "generators")) {
    const std::string p = at(path, "generators");
    array(*g, p);
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < g->size(); ++i) gens.push_back(vec((*g)[i], at(p, i), dim));
    return Cone::polyhedral(std::move(gens), dim);
  }
  if (const json* a = optional_member(j, "lorentz")) return Cone::lorentz(vec(*a, at(path, "lorentz"), dim));
  throw ConfigError(path, "expected standard, {generators: [...]} or {lorentz: axis}");
}

FiniteGroup parse_group(const json& j, const std::string& path) {
  if (const json* t = optional_member(j, "table")) {
    const std::string p = at(path, "table");
    array(*t, p);
    GroupTable table;
    for (std::size_t r = 0; r < t->size(); ++r) table.push_back(indices((*t)[r], at(p, r)));
    return validate_group(table);
  }
  const std::string named = text(member(j, "named", path), at(path, "named"));
  if (named == "klein") {
    GroupTable t(4, std::vector<std::size_t>(4));
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) t[a][b] = a ^ b;
    return validate_group(t);
  }
  const std::size_t n = count(member(j, "n", path), at(path, "n"));
  if (n == 0) throw ConfigError(at(path, "n"), "group order must be positive");
  if (named == "cyclic") return FiniteGroup::cyclic(n);
  if (named == "symmetric") {
    if (n > 4) throw ConfigError(at(path, "n"), "symmetric groups are limited to n <= 4");
    return FiniteGroup::symmetric(n);
  }
  throw ConfigError(at(path, "named"), "unknown group '" + named + "'");
}

OrderedAlgebra parse_algebra(const json& j, const std::string& path) {
  if (const json* nm = optional_member(j, "named")) {
    const std::string named = text(*nm, at(path, "named"));
    auto dim_of = [&](std::size_t fallback) {
      const json* d = optional_member(j, "dim");
      return d ? count(*d, at(path, "dim")) : fallback;
    };
    auto norm_of = [&](std::size_t dim, NormKind fallback) {
      const json* n = optional_member(j, "norm");
      return n ? parse_norm(*n, at(path, "norm"), dim) : fallback;
    };
    if (named == "scalars") return algebras::scalars(norm_of(1, NormKind::one()));
    if (named == "pointwise") {
      const std::size_t n = dim_of(2);
      return algebras::pointwise(n, norm_of(n, NormKind::sup()));
    }
    if (named == "upper_triangular") return algebras::upper_triangular(norm_of(3, NormKind::one()));
    if (named == "chain") return algebras::chain(norm_of(3, NormKind::sup()));
    if (named == "cyclic_convolution") {
      const std::size_t n = dim_of(2);
      return algebras::cyclic_convolution(n, norm_of(n, NormKind::one()));
    }
    if (named == "left_projection") {
      const Vec phi = vec(member(j, "phi", path), at(path, "phi"));
      return algebras::left_projection(phi, norm_of(phi.size(), NormKind::one()));
    }
    throw ConfigError(at(path, "named"), "unknown algebra '" + named + "'");
  }
  const std::size_t n = count(member(j, "dim", path), at(path, "dim"));
  if (n == 0) throw ConfigError(at(path, "dim"), "dimension must be positive");
  AlgebraSpec spec{OrderedSpace({n, parse_norm(member(j, "norm", path), at(path, "norm"), n)},
                                parse_cone(member(j, "cone", path), at(path, "cone"), n)),
                   vec(member(j, "constants", path), at(path, "constants"), n * n * n),
                   std::nullopt, std::nullopt, std::nullopt};
  if (const json* u = optional_member(j, "unit")) spec.unit = vec(*u, at(path, "unit"), n);
  if (const json* u = optional_member(j, "left_identity")) spec.left_identity = vec(*u, at(path, "left_identity"), n);
  if (const json* u = optional_member(j, "right_identity")) spec.right_identity = vec(*u, at(path, "right_identity"), n);
  return validate_algebra(std::move(spec));
}

std::vector<Matrix> parse_action(const json& j, const std::string& path, const FiniteGroup& g,
                                 const OrderedAlgebra& a) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "trivial") return trivial_action(g, a);
    if (s == "regular") {
      if (a.dim() != g.order()) throw ConfigError(path, "regular action needs dim A = |G|");
      return validate_action(g, a, regular_permutation_action(g));
    }
    throw ConfigError(path, "unknown action '" + s + "'");
  }
  if (const json* p = optional_member(j, "permutation")) {
    const std::string pp = at(path, "permutation");
    array(*p, pp, g.order());
    std::vector<std::vector<std::size_t>> perms;
    for (std::size_t s = 0; s < g.order(); ++s) {
      perms.push_back(indices((*p)[s], at(pp, s)));
      if (perms.back().size() != a.dim()) throw ConfigError(at(pp, s), "permutation length must equal dim A");
      for (std::size_t i = 0; i < a.dim(); ++i)
        if (perms.back()[i] >= a.dim()) throw ConfigError(at(at(pp, s), i), "index out of range");
    }
    return validate_action(g, a, permutation_action(perms));
  }
  if (const json* m = optional_member(j, "matrices"))
    return validate_action(g, a, matrices(*m, at(path, "matrices"), g.order(), a.dim()));
  throw ConfigError(path, "expected trivial, regular, {permutation: ...} or {matrices: ...}");
}

SumExponent parse_exponent(const json& j, const std::string& path) {
  const std::string s = text(j, path);
  if (s == "one") return SumExponent::one;
  if (s == "two") return SumExponent::two;
  if (s == "sup") return SumExponent::sup;
  throw ConfigError(path, "expected one, two or sup");
}

CovariantRep parse_rep(const json& j, const std::string& path, const DynamicalSystem& ds,
                       const std::vector<CovariantRep>& earlier) {
  auto earlier_rep = [&](const json& idx, const std::string& p) -> const CovariantRep& {
    const std::size_t i = count(idx, p);
    if (i >= earlier.size()) throw ConfigError(p, "refers to a representation that is not defined earlier");
    return earlier[i];
  };
  if (const json* nm = optional_member(j, "named")) {
    const std::string named = text(*nm, at(path, "named"));
    if (named == "left_regular") return reps::left_regular(ds);
    if (named == "induced_regular") {
      const json* w = optional_member(j, "weights");
      return reps::induced_regular(ds, w ? vec(*w, at(path, "weights"), ds.order()) : Vec{});
    }
    if (named == "conjugate_diagonal") {
      const CovariantRep& base = earlier_rep(member(j, "of", path), at(path, "of"));
      return reps::conjugate_diagonal(base, vec(member(j, "diagonal", path), at(path, "diagonal"), base.dim()));
    }
    if (named == "direct_sum") {
      const std::string p = at(path, "of");
      std::vector<CovariantRep> parts;
      for (std::size_t i = 0; i < array(member(j, "of", path), p).size(); ++i)
        parts.push_back(earlier_rep(j["of"][i], at(p, i)));
      const json* e = optional_member(j, "p");
      return direct_sum(RepClass(ds, std::move(parts)), e ? parse_exponent(*e, at(path, "p")) : SumExponent::one);
    }
    throw ConfigError(at(path, "named"), "unknown representation '" + named + "'");
  }
  OrderedSpace space = parse_ordered_space(member(j, "space", path), at(path, "space"));
  const std::size_t n = space.dim();
  auto pi = matrices(member(j, "pi", path), at(path, "pi"), ds.dim(), n);
  auto u = matrices(member(j, "u", path), at(path, "u"), ds.order(), n);
  const json* label = optional_member(j, "label");
  return make_rep(std::move(space), std::move(pi), std::move(u), label ? text(*label, at(path, "label")) : "");
}

}  // namespace

NormedSpace parse_space(const json& j, const std::string& path) {
  const std::size_t n = count(member(j, "dim", path), at(path, "dim"));
  if (n == 0) throw ConfigError(at(path, "dim"), "dimension must be positive");
  const json* norm = optional_member(j, "norm");
  return {n, norm ? parse_norm(*norm, at(path, "norm"), n) : NormKind::one()};
}

OrderedSpace parse_ordered_space(const json& j, const std::string& path) {
  NormedSpace s = parse_space(j, path);
  const json* cone = optional_member(j, "cone");
  Cone c = cone ? parse_cone(*cone, at(path, "cone"), s.dim) : Cone::standard(s.dim);
  return OrderedSpace(std::move(s), std::move(c));
}

SystemConfig load_config(const json& doc) {
  const std::string root = "$";
  if (!doc.is_object()) throw ConfigError(root, "expected an object");
  const json& version = member(doc, "schema_version", root);
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw ConfigError(at(root, "schema_version"), "unsupported schema version (expected " +
                                                      std::to_string(kSchemaVersion) + ")");
  static const std::vector<std::string> known{"schema_version", "name", "group", "algebra",
                                              "action", "reps", "weight", "classical"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(at(root, key), "unknown key");

  const json* name = optional_member(doc, "name");
  FiniteGroup g = parse_group(member(doc, "group", root), at(root, "group"));
  OrderedAlgebra a = parse_algebra(member(doc, "algebra", root), at(root, "algebra"));
  const json* action = optional_member(doc, "action");
  std::vector<Matrix> alpha = action ? parse_action(*action, at(root, "action"), g, a) : trivial_action(g, a);
  SystemConfig cfg{name ? text(*name, at(root, "name")) : std::string{}, make_system(std::move(a), std::move(g), std::move(alpha)),
                   {}, std::nullopt, std::nullopt};
  if (const json* r = optional_member(doc, "reps")) {
    const std::string p = at(root, "reps");
    array(*r, p);
    for (std::size_t i = 0; i < r->size(); ++i) {
      CovariantRep rep = parse_rep((*r)[i], at(p, i), cfg.system, cfg.reps);
      if (rep.label.empty()) rep.label = "rep " + std::to_string(i);
      cfg.reps.push_back(std::move(rep));
    }
  }
  if (const json* w = optional_member(doc, "weight")) cfg.weight = vec(*w, at(root, "weight"), cfg.system.order());
  if (const json* c = optional_member(doc, "classical")) {
    const std::string p = at(root, "classical");
    OrderedSpace space = parse_ordered_space(member(*c, "space", p), at(p, "space"));
    auto u = matrices(member(*c, "u", p), at(p, "u"), cfg.system.order(), space.dim());
    cfg.classical = ClassicalSpec{std::move(space), std::move(u)};
  }
  return cfg;
}

SystemConfig load_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("$", "cannot open " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  SystemConfig cfg = load_config(doc);
  if (cfg.name.empty()) cfg.name = file.stem().string();
  return cfg;
}

}  // namespace owb
