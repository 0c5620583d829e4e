#include "owb/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace owb {

FiniteGroup klein_four() {
  GroupTable t(4, std::vector<std::size_t>(4));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) t[a][b] = a ^ b;
  return validate_group(t);
}

namespace {

std::set<std::size_t> cyclic_subgroup(const FiniteGroup& g, std::size_t h) {
  std::set<std::size_t> out{g.identity()};
  for (std::size_t x = h; x != g.identity(); x = g.mul(x, h)) out.insert(x);
  return out;
}

// Left cosets of H in a fixed order, and the action of each g on them.
std::vector<std::vector<std::size_t>> coset_action(const FiniteGroup& g, const std::set<std::size_t>& h) {
  std::vector<std::size_t> coset_of(g.order(), g.order());
  std::size_t count = 0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    if (coset_of[x] != g.order()) continue;
    for (std::size_t y : h) coset_of[g.mul(x, y)] = count;
    ++count;
  }
  std::vector<std::size_t> rep(count);
  for (std::size_t x = g.order(); x-- > 0;) rep[coset_of[x]] = x;
  std::vector<std::vector<std::size_t>> perm(g.order(), std::vector<std::size_t>(count));
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t i = 0; i < count; ++i) perm[a][i] = coset_of[g.mul(a, rep[i])];
  return perm;
}

std::string norm_name(const NormKind& n) {
  switch (n.family()) {
    case NormKind::Family::one: return "one";
    case NormKind::Family::sup: return "sup";
    case NormKind::Family::two: return "two";
    case NormKind::Family::weighted_one: return "weighted-one";
    default: return "composite";
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> random_permutation_rep(const FiniteGroup& g, std::size_t points,
                                                             std::mt19937_64& rng) {
  std::vector<std::vector<std::size_t>> perm(g.order());
  std::size_t left = points;
  while (left > 0) {
    std::vector<std::vector<std::vector<std::size_t>>> options{
        std::vector<std::vector<std::size_t>>(g.order(), std::vector<std::size_t>{0})};
    for (std::size_t h = 0; h < g.order(); ++h) {
      auto act = coset_action(g, cyclic_subgroup(g, h));
      if (act.front().size() <= left && act.front().size() > 1) options.push_back(std::move(act));
    }
    const auto& orbit = options[rng() % options.size()];
    const std::size_t offset = points - left;
    for (std::size_t a = 0; a < g.order(); ++a)
      for (std::size_t i : orbit[a]) perm[a].push_back(offset + i);
    left -= orbit.front().size();
  }
  return perm;
}

CorpusInstance random_instance(std::mt19937_64& rng, const CorpusOptions& opt) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  std::vector<std::pair<FiniteGroup, std::string>> groups;
  for (std::size_t n = 1; n <= opt.max_order; ++n) groups.emplace_back(FiniteGroup::cyclic(n), FiniteGroup::cyclic(n).name());
  if (opt.max_order >= 4) groups.emplace_back(klein_four(), "klein");
  if (opt.max_order >= 6) groups.emplace_back(FiniteGroup::symmetric(3), "symmetric(3)");
  auto [g, group_name] = groups[pick(groups.size())];

  const std::size_t max_dim = std::max<std::size_t>(1, std::min<std::size_t>(opt.max_dim, 4));
  const std::size_t n = 1 + pick(max_dim);
  std::vector<NormKind> norms{NormKind::one(), NormKind::sup()};
  {
    Vec w(n);
    for (auto& x : w) x = 0.5 + 2.0 * unit(rng);
    norms.push_back(NormKind::weighted_one(w));
  }
  const NormKind norm = norms[pick(norms.size())];

  enum Kind { scalars, pointwise, upper, chain, convolution, projection };
  std::vector<Kind> kinds{pointwise, convolution};
  if (n == 1) kinds.push_back(scalars);
  if (n == 3) kinds.insert(kinds.end(), {upper, chain});
  if (n >= 2 && opt.nonunital) kinds.push_back(projection);
  const Kind kind = kinds[pick(kinds.size())];

  std::ostringstream label;
  label << group_name << " | ";
  std::optional<OrderedAlgebra> a;
  switch (kind) {
    case scalars: a = algebras::scalars(norm); label << "scalars"; break;
    case pointwise: a = algebras::pointwise(n, norm); label << "pointwise(" << n << ")"; break;
    case upper: a = algebras::upper_triangular(norm); label << "upper-triangular"; break;
    case chain: a = algebras::chain(norm); label << "chain"; break;
    case convolution: a = algebras::cyclic_convolution(n, norm); label << "convolution(" << n << ")"; break;
    case projection: {
      Vec phi(n);
      for (auto& x : phi) x = 0.25 + unit(rng);
      a = algebras::left_projection(phi, norm);
      label << "left-projection(" << n << ")";
      break;
    }
  }
  label << " " << norm_name(norm);

  std::vector<Matrix> alpha;
  if (kind == pointwise && pick(3) != 0) {
    alpha = permutation_action(random_permutation_rep(g, n, rng));
    label << " | permutation";
  } else {
    alpha = trivial_action(g, *a);
    label << " | trivial";
  }

  CorpusInstance inst{label.str(), make_system(std::move(*a), std::move(g), std::move(alpha)), {}, false};
  const auto& ds = inst.system;
  inst.unital = ds.algebra.unit().has_value();

  inst.reps.push_back(reps::left_regular(ds));
  const bool standard = ds.algebra.cone().is_standard();
  if (ds.order() * ds.dim() <= 6 && pick(2) == 0) inst.reps.push_back(reps::induced_regular(ds));
  if (standard && pick(2) == 0) {
    Vec d(ds.dim());
    for (auto& x : d) x = 0.25 + 3.0 * unit(rng);
    inst.reps.push_back(reps::conjugate_diagonal(inst.reps.front(), d));
  }
  return inst;
}

std::vector<CorpusInstance> make_corpus(std::uint64_t seed, std::size_t count, const CorpusOptions& opt) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_instance(rng, opt));
  return out;
}

}  // namespace owb
