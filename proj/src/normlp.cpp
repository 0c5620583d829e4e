#include "owb/normlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace owb {

namespace {

NormNode leaf(NormNode::Kind kind, Matrix map, Vec weights = {}) {
  NormNode n;
  n.kind = kind;
  if (kind == NormNode::Kind::one && weights.empty()) weights.assign(map.rows(), 1.0);
  n.map = std::move(map);
  n.weights = std::move(weights);
  return n;
}

NormNode inner(NormNode::Kind kind, std::vector<NormNode> children) {
  NormNode n;
  n.kind = kind;
  n.children = std::move(children);
  return n;
}

Matrix selector(std::size_t offset, std::size_t dim, std::size_t total, double scale) {
  Matrix s(dim, total);
  for (std::size_t k = 0; k < dim; ++k) s(k, offset + k) = scale;
  return s;
}

}  // namespace

NormNode compose(NormNode node, const Matrix& m) {
  if (node.kind == NormNode::Kind::one || node.kind == NormNode::Kind::sup) {
    node.map = node.map * m;
    return node;
  }
  for (auto& c : node.children) c = compose(std::move(c), m);
  return node;
}

std::optional<NormNode> polyhedral_model(const NormedSpace& space) {
  const auto& n = space.norm;
  const std::size_t d = space.dim;
  using F = NormKind::Family;
  switch (n.family()) {
    case F::one:
      return leaf(NormNode::Kind::one, Matrix::identity(d));
    case F::weighted_one:
      return leaf(NormNode::Kind::one, Matrix::identity(d), n.weights());
    case F::sup:
      return leaf(NormNode::Kind::sup, Matrix::identity(d));
    case F::two:
      return std::nullopt;
    case F::block_sum: {
      const auto& blocks = n.blocks();
      if (n.exponent() == SumExponent::two && blocks.size() != 1) return std::nullopt;
      std::vector<NormNode> parts;
      std::size_t off = 0;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        auto b = polyhedral_model(blocks[i]);
        if (!b) return std::nullopt;
        parts.push_back(compose(std::move(*b), selector(off, blocks[i].dim, d, n.scales()[i])));
        off += blocks[i].dim;
      }
      if (parts.size() == 1) return parts.front();
      return inner(n.exponent() == SumExponent::one ? NormNode::Kind::sum : NormNode::Kind::max,
                   std::move(parts));
    }
    case F::operator_max: {
      std::vector<NormNode> parts;
      for (const auto& fam : n.families()) {
        auto target = polyhedral_model(fam.space);
        auto verts = unit_ball_vertices(fam.space, 1u << 12);
        if (!target || !verts) return std::nullopt;
        for (const auto& v : *verts) {
          Matrix k(fam.space.dim, d);
          for (std::size_t i = 0; i < d; ++i) {
            const Vec col = fam.images[i] * v;
            for (std::size_t r = 0; r < col.size(); ++r) k(r, i) = col[r];
          }
          parts.push_back(compose(*target, k));
        }
      }
      if (parts.size() == 1) return parts.front();
      return inner(NormNode::Kind::max, std::move(parts));
    }
  }
  return std::nullopt;
}

double evaluate(const NormNode& node, std::span<const double> x) {
  switch (node.kind) {
    case NormNode::Kind::one: {
      const Vec y = node.map * x;
      double s = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k) s += node.weights[k] * std::abs(y[k]);
      return s;
    }
    case NormNode::Kind::sup:
      return max_abs(node.map * x);
    case NormNode::Kind::sum: {
      double s = 0.0;
      for (const auto& c : node.children) s += evaluate(c, x);
      return s;
    }
    case NormNode::Kind::max: {
      double m = 0.0;
      for (const auto& c : node.children) m = std::max(m, evaluate(c, x));
      return m;
    }
  }
  return 0.0;
}

std::optional<std::vector<Vec>> dual_functionals(const NormNode& node, std::size_t cap) {
  std::vector<Vec> out;
  switch (node.kind) {
    case NormNode::Kind::one: {
      const std::size_t m = node.map.rows();
      if (m >= 63 || (std::size_t{1} << m) > cap) return std::nullopt;
      const Matrix t = node.map.transpose();
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        Vec u(m);
        for (std::size_t k = 0; k < m; ++k) u[k] = ((mask >> k) & 1u ? -1.0 : 1.0) * node.weights[k];
        out.push_back(t * u);
      }
      return out;
    }
    case NormNode::Kind::sup: {
      if (2 * node.map.rows() > cap) return std::nullopt;
      for (std::size_t k = 0; k < node.map.rows(); ++k) {
        Vec r(node.map.row(k).begin(), node.map.row(k).end());
        out.push_back(r);
        out.push_back(scaled(r, -1.0));
      }
      return out;
    }
    case NormNode::Kind::max: {
      for (const auto& c : node.children) {
        auto f = dual_functionals(c, cap);
        if (!f || out.size() + f->size() > cap) return std::nullopt;
        out.insert(out.end(), f->begin(), f->end());
      }
      return out;
    }
    case NormNode::Kind::sum: {
      out.push_back({});
      for (const auto& c : node.children) {
        auto f = dual_functionals(c, cap);
        if (!f || out.size() * f->size() > cap) return std::nullopt;
        std::vector<Vec> next;
        for (const auto& a : out)
          for (const auto& b : *f) next.push_back(a.empty() ? b : add(a, b));
        out = std::move(next);
      }
      return out;
    }
  }
  return std::nullopt;
}

AffineExpr AffineExpr::variables(std::size_t first, std::size_t dim) {
  AffineExpr e;
  e.coords.resize(dim);
  e.offset.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) e.coords[i] = {{first + i, 1.0}};
  return e;
}

AffineExpr apply(const Matrix& m, const AffineExpr& x) {
  if (m.cols() != x.dim()) throw DimensionError("affine expression shape mismatch");
  AffineExpr y;
  y.coords.resize(m.rows());
  y.offset.assign(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const double c = m(r, i);
      if (c == 0.0) continue;
      for (const auto& [var, coef] : x.coords[i]) y.coords[r].emplace_back(var, c * coef);
      y.offset[r] += c * x.offset[i];
    }
  return y;
}

AffineExpr operator+(const AffineExpr& a, const AffineExpr& b) {
  if (a.dim() != b.dim()) throw DimensionError("affine expression length mismatch");
  AffineExpr r = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r.coords[i].insert(r.coords[i].end(), b.coords[i].begin(), b.coords[i].end());
    r.offset[i] += b.offset[i];
  }
  return r;
}

AffineExpr operator-(const AffineExpr& a, const AffineExpr& b) {
  if (a.dim() != b.dim()) throw DimensionError("affine expression length mismatch");
  AffineExpr r = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (const auto& [var, coef] : b.coords[i]) r.coords[i].emplace_back(var, -coef);
    r.offset[i] -= b.offset[i];
  }
  return r;
}

Vec evaluate(const AffineExpr& e, std::span<const double> vars) {
  Vec out(e.dim());
  for (std::size_t i = 0; i < e.dim(); ++i) {
    double v = e.offset[i];
    for (const auto& [var, coef] : e.coords[i]) v += coef * vars[var];
    out[i] = v;
  }
  return out;
}

namespace {

// Adds  +-y_k - s <= -+offset  (i.e. s >= |y_k|).
void dominate(LpBuilder& lp, const AffineExpr& y, std::size_t k, std::size_t s) {
  LpBuilder::Terms up = y.coords[k];
  up.emplace_back(s, -1.0);
  lp.add_less_equal(up, -y.offset[k]);
  LpBuilder::Terms down;
  for (const auto& [var, coef] : y.coords[k]) down.emplace_back(var, -coef);
  down.emplace_back(s, -1.0);
  lp.add_less_equal(down, y.offset[k]);
}

}  // namespace

LpBuilder::Terms norm_epigraph(LpBuilder& lp, const NormNode& node, const AffineExpr& x) {
  switch (node.kind) {
    case NormNode::Kind::one: {
      const AffineExpr y = apply(node.map, x);
      LpBuilder::Terms out;
      for (std::size_t k = 0; k < y.dim(); ++k) {
        const std::size_t s = lp.add_nonneg();
        dominate(lp, y, k, s);
        out.emplace_back(s, node.weights[k]);
      }
      return out;
    }
    case NormNode::Kind::sup: {
      const AffineExpr y = apply(node.map, x);
      const std::size_t r = lp.add_nonneg();
      for (std::size_t k = 0; k < y.dim(); ++k) dominate(lp, y, k, r);
      return {{r, 1.0}};
    }
    case NormNode::Kind::sum: {
      LpBuilder::Terms out;
      for (const auto& c : node.children) {
        auto t = norm_epigraph(lp, c, x);
        out.insert(out.end(), t.begin(), t.end());
      }
      return out;
    }
    case NormNode::Kind::max: {
      const std::size_t t = lp.add_nonneg();
      for (const auto& c : node.children) {
        auto terms = norm_epigraph(lp, c, x);
        terms.emplace_back(t, -1.0);
        lp.add_less_equal(std::move(terms), 0.0);
      }
      return {{t, 1.0}};
    }
  }
  return {};
}

void add_norm_bound(LpBuilder& lp, const NormNode& node, const AffineExpr& x, double bound) {
  lp.add_less_equal(norm_epigraph(lp, node, x), bound);
}

std::optional<double> maximize_functionals(const LpProblem& base, const AffineExpr& x,
                                           const std::vector<Vec>& functionals) {
  double best = 0.0;
  for (const auto& phi : functionals) {
    LpProblem p = base;
    std::fill(p.objective.begin(), p.objective.end(), 0.0);
    double constant = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
      if (phi[i] == 0.0) continue;
      for (const auto& [var, coef] : x.coords[i]) p.objective[var] -= phi[i] * coef;
      constant += phi[i] * x.offset[i];
    }
    const LpResult r = lp_minimize(p);
    if (r.status == LpStatus::infeasible) return std::nullopt;
    if (r.status == LpStatus::unbounded) return std::numeric_limits<double>::infinity();
    best = std::max(best, -r.value + constant);
  }
  return best;
}

TwoNormSum minimize_two_norm_sum(const LpBuilder& base, const std::vector<AffineExpr>& exprs,
                                 std::size_t max_rounds) {
  LpBuilder lp = base;
  std::vector<std::size_t> epi;
  for (const auto& e : exprs) {
    const std::size_t t = lp.add_nonneg();
    lp.set_cost(t, 1.0);
    epi.push_back(t);
    // Sup-norm minorants keep the first relaxation bounded.
    for (std::size_t k = 0; k < e.dim(); ++k) {
      for (double sign : {1.0, -1.0}) {
        LpBuilder::Terms row;
        for (const auto& [var, coef] : e.coords[k]) row.emplace_back(var, sign * coef);
        row.emplace_back(t, -1.0);
        lp.add_less_equal(std::move(row), -sign * e.offset[k]);
      }
    }
  }
  TwoNormSum best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const LpResult r = lp_minimize(lp.build());
    if (!r.optimal()) break;
    best.lower = std::max(best.lower, r.value);
    double upper = 0.0;
    std::vector<Vec> values;
    for (const auto& e : exprs) {
      values.push_back(evaluate(e, r.x));
      upper += std::sqrt(dot(values.back(), values.back()));
    }
    if (upper < best.value) {
      best.value = upper;
      best.solution = r.x;
    }
    if (best.value - best.lower <= 1e-10 * std::max(1.0, best.value)) {
      best.converged = true;
      break;
    }
    for (std::size_t j = 0; j < exprs.size(); ++j) {
      const double nrm = std::sqrt(dot(values[j], values[j]));
      if (nrm <= r.x[epi[j]] + 1e-13 || nrm == 0.0) continue;
      // t_j >= <u, e_j> with u the unit vector along the current value.
      LpBuilder::Terms row;
      double off = 0.0;
      for (std::size_t k = 0; k < exprs[j].dim(); ++k) {
        const double u = values[j][k] / nrm;
        for (const auto& [var, coef] : exprs[j].coords[k]) row.emplace_back(var, u * coef);
        off += u * exprs[j].offset[k];
      }
      row.emplace_back(epi[j], -1.0);
      lp.add_less_equal(std::move(row), -off);
    }
  }
  return best;
}

}  // namespace owb
