#include "owb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace owb {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DimensionError("row length mismatch");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * cols);
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw DimensionError("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec Matrix::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::column_block(std::size_t first, std::size_t count) const {
  return block(0, first, rows_, count);
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vec operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("matrix-vector shape mismatch");
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

double max_abs(const Matrix& m) { return max_abs(m.data()); }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
  return max_abs_diff(a.data(), b.data());
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix m(r, c);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
    r0 += b.rows();
    c0 += b.cols();
  }
  return m;
}

Matrix hstack(std::span<const Matrix> parts) {
  if (parts.empty()) return {};
  std::size_t c = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts[0].rows()) throw DimensionError("hstack row mismatch");
    c += p.cols();
  }
  Matrix m(parts[0].rows(), c);
  std::size_t c0 = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) m(i, c0 + j) = p(i, j);
    c0 += p.cols();
  }
  return m;
}

Matrix vstack(std::span<const Matrix> parts) {
  if (parts.empty()) return {};
  std::size_t r = 0;
  for (const auto& p : parts) {
    if (p.cols() != parts[0].cols()) throw DimensionError("vstack column mismatch");
    r += p.rows();
  }
  Matrix m(r, parts[0].cols());
  std::size_t r0 = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.rows(); ++i)
      for (std::size_t j = 0; j < p.cols(); ++j) m(r0 + i, j) = p(i, j);
    r0 += p.rows();
  }
  return m;
}

Vec add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scaled(std::span<const double> a, double s) {
  Vec r(a.begin(), a.end());
  for (double& v : r) v *= s;
  return r;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("vector length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v(n, 0.0);
  v.at(i) = 1.0;
  return v;
}

// ---------------------------------------------------------------- norms

NormKind NormKind::weighted_one(Vec weights) {
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weighted one-norm weights must be positive");
  NormKind k(Family::weighted_one);
  k.weights_ = std::move(weights);
  return k;
}

NormKind NormKind::block_sum(SumExponent p, std::vector<NormedSpace> blocks, Vec scales) {
  if (blocks.empty()) throw std::invalid_argument("block sum needs at least one block");
  if (scales.empty()) scales.assign(blocks.size(), 1.0);
  if (scales.size() != blocks.size()) throw DimensionError("one scale per block required");
  for (double s : scales)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("block scales must be positive");
  NormKind k(Family::block_sum);
  k.exponent_ = p;
  k.weights_ = std::move(scales);
  k.blocks_ = std::make_shared<const std::vector<NormedSpace>>(std::move(blocks));
  return k;
}

NormKind NormKind::operator_max(std::vector<OperatorFamily> families) {
  if (families.empty()) throw std::invalid_argument("operator norm needs a family");
  NormKind k(Family::operator_max);
  k.families_ = std::make_shared<const std::vector<OperatorFamily>>(std::move(families));
  return k;
}

const std::vector<NormedSpace>& NormKind::blocks() const {
  static const std::vector<NormedSpace> none;
  return blocks_ ? *blocks_ : none;
}

const std::vector<OperatorFamily>& NormKind::families() const {
  static const std::vector<OperatorFamily> none;
  return families_ ? *families_ : none;
}

namespace {

std::size_t total_dim(const std::vector<NormedSpace>& blocks) {
  std::size_t d = 0;
  for (const auto& b : blocks) d += b.dim;
  return d;
}

Matrix combine(const std::vector<Matrix>& images, std::span<const double> coeff) {
  Matrix m(images.at(0).rows(), images.at(0).cols());
  for (std::size_t i = 0; i < images.size(); ++i)
    if (coeff[i] != 0.0) m += coeff[i] * images[i];
  return m;
}

// Rewrites block sums that coincide with a flat norm.
NormedSpace flatten(const NormedSpace& s) {
  if (s.norm.family() != NormKind::Family::block_sum) return s;
  const auto& blocks = s.norm.blocks();
  const auto& scales = s.norm.scales();
  std::vector<NormedSpace> flat;
  for (const auto& b : blocks) flat.push_back(flatten(b));
  auto all = [&](auto pred) { return std::all_of(flat.begin(), flat.end(), pred); };
  const bool unit_scales = std::all_of(scales.begin(), scales.end(), [](double c) { return c == 1.0; });
  switch (s.norm.exponent()) {
    case SumExponent::one:
      if (all([](const NormedSpace& b) {
            return b.norm.family() == NormKind::Family::one ||
                   b.norm.family() == NormKind::Family::weighted_one;
          })) {
        Vec w;
        for (std::size_t i = 0; i < flat.size(); ++i)
          for (std::size_t k = 0; k < flat[i].dim; ++k)
            w.push_back(scales[i] * (flat[i].norm.family() == NormKind::Family::one
                                         ? 1.0
                                         : flat[i].norm.weights()[k]));
        bool plain = std::all_of(w.begin(), w.end(), [](double v) { return v == 1.0; });
        return {s.dim, plain ? NormKind::one() : NormKind::weighted_one(std::move(w))};
      }
      break;
    case SumExponent::two:
      if (unit_scales && all([](const NormedSpace& b) { return b.norm.family() == NormKind::Family::two; }))
        return {s.dim, NormKind::two()};
      break;
    case SumExponent::sup:
      if (unit_scales && all([](const NormedSpace& b) { return b.norm.family() == NormKind::Family::sup; }))
        return {s.dim, NormKind::sup()};
      break;
  }
  if (flat.size() == 1 && scales[0] == 1.0) return flat[0];
  return {s.dim, NormKind::block_sum(s.norm.exponent(), std::move(flat), scales)};
}

void check_dim(std::span<const double> x, const NormedSpace& s) {
  if (x.size() != s.dim)
    throw DimensionError("vector of length " + std::to_string(x.size()) + " in space of dim " +
                         std::to_string(s.dim));
}

// All sign vectors with a leading +1 (one per antipodal pair).
std::vector<Vec> sign_vectors(std::size_t n) {
  std::vector<Vec> out;
  if (n == 0) return out;
  const std::size_t count = std::size_t{1} << (n - 1);
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vec v(n, 1.0);
    for (std::size_t k = 1; k < n; ++k)
      if (mask & (std::size_t{1} << (k - 1))) v[k] = -1.0;
    out.push_back(std::move(v));
  }
  return out;
}

constexpr std::size_t kHypercubeCap = 20;

}  // namespace

double vec_norm(std::span<const double> x, const NormedSpace& space) {
  check_dim(x, space);
  const auto& n = space.norm;
  switch (n.family()) {
    case NormKind::Family::one: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return s;
    }
    case NormKind::Family::sup:
      return max_abs(x);
    case NormKind::Family::two:
      return std::sqrt(dot(x, x));
    case NormKind::Family::weighted_one: {
      if (n.weights().size() != x.size()) throw DimensionError("weight count mismatch");
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += n.weights()[i] * std::abs(x[i]);
      return s;
    }
    case NormKind::Family::block_sum: {
      const auto& blocks = n.blocks();
      if (total_dim(blocks) != x.size()) throw DimensionError("block dims do not add up");
      double acc = 0.0;
      std::size_t off = 0;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const double b = n.scales()[i] * vec_norm(x.subspan(off, blocks[i].dim), blocks[i]);
        off += blocks[i].dim;
        switch (n.exponent()) {
          case SumExponent::one: acc += b; break;
          case SumExponent::two: acc += b * b; break;
          case SumExponent::sup: acc = std::max(acc, b); break;
        }
      }
      return n.exponent() == SumExponent::two ? std::sqrt(acc) : acc;
    }
    case NormKind::Family::operator_max: {
      double m = 0.0;
      for (const auto& fam : n.families()) {
        if (fam.images.size() != x.size()) throw DimensionError("operator family size mismatch");
        m = std::max(m, op_norm(combine(fam.images, x), fam.space, fam.space));
      }
      return m;
    }
  }
  return 0.0;
}

bool is_polyhedral(const NormKind& n) {
  switch (n.family()) {
    case NormKind::Family::one:
    case NormKind::Family::sup:
    case NormKind::Family::weighted_one:
      return true;
    case NormKind::Family::two:
      return false;
    case NormKind::Family::block_sum:
      if (n.exponent() == SumExponent::two) {
        NormedSpace probe{total_dim(n.blocks()), n};
        return n.blocks().size() == 1 && is_polyhedral(flatten(probe).norm);
      }
      return std::all_of(n.blocks().begin(), n.blocks().end(),
                         [](const NormedSpace& b) { return is_polyhedral(b.norm); });
    case NormKind::Family::operator_max:
      return std::all_of(n.families().begin(), n.families().end(),
                         [](const OperatorFamily& f) { return is_polyhedral(f.space.norm); });
  }
  return false;
}

std::optional<std::vector<Vec>> unit_ball_vertices(const NormedSpace& space, std::size_t cap) {
  const NormedSpace s = flatten(space);
  const auto& n = s.norm;
  switch (n.family()) {
    case NormKind::Family::one:
    case NormKind::Family::weighted_one: {
      if (s.dim > cap) return std::nullopt;
      std::vector<Vec> out;
      for (std::size_t i = 0; i < s.dim; ++i) {
        Vec v(s.dim, 0.0);
        v[i] = n.family() == NormKind::Family::one ? 1.0 : 1.0 / n.weights()[i];
        out.push_back(std::move(v));
      }
      return out;
    }
    case NormKind::Family::sup:
      if (s.dim > kHypercubeCap || (std::size_t{1} << (s.dim - 1)) > cap) return std::nullopt;
      return sign_vectors(s.dim);
    case NormKind::Family::two:
    case NormKind::Family::operator_max:
      return std::nullopt;
    case NormKind::Family::block_sum: {
      const auto& blocks = n.blocks();
      std::vector<std::vector<Vec>> per_block;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        auto v = unit_ball_vertices(blocks[i], cap);
        if (!v) return std::nullopt;
        for (auto& x : *v) x = scaled(x, 1.0 / n.scales()[i]);
        per_block.push_back(std::move(*v));
      }
      std::vector<Vec> out;
      if (n.exponent() == SumExponent::one) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
          for (const auto& v : per_block[i]) {
            if (out.size() >= cap) return std::nullopt;
            Vec e(s.dim, 0.0);
            std::copy(v.begin(), v.end(), e.begin() + static_cast<std::ptrdiff_t>(off));
            out.push_back(std::move(e));
          }
          off += blocks[i].dim;
        }
        return out;
      }
      if (n.exponent() == SumExponent::two) return std::nullopt;
      // Product of block vertex sets (each with both signs), halved by a
      // leading sign convention on the first block.
      double count = 1.0;
      for (std::size_t i = 0; i < per_block.size(); ++i)
        count *= static_cast<double>(per_block[i].size()) * (i == 0 ? 1.0 : 2.0);
      if (count > static_cast<double>(cap)) return std::nullopt;
      out.push_back({});
      for (std::size_t i = 0; i < per_block.size(); ++i) {
        std::vector<Vec> next;
        for (const auto& prefix : out)
          for (const auto& v : per_block[i])
            for (double sign : {1.0, -1.0}) {
              if (i == 0 && sign < 0) continue;
              Vec e = prefix;
              for (double c : v) e.push_back(sign * c);
              next.push_back(std::move(e));
            }
        out = std::move(next);
      }
      return out;
    }
  }
  return std::nullopt;
}

double spectral_norm(const Matrix& t) {
  const Matrix gram = t.transpose() * t;
  const std::size_t n = gram.cols();
  if (n == 0 || max_abs(gram) == 0.0) return 0.0;
  // Repeated squaring sharpens the spectral gap before the plain iteration,
  // so near-degenerate leading eigenvalues still converge.
  Matrix p = (1.0 / max_abs(gram)) * gram;
  for (int k = 0; k < 6; ++k) {
    p = p * p;
    const double m = max_abs(p);
    if (m == 0.0) break;
    p *= 1.0 / m;
  }
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec c = p.column(j);
    const double cn = dot(c, c);
    if (cn > best_norm) {
      best_norm = cn;
      best = j;
    }
  }
  Vec v = best_norm > 0.0 ? p.column(best) : Vec(n, 1.0);
  auto normalise = [](Vec& x) {
    const double nx = std::sqrt(dot(x, x));
    if (nx > 0.0)
      for (double& c : x) c /= nx;
  };
  normalise(v);
  double lambda = dot(v, gram * v);
  for (int iter = 0; iter < 10000; ++iter) {
    Vec w = gram * v;
    normalise(w);
    const double next = dot(w, gram * w);
    v = std::move(w);
    if (std::abs(next - lambda) <= 1e-12 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

namespace {

double max_over_vertices(const Matrix& t, const std::vector<Vec>& verts, const NormedSpace& cod) {
  double m = 0.0;
  for (const auto& v : verts) m = std::max(m, vec_norm(t * v, cod));
  return m;
}

// Block-diagonal operators between block sums with matching structure have
// norm equal to the largest block norm.
std::optional<double> block_diagonal_norm(const Matrix& t, const NormedSpace& d, const NormedSpace& c) {
  if (d.norm.family() != NormKind::Family::block_sum || c.norm.family() != NormKind::Family::block_sum)
    return std::nullopt;
  if (d.norm.exponent() != c.norm.exponent()) return std::nullopt;
  const auto& db = d.norm.blocks();
  const auto& cb = c.norm.blocks();
  if (db.size() != cb.size()) return std::nullopt;
  const double noise = 1e-14 * std::max(1.0, max_abs(t));
  std::size_t r0 = 0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    std::size_t c0 = 0;
    for (std::size_t j = 0; j < db.size(); ++j) {
      if (i != j && max_abs(t.block(r0, c0, cb[i].dim, db[j].dim)) > noise) return std::nullopt;
      c0 += db[j].dim;
    }
    r0 += cb[i].dim;
  }
  double m = 0.0;
  r0 = 0;
  std::size_t c0 = 0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    const double ratio = c.norm.scales()[i] / d.norm.scales()[i];
    m = std::max(m, ratio * op_norm(t.block(r0, c0, cb[i].dim, db[i].dim), db[i], cb[i]));
    r0 += cb[i].dim;
    c0 += db[i].dim;
  }
  return m;
}

}  // namespace

double op_norm(const Matrix& t, const NormedSpace& domain, const NormedSpace& codomain) {
  if (t.rows() != codomain.dim || t.cols() != domain.dim)
    throw DimensionError("operator shape " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                         " does not match spaces");
  const NormedSpace d = flatten(domain);
  const NormedSpace c = flatten(codomain);
  using F = NormKind::Family;
  switch (d.norm.family()) {
    case F::one:
    case F::weighted_one: {
      double m = 0.0;
      for (std::size_t j = 0; j < d.dim; ++j) {
        const double w = d.norm.family() == F::one ? 1.0 : d.norm.weights()[j];
        m = std::max(m, vec_norm(t.column(j), c) / w);
      }
      return m;
    }
    case F::sup: {
      if (c.norm.family() == F::sup) {
        double m = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
          double s = 0.0;
          for (double v : t.row(i)) s += std::abs(v);
          m = std::max(m, s);
        }
        return m;
      }
      if (auto verts = unit_ball_vertices(d)) return max_over_vertices(t, *verts, c);
      break;
    }
    case F::two: {
      switch (c.norm.family()) {
        case F::two:
          return spectral_norm(t);
        case F::sup: {
          double m = 0.0;
          for (std::size_t i = 0; i < t.rows(); ++i) m = std::max(m, std::sqrt(dot(t.row(i), t.row(i))));
          return m;
        }
        case F::one:
        case F::weighted_one: {
          // Dual form: sup over the dual (sup) ball vertices of |t^T s|_2.
          if (t.rows() > kHypercubeCap) break;
          const Matrix tt = t.transpose();
          double m = 0.0;
          for (Vec s : sign_vectors(t.rows())) {
            if (c.norm.family() == F::weighted_one)
              for (std::size_t i = 0; i < s.size(); ++i) s[i] *= c.norm.weights()[i];
            const Vec y = tt * s;
            m = std::max(m, std::sqrt(dot(y, y)));
          }
          return m;
        }
        default:
          break;
      }
      break;
    }
    case F::block_sum: {
      if (d.norm.exponent() == SumExponent::one) {
        const auto& blocks = d.norm.blocks();
        double m = 0.0;
        std::size_t off = 0;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
          m = std::max(m, op_norm(t.column_block(off, blocks[i].dim), blocks[i], c) / d.norm.scales()[i]);
          off += blocks[i].dim;
        }
        return m;
      }
      if (auto verts = unit_ball_vertices(d)) return max_over_vertices(t, *verts, c);
      if (auto bd = block_diagonal_norm(t, d, c)) return *bd;
      break;
    }
    case F::operator_max:
      break;
  }
  throw UnsupportedNorm("no exact operator-norm route for this pair of norms");
}

// ------------------------------------------------------------ elimination

Echelon row_reduce(const Matrix& m, double tol) {
  Matrix a = m;
  const double thr = tol * std::max(1.0, max_abs(m));
  Echelon e;
  e.smallest_pivot = std::numeric_limits<double>::infinity();
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t p = row;
    for (std::size_t i = row + 1; i < a.rows(); ++i)
      if (std::abs(a(i, col)) > std::abs(a(p, col))) p = i;
    const double piv = std::abs(a(p, col));
    if (piv <= thr) {
      e.largest_rejected = std::max(e.largest_rejected, piv);
      for (std::size_t i = row; i < a.rows(); ++i) a(i, col) = 0.0;
      continue;
    }
    if (p != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    e.smallest_pivot = std::min(e.smallest_pivot, piv);
    const double inv = 1.0 / a(row, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    a(row, col) = 1.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row) continue;
      const double f = a(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
      a(i, col) = 0.0;
    }
    e.pivots.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) e.largest_rejected = std::max(e.largest_rejected, std::abs(a(i, j)));
  if (e.pivots.empty()) e.smallest_pivot = 0.0;
  e.reduced = a.block(0, 0, row, a.cols());
  return e;
}

std::size_t rank(const Matrix& m, double tol) { return row_reduce(m, tol).pivots.size(); }

std::vector<Vec> nullspace(const Matrix& m, double tol) {
  const Echelon e = row_reduce(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec x(m.cols(), 0.0);
    x[f] = 1.0;
    for (std::size_t k = 0; k < e.pivots.size(); ++k) x[e.pivots[k]] = -e.reduced(k, f);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<Matrix> inverse(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const Matrix id = Matrix::identity(n);
  const Matrix parts[] = {m, id};
  const Echelon e = row_reduce(hstack(parts), tol);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  return e.reduced.block(0, n, n, n);
}

std::optional<Vec> solve(const Matrix& a, std::span<const double> b, double tol) {
  if (a.rows() != b.size()) throw DimensionError("right-hand side length mismatch");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const Echelon e = row_reduce(aug);
  Vec x(a.cols(), 0.0);
  for (std::size_t k = 0; k < e.pivots.size(); ++k) {
    if (e.pivots[k] == a.cols()) return std::nullopt;
    x[e.pivots[k]] = e.reduced(k, a.cols());
  }
  const Vec r = sub(a * x, b);
  if (max_abs(r) > tol * std::max(1.0, max_abs(b))) return std::nullopt;
  return x;
}

}  // namespace owb
