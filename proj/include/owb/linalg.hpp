#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace owb {

using Vec = std::vector<double>;

/// Dense row-major real matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vec column(std::size_t j) const;
  Matrix transpose() const;
  /// Columns [first, first + count) as a new matrix.
  Matrix column_block(std::size_t first, std::size_t count) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vec operator*(const Matrix& a, std::span<const double> x);

double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
Matrix block_diagonal(std::span<const Matrix> blocks);
/// Horizontal concatenation; all parts need equal row counts.
Matrix hstack(std::span<const Matrix> parts);
Matrix vstack(std::span<const Matrix> parts);

// Vector helpers.
Vec add(std::span<const double> a, std::span<const double> b);
Vec sub(std::span<const double> a, std::span<const double> b);
Vec scaled(std::span<const double> a, double s);
void axpy(double s, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
Vec unit_vector(std::size_t n, std::size_t i);

struct NormedSpace;

/// Summation exponent for block sums of normed spaces.
enum class SumExponent { one, two, sup };

/// Linear family d -> sum_i d_i * images[i] acting on `space`; used for
/// norms of the form d -> max over families of an operator norm.
struct OperatorFamily;

class NormKind {
 public:
  enum class Family { one, sup, two, weighted_one, block_sum, operator_max };

  static NormKind one() { return NormKind(Family::one); }
  static NormKind sup() { return NormKind(Family::sup); }
  static NormKind two() { return NormKind(Family::two); }
  static NormKind weighted_one(Vec weights);
  /// (sum_i (scale_i * |x_i|_i)^p)^(1/p) over consecutive coordinate blocks.
  static NormKind block_sum(SumExponent p, std::vector<NormedSpace> blocks, Vec scales = {});
  static NormKind operator_max(std::vector<OperatorFamily> families);

  Family family() const { return family_; }
  const Vec& weights() const { return weights_; }
  SumExponent exponent() const { return exponent_; }
  const std::vector<NormedSpace>& blocks() const;
  const Vec& scales() const { return weights_; }
  const std::vector<OperatorFamily>& families() const;

 private:
  explicit NormKind(Family f) : family_(f) {}
  Family family_;
  Vec weights_;  // weighted_one weights, or block_sum scales
  SumExponent exponent_ = SumExponent::one;
  std::shared_ptr<const std::vector<NormedSpace>> blocks_;
  std::shared_ptr<const std::vector<OperatorFamily>> families_;
};

struct NormedSpace {
  std::size_t dim = 1;
  NormKind norm = NormKind::one();
};

struct OperatorFamily {
  std::vector<Matrix> images;
  NormedSpace space;
};

struct LinOp {
  Matrix matrix;
  NormedSpace domain;
  NormedSpace codomain;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedNorm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double vec_norm(std::span<const double> x, const NormedSpace& space);

/// True for norms whose unit ball is a polytope.
bool is_polyhedral(const NormKind& n);

/// Extreme points of the unit ball, when it is a polytope with at most
/// `cap` vertices (one of each antipodal pair is returned).
std::optional<std::vector<Vec>> unit_ball_vertices(const NormedSpace& space,
                                                   std::size_t cap = 1u << 20);

double op_norm(const Matrix& t, const NormedSpace& domain, const NormedSpace& codomain);
inline double op_norm(const LinOp& t) { return op_norm(t.matrix, t.domain, t.codomain); }

/// Largest singular value (power iteration on the Gram matrix).
double spectral_norm(const Matrix& t);

struct Echelon {
  Matrix reduced;                   // rank x cols, pivot columns form the identity
  std::vector<std::size_t> pivots;  // pivot column per row, increasing
  double smallest_pivot = 0.0;      // magnitude before normalisation
  double largest_rejected = 0.0;    // largest residual treated as zero
};

inline constexpr double kPivotTol = 1e-10;

/// Reduced row echelon form with partial pivoting; entries below
/// `tol * max(1, max|m|)` count as zero.
Echelon row_reduce(const Matrix& m, double tol = kPivotTol);
std::size_t rank(const Matrix& m, double tol = kPivotTol);
std::vector<Vec> nullspace(const Matrix& m, double tol = kPivotTol);
std::optional<Matrix> inverse(const Matrix& m, double tol = kPivotTol);
/// Some solution of a x = b when the system is consistent.
std::optional<Vec> solve(const Matrix& a, std::span<const double> b, double tol = 1e-9);

}  // namespace owb
