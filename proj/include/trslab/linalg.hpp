#pragma once

// Dense and tridiagonal kernels shared by the solver, the Lanczos process and
// the bound evaluation. Everything here is a pure function of its inputs.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <tuple>
#include <variant>
#include <vector>

namespace trslab {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
Vector unitVector(std::size_t n, std::size_t i);

/// Column-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  /// Appends a column; rows() must match (or the matrix must be empty).
  void appendColumn(std::span<const double> c);

  Vector multiply(std::span<const double> x) const;
  Vector transposeMultiply(std::span<const double> x) const;
  DenseMatrix transpose() const;
  double frobeniusNorm() const;

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a' * b without forming the transpose.
DenseMatrix matmulTransposed(const DenseMatrix& a, const DenseMatrix& b);

/// Symmetric tridiagonal matrix: diag = (delta_0..delta_{m-1}),
/// offdiag = (beta_1..beta_{m-1}).
struct SymmetricTridiagonal {
  Vector diag;
  Vector offdiag;

  std::size_t order() const noexcept { return diag.size(); }
  /// Throws std::invalid_argument on size mismatch or non-finite entries.
  void validate() const;
  void apply(std::span<const double> x, std::span<double> y) const;
  double normInf() const;
  DenseMatrix toDense() const;
  /// Leading principal submatrix of order m.
  SymmetricTridiagonal leading(std::size_t m) const;
};

/// Symmetric matrix with packed lower-triangular storage.
class DenseSymmetric {
 public:
  DenseSymmetric() = default;
  explicit DenseSymmetric(std::size_t order);
  /// Takes the lower triangle of a square matrix.
  static DenseSymmetric fromLower(const DenseMatrix& m);

  std::size_t order() const noexcept { return order_; }
  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);
  void apply(std::span<const double> x, std::span<double> y) const;
  DenseMatrix toDense() const;

 private:
  static std::size_t index(std::size_t i, std::size_t j) {
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
  }
  std::size_t order_ = 0;
  Vector packed_;
};

/// Compressed sparse rows with both triangles present.
struct SparseSymmetric {
  std::size_t n = 0;
  std::vector<std::size_t> rowPtr;
  std::vector<std::size_t> colIdx;
  Vector values;

  void apply(std::span<const double> x, std::span<double> y) const;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Symmetric A given by its action v -> Av, optionally backed by concrete
/// storage that callers may exploit (exact spectra, dense factorizations).
class SymmetricLinearOperator {
 public:
  using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;
  using Storage = std::variant<std::monostate, Vector, SparseSymmetric, DenseSymmetric>;

  SymmetricLinearOperator(std::size_t n, ApplyFn apply);

  static SymmetricLinearOperator fromDiagonal(Vector diag);
  /// Entries of one triangle (either); off-diagonal entries are mirrored and
  /// duplicates summed.
  static SymmetricLinearOperator fromTriplets(std::size_t n, std::span<const Triplet> entries);
  static SymmetricLinearOperator fromDense(DenseSymmetric a);

  std::size_t dimension() const noexcept { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const { apply_(x, y); }
  Vector apply(std::span<const double> x) const;

  const Vector* diagonal() const { return std::get_if<Vector>(storage_.get()); }
  const SparseSymmetric* sparse() const { return std::get_if<SparseSymmetric>(storage_.get()); }
  const DenseSymmetric* dense() const { return std::get_if<DenseSymmetric>(storage_.get()); }

 private:
  std::size_t n_;
  ApplyFn apply_;
  std::shared_ptr<const Storage> storage_;
};

/// Largest observed |u'(Av) - v'(Au)| / (||u|| ||v||) over random probes.
double symmetryDefect(const SymmetricLinearOperator& a, int probes, std::uint64_t seed);

/// General (possibly rectangular) linear operator with its transpose.
struct LinearOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::function<void(std::span<const double>, std::span<double>)> applyTranspose;

  static LinearOperator fromDense(const DenseMatrix& m);
};

/// LDL' of a shifted symmetric tridiagonal, l holds the subdiagonal of L.
struct LdlFactorization {
  Vector d;
  Vector l;
  /// Index of the first nonpositive pivot when T + lambda*I is not positive definite.
  std::optional<std::size_t> failedPivot;

  bool ok() const noexcept { return !failedPivot.has_value(); }
  /// Solves L D L' x = rhs; requires ok().
  Vector solve(std::span<const double> rhs) const;
};

LdlFactorization ldlShifted(const SymmetricTridiagonal& t, double lambda);
/// Solves (T + lambda*I) h = rhs. Throws IndefiniteShift.
Vector solveShifted(const SymmetricTridiagonal& t, double lambda, std::span<const double> rhs);

struct EigenRange {
  double min;
  double max;
};

/// Number of eigenvalues of t strictly less than x (Sturm count).
std::size_t sturmCount(const SymmetricTridiagonal& t, double x);
/// Extremal eigenvalues by Sturm bisection inside the Gershgorin bracket.
/// tol <= 0 selects 1e-13 * bracket width.
EigenRange extremalEigTridiagonal(const SymmetricTridiagonal& t, double tol = 0.0);

struct SymmetricEigen {
  Vector values;        // ascending
  DenseMatrix vectors;  // columns match values
  int sweeps = 0;
};

/// Cyclic Jacobi with a 30-sweep budget. Throws NoConvergence.
SymmetricEigen symmetricEigDense(const DenseSymmetric& a, double tol = 1e-14);

/// Householder reduction of a dense symmetric matrix to tridiagonal form
/// (eigenvalues preserved, transformation discarded).
SymmetricTridiagonal householderTridiagonalize(const DenseSymmetric& a);

struct NormEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Power iteration on op'op from a seeded random start.
NormEstimate operatorNorm2(const LinearOperator& op, double tol = 1e-8, int maxit = 1000,
                           std::uint64_t seed = 0x5eed);

/// m x (m-1) orthonormal basis of the complement of the unit vector v
/// (trailing columns of the Householder reflector mapping v to +-e1).
DenseMatrix orthonormalComplement(std::span<const double> v);

struct CgResult {
  Vector x;
  double relativeResidual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Conjugate gradients for (A + shift*I) x = b with A + shift*I positive definite.
CgResult conjugateGradient(const SymmetricLinearOperator& a, double shift,
                           std::span<const double> b, double tol = 1e-14, int maxit = 5000);

}  // namespace trslab
