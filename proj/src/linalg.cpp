#include "trslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "trslab/errors.hpp"

namespace trslab {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) {
  // scaled accumulation so that tiny and huge vectors do not under/overflow
  double scaleF = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scaleF < a) {
      ssq = 1.0 + ssq * (scaleF / a) * (scaleF / a);
      scaleF = a;
    } else {
      ssq += (a / scaleF) * (a / scaleF);
    }
  }
  return scaleF * std::sqrt(ssq);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

Vector unitVector(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e.at(i) = 1.0;
  return e;
}

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void DenseMatrix::appendColumn(std::span<const double> c) {
  if (cols_ == 0 && rows_ == 0) rows_ = c.size();
  if (c.size() != rows_) throw std::invalid_argument("appendColumn: row count mismatch");
  data_.insert(data_.end(), c.begin(), c.end());
  ++cols_;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
  Vector y(rows_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) axpy(x[j], col(j), y);
  return y;
}

Vector DenseMatrix::transposeMultiply(std::span<const double> x) const {
  Vector y(cols_);
  for (std::size_t j = 0; j < cols_; ++j) y[j] = dot(col(j), x);
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobeniusNorm() const { return norm2(data_); }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj != 0.0) axpy(bkj, a.col(k), c.col(j));
    }
  return c;
}

DenseMatrix matmulTransposed(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmulTransposed: shape mismatch");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.col(i), b.col(j));
  return c;
}

// ---------------------------------------------------------------------------
// SymmetricTridiagonal

void SymmetricTridiagonal::validate() const {
  if (diag.empty()) throw std::invalid_argument("tridiagonal of order 0");
  if (offdiag.size() + 1 != diag.size())
    throw std::invalid_argument("tridiagonal: offdiag must have order-1 entries");
  for (double v : diag)
    if (!std::isfinite(v)) throw std::invalid_argument("tridiagonal: non-finite entry");
  for (double v : offdiag)
    if (!std::isfinite(v)) throw std::invalid_argument("tridiagonal: non-finite entry");
}

void SymmetricTridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t m = order();
  for (std::size_t i = 0; i < m; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += offdiag[i - 1] * x[i - 1];
    if (i + 1 < m) v += offdiag[i] * x[i + 1];
    y[i] = v;
  }
}

double SymmetricTridiagonal::normInf() const {
  double best = 0.0;
  const std::size_t m = order();
  for (std::size_t i = 0; i < m; ++i) {
    double r = std::abs(diag[i]);
    if (i > 0) r += std::abs(offdiag[i - 1]);
    if (i + 1 < m) r += std::abs(offdiag[i]);
    best = std::max(best, r);
  }
  return best;
}

DenseMatrix SymmetricTridiagonal::toDense() const {
  const std::size_t m = order();
  DenseMatrix d(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    d(i, i) = diag[i];
    if (i + 1 < m) d(i, i + 1) = d(i + 1, i) = offdiag[i];
  }
  return d;
}

SymmetricTridiagonal SymmetricTridiagonal::leading(std::size_t m) const {
  if (m == 0 || m > order()) throw std::out_of_range("leading: bad order");
  return {Vector(diag.begin(), diag.begin() + static_cast<std::ptrdiff_t>(m)),
          Vector(offdiag.begin(), offdiag.begin() + static_cast<std::ptrdiff_t>(m - 1))};
}

// ---------------------------------------------------------------------------
// DenseSymmetric / SparseSymmetric

DenseSymmetric::DenseSymmetric(std::size_t order)
    : order_(order), packed_(order * (order + 1) / 2, 0.0) {
  if (order == 0) throw std::invalid_argument("DenseSymmetric of order 0");
}

DenseSymmetric DenseSymmetric::fromLower(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("fromLower: matrix not square");
  DenseSymmetric s(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = j; i < m.rows(); ++i) s.set(i, j, m(i, j));
  return s;
}

double DenseSymmetric::operator()(std::size_t i, std::size_t j) const {
  return packed_[index(i, j)];
}

void DenseSymmetric::set(std::size_t i, std::size_t j, double v) { packed_[index(i, j)] = v; }

void DenseSymmetric::apply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  const double* a = packed_.data();
  for (std::size_t i = 0; i < order_; ++i) {
    const double* row = a + i * (i + 1) / 2;
    double acc = 0.0;
    const double xi = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      acc += row[j] * x[j];
      y[j] += row[j] * xi;
    }
    y[i] += acc + row[i] * xi;
  }
}

DenseMatrix DenseSymmetric::toDense() const {
  DenseMatrix d(order_, order_);
  for (std::size_t j = 0; j < order_; ++j)
    for (std::size_t i = 0; i < order_; ++i) d(i, j) = (*this)(i, j);
  return d;
}

void SparseSymmetric::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t p = rowPtr[i]; p < rowPtr[i + 1]; ++p) acc += values[p] * x[colIdx[p]];
    y[i] = acc;
  }
}

// ---------------------------------------------------------------------------
// SymmetricLinearOperator

SymmetricLinearOperator::SymmetricLinearOperator(std::size_t n, ApplyFn apply)
    : n_(n), apply_(std::move(apply)), storage_(std::make_shared<Storage>()) {
  if (n == 0) throw std::invalid_argument("operator of dimension 0");
}

SymmetricLinearOperator SymmetricLinearOperator::fromDiagonal(Vector diag) {
  auto storage = std::make_shared<Storage>(std::move(diag));
  const Vector* d = std::get_if<Vector>(storage.get());
  SymmetricLinearOperator op(d->size(), [d](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < d->size(); ++i) y[i] = (*d)[i] * x[i];
  });
  op.storage_ = std::move(storage);
  return op;
}

SymmetricLinearOperator SymmetricLinearOperator::fromTriplets(std::size_t n,
                                                              std::span<const Triplet> entries) {
  std::vector<Triplet> all;
  all.reserve(entries.size() * 2);
  for (const auto& t : entries) {
    if (t.row >= n || t.col >= n) throw std::out_of_range("fromTriplets: index out of range");
    all.push_back(t);
    if (t.row != t.col) all.push_back({t.col, t.row, t.value});
  }
  std::sort(all.begin(), all.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  SparseSymmetric s;
  s.n = n;
  s.rowPtr.assign(n + 1, 0);
  for (std::size_t p = 0; p < all.size(); ++p) {
    if (p > 0 && all[p].row == all[p - 1].row && all[p].col == all[p - 1].col) {
      s.values.back() += all[p].value;
      continue;
    }
    s.colIdx.push_back(all[p].col);
    s.values.push_back(all[p].value);
    ++s.rowPtr[all[p].row + 1];
  }
  std::partial_sum(s.rowPtr.begin(), s.rowPtr.end(), s.rowPtr.begin());

  auto storage = std::make_shared<Storage>(std::move(s));
  const SparseSymmetric* sp = std::get_if<SparseSymmetric>(storage.get());
  SymmetricLinearOperator op(n, [sp](std::span<const double> x, std::span<double> y) {
    sp->apply(x, y);
  });
  op.storage_ = std::move(storage);
  return op;
}

SymmetricLinearOperator SymmetricLinearOperator::fromDense(DenseSymmetric a) {
  const std::size_t n = a.order();
  auto storage = std::make_shared<Storage>(std::move(a));
  const DenseSymmetric* d = std::get_if<DenseSymmetric>(storage.get());
  SymmetricLinearOperator op(n, [d](std::span<const double> x, std::span<double> y) {
    d->apply(x, y);
  });
  op.storage_ = std::move(storage);
  return op;
}

Vector SymmetricLinearOperator::apply(std::span<const double> x) const {
  Vector y(n_);
  apply_(x, y);
  return y;
}

double symmetryDefect(const SymmetricLinearOperator& a, int probes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const std::size_t n = a.dimension();
  double worst = 0.0;
  Vector u(n), v(n);
  for (int p = 0; p < probes; ++p) {
    for (auto& x : u) x = normal(rng);
    for (auto& x : v) x = normal(rng);
    const Vector au = a.apply(u);
    const Vector av = a.apply(v);
    worst = std::max(worst, std::abs(dot(u, av) - dot(v, au)) / (norm2(u) * norm2(v)));
  }
  return worst;
}

LinearOperator LinearOperator::fromDense(const DenseMatrix& m) {
  auto shared = std::make_shared<DenseMatrix>(m);
  LinearOperator op;
  op.rows = m.rows();
  op.cols = m.cols();
  op.apply = [shared](std::span<const double> x, std::span<double> y) {
    const Vector r = shared->multiply(x);
    std::copy(r.begin(), r.end(), y.begin());
  };
  op.applyTranspose = [shared](std::span<const double> x, std::span<double> y) {
    const Vector r = shared->transposeMultiply(x);
    std::copy(r.begin(), r.end(), y.begin());
  };
  return op;
}

// ---------------------------------------------------------------------------
// Shifted tridiagonal factorization

LdlFactorization ldlShifted(const SymmetricTridiagonal& t, double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("ldlShifted: non-finite shift");
  const std::size_t m = t.order();
  LdlFactorization f;
  f.d.resize(m);
  f.l.resize(m > 0 ? m - 1 : 0);
  for (std::size_t i = 0; i < m; ++i) {
    double di = t.diag[i] + lambda;
    if (i > 0) {
      f.l[i - 1] = t.offdiag[i - 1] / f.d[i - 1];
      di -= f.l[i - 1] * t.offdiag[i - 1];
    }
    if (!(di > 0.0) || !std::isfinite(di)) {
      f.failedPivot = i;
      return f;
    }
    f.d[i] = di;
  }
  return f;
}

Vector LdlFactorization::solve(std::span<const double> rhs) const {
  const std::size_t m = d.size();
  Vector x(rhs.begin(), rhs.end());
  for (std::size_t i = 1; i < m; ++i) x[i] -= l[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < m; ++i) x[i] /= d[i];
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= l[i] * x[i + 1];
  return x;
}

Vector solveShifted(const SymmetricTridiagonal& t, double lambda, std::span<const double> rhs) {
  const LdlFactorization f = ldlShifted(t, lambda);
  if (!f.ok()) throw IndefiniteShift(*f.failedPivot, lambda);
  return f.solve(rhs);
}

// ---------------------------------------------------------------------------
// Sturm bisection

std::size_t sturmCount(const SymmetricTridiagonal& t, double x) {
  const std::size_t m = t.order();
  double maxOff = 0.0;
  for (double b : t.offdiag) maxOff = std::max(maxOff, b * b);
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, maxOff);
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    d = t.diag[i] - x - (i > 0 ? t.offdiag[i - 1] * t.offdiag[i - 1] / d : 0.0);
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

EigenRange extremalEigTridiagonal(const SymmetricTridiagonal& t, double tol) {
  t.validate();
  const std::size_t m = t.order();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < m) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double width = hi - lo;
  if (width == 0.0) return {lo, hi};
  if (tol <= 0.0) tol = 1e-13 * width;
  const double pad = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  lo -= pad;
  hi += pad;

  // Smallest eigenvalue: largest x with count(x) == 0.
  auto bisect = [&](auto&& predicateBelow) {
    double a = lo, b = hi;
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (predicateBelow(mid))
        a = mid;
      else
        b = mid;
    }
    return 0.5 * (a + b);
  };
  const double minEig = bisect([&](double x) { return sturmCount(t, x) == 0; });
  const double maxEig = bisect([&](double x) { return sturmCount(t, x) < m; });
  return {minEig, maxEig};
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi

SymmetricEigen symmetricEigDense(const DenseSymmetric& input, double tol) {
  const std::size_t m = input.order();
  DenseMatrix a = input.toDense();
  DenseMatrix v = DenseMatrix::identity(m);
  const double fro = a.frobeniusNorm();
  constexpr int kSweepBudget = 30;

  auto offNorm = [&]() {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  SymmetricEigen result;
  int sweep = 0;
  double off = offNorm();
  while (off > tol * fro && fro > 0.0) {
    if (sweep >= kSweepBudget)
      throw NoConvergence("Jacobi: sweep budget exhausted", off);
    ++sweep;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (aqq - app) / (2.0 * apq);
        const double tr = (theta >= 0.0 ? 1.0 : -1.0) /
                          (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(tr * tr + 1.0);
        const double s = tr * c;
        for (std::size_t r = 0; r < m; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          const double nrp = c * arp - s * arq;
          const double nrq = s * arp + c * arq;
          a(r, p) = a(p, r) = nrp;
          a(r, q) = a(q, r) = nrq;
        }
        a(p, p) = app - tr * apq;
        a(q, q) = aqq + tr * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
    off = offNorm();
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  result.values.resize(m);
  result.vectors = DenseMatrix(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    result.values[k] = a(order[k], order[k]);
    const auto src = v.col(order[k]);
    std::copy(src.begin(), src.end(), result.vectors.col(k).begin());
  }
  result.sweeps = sweep;
  return result;
}

SymmetricTridiagonal householderTridiagonalize(const DenseSymmetric& input) {
  const std::size_t n = input.order();
  DenseMatrix a = input.toDense();  // only the lower triangle is kept current
  SymmetricTridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(n > 0 ? n - 1 : 0);
  Vector v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    auto x = a.col(k).subspan(k + 1, len);
    const double xnorm = norm2(x);
    t.diag[k] = a(k, k);
    if (xnorm == 0.0) {
      t.offdiag[k] = 0.0;
      continue;
    }
    const double alpha = x[0] >= 0.0 ? -xnorm : xnorm;
    std::span<double> vs(v.data(), len);
    std::copy(x.begin(), x.end(), vs.begin());
    vs[0] -= alpha;
    const double vnorm = norm2(vs);
    t.offdiag[k] = alpha;
    if (vnorm == 0.0) continue;
    scale(1.0 / vnorm, vs);

    // p = A22 v using the lower triangle of the trailing block
    std::span<double> ps(p.data(), len);
    std::fill(ps.begin(), ps.end(), 0.0);
    for (std::size_t jj = 0; jj < len; ++jj) {
      const std::size_t j = k + 1 + jj;
      const double* colj = &a(j, j);
      double acc = colj[0] * vs[jj];
      const double vj = vs[jj];
      for (std::size_t ii = jj + 1; ii < len; ++ii) {
        acc += colj[ii - jj] * vs[ii];
        ps[ii] += colj[ii - jj] * vj;
      }
      ps[jj] += acc;
    }
    const double kappa = dot(vs, ps);
    axpy(-kappa, vs, ps);  // w = p - (v'p) v
    // A22 <- A22 - 2 v w' - 2 w v'   (lower triangle)
    for (std::size_t jj = 0; jj < len; ++jj) {
      const std::size_t j = k + 1 + jj;
      double* colj = &a(j, j);
      const double vj = vs[jj], wj = ps[jj];
      for (std::size_t ii = jj; ii < len; ++ii)
        colj[ii - jj] -= 2.0 * (vs[ii] * wj + ps[ii] * vj);
    }
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.offdiag[n - 2] = a(n - 1, n - 2);
  }
  t.diag[n - 1] = a(n - 1, n - 1);
  return t;
}

// ---------------------------------------------------------------------------
// Power iteration for the 2-norm

NormEstimate operatorNorm2(const LinearOperator& op, double tol, int maxit, std::uint64_t seed) {
  if (op.cols == 0 || op.rows == 0) throw std::invalid_argument("operatorNorm2: empty operator");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector x(op.cols), y(op.rows), z(op.cols);
  for (auto& v : x) v = normal(rng);
  scale(1.0 / norm2(x), x);

  NormEstimate est;
  double prev = 0.0;
  for (int it = 1; it <= maxit; ++it) {
    op.apply(x, y);
    const double sigma = norm2(y);
    est.value = sigma;
    est.iterations = it;
    if (sigma == 0.0) {
      est.converged = true;
      return est;
    }
    if (it > 1 && std::abs(sigma - prev) <= tol * sigma) {
      est.converged = true;
      return est;
    }
    prev = sigma;
    op.applyTranspose(y, z);
    const double zn = norm2(z);
    if (zn == 0.0) {
      est.converged = true;
      return est;
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] / zn;
  }
  return est;
}

DenseMatrix orthonormalComplement(std::span<const double> v) {
  const std::size_t m = v.size();
  const double nv = norm2(v);
  if (m == 0 || nv == 0.0) throw ZeroVector();
  Vector w(v.begin(), v.end());
  scale(1.0 / nv, w);
  w[0] += (w[0] >= 0.0 ? 1.0 : -1.0);
  const double ww = dot(w, w);
  DenseMatrix basis(m, m - 1);
  for (std::size_t j = 1; j < m; ++j) {
    auto c = basis.col(j - 1);
    const double f = 2.0 * w[j] / ww;
    for (std::size_t i = 0; i < m; ++i) c[i] = (i == j ? 1.0 : 0.0) - f * w[i];
  }
  return basis;
}

CgResult conjugateGradient(const SymmetricLinearOperator& a, double shift,
                           std::span<const double> b, double tol, int maxit) {
  const std::size_t n = a.dimension();
  CgResult res;
  res.x.assign(n, 0.0);
  Vector r(b.begin(), b.end());
  Vector p = r, ap(n);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  double rr = dot(r, r);
  for (int it = 1; it <= maxit; ++it) {
    a.apply(p, ap);
    axpy(shift, p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    axpy(alpha, p, res.x);
    axpy(-alpha, ap, r);
    const double rrNew = dot(r, r);
    res.iterations = it;
    res.relativeResidual = std::sqrt(rrNew) / bnorm;
    if (res.relativeResidual <= tol) {
      res.converged = true;
      break;
    }
    const double beta = rrNew / rr;
    rr = rrNew;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  return res;
}

}  // namespace trslab
