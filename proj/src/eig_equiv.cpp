#include "trslab/eig_equiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "trslab/errors.hpp"

namespace trslab {

AugmentedOperator::AugmentedOperator(SymmetricLinearOperator a, Vector g, double delta)
    : n_(a.dimension()), a_(std::move(a)), g_(std::move(g)), delta_(delta) {
  if (g_.size() != n_) throw std::invalid_argument("AugmentedOperator: size mismatch");
  if (!(delta_ > 0.0)) throw std::invalid_argument("AugmentedOperator: radius must be positive");
}

void AugmentedOperator::apply(std::span<const double> x, std::span<double> y) const {
  const auto u = x.first(n_);
  const auto v = x.subspan(n_, n_);
  auto top = y.first(n_);
  auto bottom = y.subspan(n_, n_);
  a_.apply(u, top);
  scale(-1.0, top);
  axpy(dot(g_, v) / (delta_ * delta_), g_, top);
  a_.apply(v, bottom);
  for (std::size_t i = 0; i < n_; ++i) bottom[i] = u[i] - bottom[i];
}

void AugmentedOperator::applyTranspose(std::span<const double> x, std::span<double> y) const {
  const auto u = x.first(n_);
  const auto v = x.subspan(n_, n_);
  auto top = y.first(n_);
  auto bottom = y.subspan(n_, n_);
  a_.apply(u, top);
  for (std::size_t i = 0; i < n_; ++i) top[i] = v[i] - top[i];
  a_.apply(v, bottom);
  scale(-1.0, bottom);
  axpy(dot(g_, u) / (delta_ * delta_), g_, bottom);
}

LinearOperator AugmentedOperator::asLinearOperator() const {
  auto self = std::make_shared<AugmentedOperator>(*this);
  LinearOperator op;
  op.rows = op.cols = dimension();
  op.apply = [self](std::span<const double> x, std::span<double> y) { self->apply(x, y); };
  op.applyTranspose = [self](std::span<const double> x, std::span<double> y) {
    self->applyTranspose(x, y);
  };
  return op;
}

DenseMatrix AugmentedOperator::assembleDense() const {
  const std::size_t dim = dimension();
  DenseMatrix m(dim, dim);
  Vector e(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    apply(e, m.col(j));
    e[j] = 0.0;
  }
  return m;
}

DenseMatrix assembleProjectedM(const SymmetricTridiagonal& t, double beta0, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("assembleProjectedM: radius must be positive");
  const std::size_t m = t.order();
  DenseMatrix out(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    out(i, i) = -t.diag[i];
    out(m + i, m + i) = -t.diag[i];
    out(m + i, i) = 1.0;
    if (i + 1 < m) {
      out(i, i + 1) = out(i + 1, i) = -t.offdiag[i];
      out(m + i, m + i + 1) = out(m + i + 1, m + i) = -t.offdiag[i];
    }
  }
  out(0, m) = beta0 * beta0 / (delta * delta);
  return out;
}

LinearOperator projectedOperator(const SymmetricTridiagonal& t, double beta0, double delta) {
  auto tt = std::make_shared<SymmetricTridiagonal>(t);
  const std::size_t m = t.order();
  const double rank1 = beta0 * beta0 / (delta * delta);
  LinearOperator op;
  op.rows = op.cols = 2 * m;
  op.apply = [tt, m, rank1](std::span<const double> x, std::span<double> y) {
    auto top = y.first(m);
    auto bottom = y.subspan(m, m);
    tt->apply(x.first(m), top);
    tt->apply(x.subspan(m, m), bottom);
    for (std::size_t i = 0; i < m; ++i) {
      top[i] = -top[i];
      bottom[i] = x[i] - bottom[i];
    }
    top[0] += rank1 * x[m];
  };
  op.applyTranspose = [tt, m, rank1](std::span<const double> x, std::span<double> y) {
    auto top = y.first(m);
    auto bottom = y.subspan(m, m);
    tt->apply(x.first(m), top);
    tt->apply(x.subspan(m, m), bottom);
    for (std::size_t i = 0; i < m; ++i) {
      top[i] = x[m + i] - top[i];
      bottom[i] = -bottom[i];
    }
    bottom[0] += rank1 * x[0];
  };
  return op;
}

AugmentedEigenpair eigpairFromTrs(const SymmetricTridiagonal& t, double lambda,
                                  std::span<const double> h, double beta0, double delta,
                                  double tol) {
  const std::size_t m = t.order();
  if (h.size() != m) throw std::invalid_argument("eigpairFromTrs: size mismatch");
  const double nh = norm2(h);
  if (nh == 0.0) throw ZeroVector();

  AugmentedEigenpair pair;
  pair.mu = lambda;
  pair.z1.assign(h.begin(), h.end());
  scale(1.0 / nh, pair.z1);
  pair.z2 = solveShifted(t, lambda, pair.z1);
  const double nz = std::hypot(1.0, norm2(pair.z2));
  scale(1.0 / nz, pair.z1);
  scale(1.0 / nz, pair.z2);

  const LinearOperator op = projectedOperator(t, beta0, delta);
  Vector z(2 * m), mz(2 * m);
  std::copy(pair.z1.begin(), pair.z1.end(), z.begin());
  std::copy(pair.z2.begin(), pair.z2.end(), z.begin() + static_cast<std::ptrdiff_t>(m));
  op.apply(z, mz);
  axpy(-lambda, z, mz);
  pair.residual = norm2(mz);
  pair.normM = operatorNorm2(op, 1e-8, 1000).value;
  if (pair.residual > tol * pair.normM)
    throw VerificationFailed("projected eigenpair residual above tolerance",
                             pair.residual / pair.normM);
  return pair;
}

Vector recoverSolution(std::span<const double> y1, std::span<const double> y2,
                       std::span<const double> g, double delta) {
  const double gy2 = dot(g, y2);
  if (std::abs(gy2) <= 1e-13 * norm2(g) * norm2(y2)) throw HardCaseSignal();
  Vector s(y1.begin(), y1.end());
  scale(-delta * delta / gy2, s);
  return s;
}

double spectralCondition(const SymmetricTridiagonal& t, double lambda, std::span<const double> z1) {
  const Vector w = solveShifted(t, lambda, z1);
  return 1.0 / (2.0 * dot(z1, w));
}

double spectralConditionPair(std::span<const double> y1, std::span<const double> y2) {
  return 1.0 / (2.0 * std::abs(dot(y1, y2)));
}

double separation(const DenseMatrix& m, std::span<const double> z, double mu) {
  if (m.rows() != m.cols() || z.size() != m.rows())
    throw std::invalid_argument("separation: shape mismatch");
  const DenseMatrix zc = orthonormalComplement(z);
  if (zc.cols() == 0) return std::numeric_limits<double>::infinity();
  DenseMatrix b = matmulTransposed(zc, matmul(m, zc));
  for (std::size_t i = 0; i < b.rows(); ++i) b(i, i) -= mu;
  const DenseMatrix gram = matmulTransposed(b, b);
  const SymmetricTridiagonal tri = householderTridiagonalize(DenseSymmetric::fromLower(gram));
  const double width = std::max(1.0, gram.frobeniusNorm());
  const double smallest = extremalEigTridiagonal(tri, 1e-15 * width).min;
  return std::sqrt(std::max(0.0, smallest));
}

namespace {

// ||y - QQ'y|| with one extra projection pass for accuracy
double projectedOut(std::span<const double> y, const DenseMatrix& q, std::size_t cols) {
  Vector r(y.begin(), y.end());
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t j = 0; j < cols; ++j) axpy(-dot(q.col(j), r), q.col(j), r);
  return norm2(r);
}

}  // namespace

double subspaceSine(std::span<const double> y1, std::span<const double> y2, const DenseMatrix& q,
                    std::size_t cols) {
  if (cols == 0) cols = q.cols();
  return std::hypot(projectedOut(y1, q, cols), projectedOut(y2, q, cols));
}

double gammaTilde(const AugmentedOperator& m, const DenseMatrix& q, std::size_t cols) {
  if (cols == 0) cols = q.cols();
  const std::size_t n = m.dimension() / 2;
  auto qq = std::make_shared<DenseMatrix>(q);
  auto mm = std::make_shared<AugmentedOperator>(m);
  // x <- P x, or (I - P) x when complement is set
  auto project = [qq, n, cols](std::span<double> x, bool complement) {
    for (int half = 0; half < 2; ++half) {
      auto part = x.subspan(half * n, n);
      Vector p(n, 0.0);
      for (std::size_t j = 0; j < cols; ++j) axpy(dot(qq->col(j), part), qq->col(j), p);
      if (complement)
        axpy(-1.0, p, part);
      else
        std::copy(p.begin(), p.end(), part.begin());
    }
  };
  LinearOperator op;
  op.rows = op.cols = 2 * n;
  op.apply = [mm, project](std::span<const double> x, std::span<double> y) {
    Vector t(x.begin(), x.end());
    project(t, true);
    mm->apply(t, y);
    project(y, false);
  };
  op.applyTranspose = [mm, project](std::span<const double> x, std::span<double> y) {
    Vector t(x.begin(), x.end());
    project(t, false);
    mm->applyTranspose(t, y);
    project(y, true);
  };
  return operatorNorm2(op, 1e-8, 1000).value;
}

SolutionAngle solutionSine(std::span<const double> sk, std::span<const double> sOpt) {
  const double nk = norm2(sk);
  const double no = norm2(sOpt);
  if (nk == 0.0 || no == 0.0) throw ZeroVector();
  Vector perp(sk.begin(), sk.end());
  axpy(-dot(sOpt, sk) / (no * no), sOpt, perp);
  Vector diff(sk.begin(), sk.end());
  axpy(-1.0, sOpt, diff);
  return {std::min(1.0, norm2(perp) / nk), norm2(diff) / no};
}

ReferenceEigenpair referenceEigenpair(const SymmetricLinearOperator& a, double lambda,
                                      std::span<const double> s) {
  ReferenceEigenpair out;
  out.y1.assign(s.begin(), s.end());
  if (const Vector* d = a.diagonal()) {
    out.y2.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out.y2[i] = s[i] / ((*d)[i] + lambda);
  } else {
    const CgResult cg = conjugateGradient(a, lambda, s, 1e-14, static_cast<int>(10 * s.size() + 100));
    out.y2 = cg.x;
  }
  Vector r = a.apply(out.y2);
  axpy(lambda, out.y2, r);
  axpy(-1.0, s, r);
  out.solveResidual = norm2(r) / norm2(s);
  const double nrm = std::hypot(norm2(out.y1), norm2(out.y2));
  scale(1.0 / nrm, out.y1);
  scale(1.0 / nrm, out.y2);
  out.y1Norm = norm2(out.y1);
  return out;
}

}  // namespace trslab
