#include "epinet/spectral.hpp"

#include "epinet/error.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <vector>

namespace epinet {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    fail(ErrorKind::InvalidArgument, "matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorKind::InvalidArgument, "matrix is not symmetric");
}

}  // namespace

SymmetricOperator SymmetricOperator::from_dense(const Eigen::MatrixXd& m) {
  return {static_cast<std::size_t>(m.rows()), [m](std::span<const double> x, std::span<double> y) {
            Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
            Eigen::Map<Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
            yv.noalias() = m * xv;
          }};
}

double lambda_max_dense(const Eigen::MatrixXd& m) {
  check_symmetric(m);
  if (m.rows() == 0)
    return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::Numerical, "symmetric eigensolve did not converge");
  return es.eigenvalues().maxCoeff();
}

PowerIterationResult lambda_max_iterative(const SymmetricOperator& op, const PowerIterationOptions& opts) {
  const std::size_t n = op.dimension;
  PowerIterationResult res;
  if (n == 0) {
    res.converged = true;
    return res;
  }

  std::vector<double> x(n, 1.0), y(n);
  op.apply(x, y);
  const double row_max = *std::max_element(y.begin(), y.end());
  if (row_max <= 0.0 && *std::min_element(y.begin(), y.end()) >= 0.0) {
    // A 1 = 0 with nonnegative entries means A = 0.
    res.converged = true;
    return res;
  }
  const double shift = 0.25 * std::abs(row_max);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(0.0, 1e-3);
  for (auto& v : x)
    v = 1.0 + jitter(rng);
  double norm = std::sqrt(dot(x, x));
  for (auto& v : x)
    v /= norm;

  double prev = 0.0;
  int calm = 0;
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    op.apply(x, y);
    const double rq = dot(x, y);
    res.value = rq;
    res.iterations = it;
    if (it > 1) {
      const double change = std::abs(rq - prev);
      if (change <= opts.tol * std::max(std::abs(rq), 1e-300))
        ++calm;
      else
        calm = 0;
      if (calm >= opts.stable_steps) {
        res.converged = true;
        return res;
      }
    }
    prev = rq;
    for (std::size_t k = 0; k < n; ++k)
      y[k] += shift * x[k];
    norm = std::sqrt(dot(y, y));
    if (norm == 0.0) {
      res.converged = true;
      return res;
    }
    for (std::size_t k = 0; k < n; ++k)
      x[k] = y[k] / norm;
  }
  return res;
}

bool is_self_adjoint(const SymmetricOperator& op, int samples, std::uint64_t seed) {
  const std::size_t n = op.dimension;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> v(n), w(n), av(n), aw(n);
  for (int s = 0; s < samples; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = gauss(rng);
      w[k] = gauss(rng);
    }
    op.apply(v, av);
    op.apply(w, aw);
    const double nv = std::sqrt(dot(v, v)), nw = std::sqrt(dot(w, w));
    const double op_norm = std::max(std::sqrt(dot(av, av)) / nv, std::sqrt(dot(aw, aw)) / nw);
    if (std::abs(dot(av, w) - dot(v, aw)) > 1e-10 * std::max(op_norm, 1e-300) * nv * nw)
      return false;
  }
  return true;
}

bool is_metzler(const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (r != c && m(r, c) < 0.0)
        return false;
  return true;
}

double spectral_abscissa(const Eigen::MatrixXd& m, const AbscissaOptions& opts) {
  if (m.rows() != m.cols())
    fail(ErrorKind::InvalidArgument, "spectral abscissa needs a square matrix");
  if (static_cast<std::size_t>(m.rows()) > opts.max_dimension)
    fail(ErrorKind::Capacity, "matrix dimension " + std::to_string(m.rows()) + " exceeds the dense eigensolve cap " +
                                  std::to_string(opts.max_dimension));
  if (m.rows() == 0)
    fail(ErrorKind::InvalidArgument, "spectral abscissa of an empty matrix is undefined");
  if (!is_metzler(m))
    std::cerr << "warning: spectral_abscissa input is not Metzler; the abscissa may be complex\n";

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      fail(ErrorKind::Numerical, "symmetric eigensolve did not converge");
    return es.eigenvalues().maxCoeff();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::Numerical, "general eigensolve did not converge");
  return es.eigenvalues().real().maxCoeff();
}

double matrix_measure_sym(const Eigen::MatrixXd& m) { return lambda_max_dense(m); }

}  // namespace epinet
