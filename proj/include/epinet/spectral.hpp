#ifndef EPINET_SPECTRAL_HPP
#define EPINET_SPECTRAL_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace epinet {

/// Matrix-free symmetric operator: `apply(x, y)` writes y = A x.
struct SymmetricOperator {
  std::size_t dimension = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;

  static SymmetricOperator from_dense(const Eigen::MatrixXd& m);
};

/// Largest eigenvalue of a symmetric matrix. Rejects asymmetric input
/// (relative tolerance 1e-12).
double lambda_max_dense(const Eigen::MatrixXd& m);

struct PowerIterationOptions {
  double tol = 1e-8;
  std::size_t max_iterations = 100000;
  std::uint64_t seed = 0x5eed;
  /// Rayleigh-quotient changes below tol on this many consecutive steps.
  int stable_steps = 3;
};

struct PowerIterationResult {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Dominant eigenvalue of a symmetric operator with nonnegative entries.
/// Iterates on A + cI with c = (A 1)_max / 4, which separates the Perron root
/// from -λ_max on bipartite structure. Never throws on non-convergence; the
/// flag in the result says so.
PowerIterationResult lambda_max_iterative(const SymmetricOperator& op, const PowerIterationOptions& opts = {});

/// Checks ⟨Av, w⟩ = ⟨v, Aw⟩ on random vectors, to 1e-10 ‖A‖‖v‖‖w‖.
bool is_self_adjoint(const SymmetricOperator& op, int samples = 4, std::uint64_t seed = 1);

bool is_metzler(const Eigen::MatrixXd& m);

struct AbscissaOptions {
  std::size_t max_dimension = 10000;
};

/// η(A) = max Re λ. Warns on stderr if A is not Metzler; refuses matrices
/// larger than opts.max_dimension.
double spectral_abscissa(const Eigen::MatrixXd& m, const AbscissaOptions& opts = {});

/// Matrix measure for the 2-norm; for symmetric matrices this is λ_max.
double matrix_measure_sym(const Eigen::MatrixXd& m);

}  // namespace epinet

#endif
