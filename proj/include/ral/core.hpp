#pragma once
// Shared aliases, numeric policy constants, and error types.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ral {

inline constexpr const char* version = "0.1.0";

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
// Hard switch between direct difference quotients and their limits,
// applied to |sqrt(p_j) - sqrt(p_k)| and to eigenvalue gaps.
inline constexpr double deg_gap = 1e-8;
// Off-diagonal mass allowed where a matrix is required to be diagonal.
inline constexpr double diagonal = 1e-10;
// |Tr(x y*)| allowed where a curve direction must be orthogonal to x.
inline constexpr double ortho = 1e-10;
// Residual allowed for span membership.
inline constexpr double membership = 1e-8;
// Gram-Schmidt drop threshold, relative to the input norm.
inline constexpr double gs_drop = 1e-10;
inline constexpr double unit_norm = 1e-8;
inline constexpr double density = 1e-10;
// Eigenvalues of nominal PSD matrices may undershoot zero this far;
// anything lower is an input error, anything above is clamped to 0.
inline constexpr double eig_floor = -1e-10;
inline constexpr double kraus_completeness = 1e-8;
// Scalar difference quotients switch to limits below this denominator gap.
inline constexpr double denom_gap = 1e-8;
inline constexpr double critical_default = 1e-8;
inline constexpr double eig_classify_default = 1e-7;
}  // namespace tol

namespace opt {
inline constexpr double fd_step = 1e-3;
inline constexpr double grad_tol = 1e-9;
inline constexpr int restarts = 16;
inline constexpr int max_iters = 5000;
inline constexpr double armijo_c = 1e-4;
inline constexpr double armijo_shrink = 0.5;
}  // namespace opt

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct dimension_error : error {
  using error::error;
};
struct precondition_error : error {
  using error::error;
};
struct membership_error : error {
  using error::error;
};
struct degeneracy_error : error {
  using error::error;
};
struct unsupported_error : error {
  using error::error;
};
struct parse_error : error {
  using error::error;
};
struct usage_error : error {
  using error::error;
};
struct convergence_error : error {
  convergence_error(const std::string& what, double residual)
      : error(what), best_residual(residual) {}
  double best_residual;
};

}  // namespace ral
