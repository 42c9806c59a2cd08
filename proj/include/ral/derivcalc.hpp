#pragma once
// First and second directional derivatives of Q_alpha along the normalized
// curve (x + t y)/sqrt(1 + t^2), the phi coefficient tables, criticality
// testing, the trace Taylor engine on Tr f(A + tB), and fd oracles.

#include "ral/core.hpp"
#include "ral/entropy.hpp"
#include "ral/hadamard.hpp"
#include "ral/matspace.hpp"

#include <functional>

namespace ral::derivcalc {

using entropy::AlphaParam;
using hadamard::HadamardOperator;
using hadamard::PhiSign;
using matspace::SubspaceBasis;

// The curve derivative of Q carries twice the naive alpha factor: both
// halves of the doubled spectrum of the linearization contribute equally.
// Calibrated once against fd_oracle and frozen; pinned by a test.
inline constexpr double first_deriv_scale = 2.0;  // multiplies alpha

struct HermitianPair {
  Matrix w;  // (y + y*)/2
  Matrix z;  // (y - y*)/(2i)
};

struct TaylorCoeffs {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double holder_eps = 1.0;  // remainder is O(t^(2 + holder_eps))
};

struct DerivativeReport {
  int order = 0;
  double analytic = 0.0;
  double oracle = 0.0;
  double abs_diff = 0.0;
};

struct CriticalityCheck {
  bool critical = false;
  double residual = 0.0;
};

struct EigenPerturbation {
  double mu0 = 0.0, mu1 = 0.0, mu2 = 0.0;
};

// Scalar f with two derivatives; holder_eps classifies the Taylor remainder.
struct ScalarC2 {
  std::function<double(double)> f, df, ddf;
  double holder_eps = 1.0;
};

// g_alpha(x) = |x|^(2 alpha), the trace function of the linearization.
ScalarC2 g_alpha_function(const AlphaParam& alpha);

// Scalar kernel of the phi tables; a, b are eigenvalues of rho. Switches to
// the limit value when |sqrt(a) - sqrt(b)| < tol::deg_gap.
double phi_entry(double a, double b, double alpha, PhiSign sign);

// (x + t y)/sqrt(1 + t^2); requires Tr(x y*) = 0.
Matrix curve_point(const Matrix& x, const Matrix& y, double t);

HermitianPair hermitian_parts(const Matrix& y);

// Arity-2 table phi_jk = (p_j^(a-1/2) +/- p_k^(a-1/2))/(sqrt(p_j) +/- sqrt(p_k)).
HadamardOperator phi_coefficients(const RealVector& p, const AlphaParam& alpha,
                                  PhiSign sign);

// d/dt Q_alpha(curve) at 0 = first_deriv_scale * alpha * Tr(w x^(2a-1)).
double first_derivative(const Matrix& x_diag, const Matrix& y,
                        const AlphaParam& alpha);

// d2/dt2 Q_alpha(curve) at 0
//   = 2 alpha (-Tr rho^a + Tr[w Phi-(w)] + Tr[z Phi+(z)]),  rho = x^2.
double second_derivative(const Matrix& x_diag, const Matrix& y,
                         const AlphaParam& alpha);

// Max of |Tr(y_i x^(2a-1))| and |Tr(y_i* x^(2a-1))| over an orthonormal
// basis of the complement of x inside k; aligns (k, x) internally.
CriticalityCheck is_critical(const Matrix& x, const SubspaceBasis& k,
                             const AlphaParam& alpha,
                             double tol = tol::critical_default);

// Central differences of t -> q_alpha(curve_point(x,y,t)) at 0 with one
// Richardson extrapolation level.
double fd_oracle(const Matrix& x, const Matrix& y, const AlphaParam& alpha,
                 int order, double h = opt::fd_step);

DerivativeReport derivative_report(const Matrix& x_diag, const Matrix& y,
                                   const AlphaParam& alpha, int order,
                                   double h = opt::fd_step);

// Taylor coefficients of t -> Tr f(A + tB) for diagonal Hermitian A:
// c0 = sum f(l_j), c1 = sum f'(l_j) B_jj,
// c2 = sum_jk (f'(l_j) - f'(l_k))/(2(l_j - l_k)) |B_jk|^2 with the quotient
// replaced by f''/2 at gaps below tol::deg_gap.
TaylorCoeffs trace_taylor_coeffs(const Matrix& a_diag, const Matrix& b,
                                 const ScalarC2& f);

// mu_j(t) = mu0 + mu1 t + mu2 t^2 + O(t^3) for the j-th (simple) eigenvalue
// of A + tB; j is zero-based.
EigenPerturbation eigenvalue_perturbation(const Matrix& a_diag,
                                          const Matrix& b, Index j);

// [[0, x], [x*, 0]] after zero-padding x square; Tr X^(2a) = 2 Q_alpha(x).
Matrix linearize(const Matrix& x);

}  // namespace ral::derivcalc
