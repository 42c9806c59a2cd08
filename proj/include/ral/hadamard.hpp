#pragma once
// Entrywise-product (Hadamard) operators on matrices and on tensor products,
// the componentwise comparison Phi <= Psi, and the scalar inequality family
// backing it, including the exploratory concavity probe below alpha = 1.

#include "ral/core.hpp"
#include "ral/entropy.hpp"

#include <string>
#include <vector>

namespace ral::hadamard {

using entropy::AlphaParam;

enum class PhiSign { plus, minus };

// Real symmetric coefficient table applied entrywise. Arity 2 tables index
// (j,k); arity 4 tables index ((j,k),(l,m)) through the composite
// lexicographic layout row = j*nb + k, col = l*nb + m, matching
// matspace::tensor_subspace and kron.
struct HadamardOperator {
  int arity = 2;
  Index na = 0;  // factor A spectrum size (or the only one for arity 2)
  Index nb = 0;  // factor B spectrum size; 0 for arity 2
  RealMatrix coeff;

  Index side() const { return coeff.rows(); }
};

struct Violation {
  char sign = '-';  // which table violated: '-' or '+'
  Index j = 0, k = 0, l = 0, m = 0;  // zero-based factor indices
  double phi = 0.0, psi = 0.0, slack = 0.0;
};

struct InequalityReport {
  std::string grid;
  double alpha = 0.0;
  long entries_checked = 0;
  double min_slack = 0.0;
  long violation_count = 0;
  Violation worst;  // smallest slack seen, violating or not
};

struct Lemma8Result {
  double lhs = 0.0, mid = 0.0;
  bool holds = false;
};

struct PropositionResult {
  double lhs = 0.0, rhs = 0.0;
  bool strict = false;
};

struct ConvexityWitness {
  double h_second = 0.0;  // second derivative of the log-substituted bound
  double chi_value = 0.0;
};

// (a^alpha - b^alpha)/(a - b), switching to the midpoint limit
// alpha * ((a+b)/2)^(alpha-1) below tol::deg_gap; 0^(alpha-1) is 0.
double dq_entry(double a, double b, double alpha);

Matrix apply_hadamard(const HadamardOperator& op, const Matrix& y);

HadamardOperator phi_tensor_coefficients(const RealVector& p,
                                         const RealVector& q,
                                         const AlphaParam& alpha,
                                         PhiSign sign);

HadamardOperator psi_coefficients(const RealVector& p, const RealVector& q,
                                  const AlphaParam& alpha);

InequalityReport check_phi_le_psi(const RealVector& p, const RealVector& q,
                                  const AlphaParam& alpha, double tol = 1e-12);

// (r^b - s^b)/(r - s) >= (r^b + s^b)/(r + s) >= 0 with limit conventions.
Lemma8Result lemma8_check(double r, double s, double beta);

// (1 - (st)^(a-1/2))/(1 - sqrt(st)) <= [(1-s^a)/(1-s)] [(1-t^a)/(1-t)].
PropositionResult proposition_con(double s, double t, const AlphaParam& alpha);

// a^2 e^(a xi)/(e^(a xi) - 1)^2, decreasing in a for xi != 0.
double upsilon(double a, double xi);

// (u - 2) e^u + u + 2; vanishes to second order at 0 and grows from there.
double chi(double u);

// h''(xi) = upsilon(1,xi) - upsilon(alpha,xi); chi(u) = (u-2)e^u + u + 2
// evaluated at u = alpha*xi.
ConvexityWitness convexity_witness(double xi, const AlphaParam& alpha);

}  // namespace ral::hadamard
