#pragma once
// Local maximization of Q_alpha over the unit sphere of a matrix subspace,
// Hessian assembly/classification at critical points, the direction
// decomposition on tensor-product subspaces, and certification that a tensor
// product of local maxima (at least one non-degenerate) is again a local
// maximum, i.e. a local minimum of the output entropy.

#include "ral/core.hpp"
#include "ral/derivcalc.hpp"
#include "ral/entropy.hpp"
#include "ral/hadamard.hpp"
#include "ral/matspace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ral::additivity {

using entropy::AlphaParam;
using matspace::SubspaceBasis;

struct CriticalPoint {
  Matrix x;
  double q_value = 0.0;
  double residual = 0.0;  // max |Tr(y_i x^(2a-1))| over a basis of the
                          // complement of x inside the subspace
  int restarts_used = 0;  // restarts whose certified residual passed
};

enum class MaxClass { nondegenerate_max, degenerate_max_candidate, not_a_max };

const char* to_string(MaxClass c);

struct HessianSpectrum {
  RealVector eigenvalues;  // non-increasing, length 2 (dim K - 1)
  std::vector<Matrix> real_basis;  // {y_1..y_{d-1}, i y_1..i y_{d-1}}
  std::vector<std::string> basis_labels;
};

struct DirectionDecomposition {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;  // non-negative, squares sum to 1
  Matrix yB;      // unit element of (xB)-perp, zero matrix when c1 = 0
  Matrix yA;      // unit element of (xA)-perp, zero matrix when c2 = 0
  Matrix yprime;  // unit element of (xA)-perp (x) (xB)-perp, zero when c3 = 0
  RealVector schmidt_r;           // positive weights, squares sum to 1
  std::vector<Matrix> schmidt_a;  // orthonormal factors in (xA)-perp
  std::vector<Matrix> schmidt_b;  // orthonormal factors in (xB)-perp
};

struct Lemma2Report {
  double lhs = 0.0;       // second derivative along y at the product point
  double rhs = 0.0;       // class-weighted sum of pure-class derivatives
  double abs_diff = 0.0;
};

struct ABPair {
  Matrix a;  // Gram-like matrix of the Schmidt A-factors under the
             // difference-quotient table of rho_A
  Matrix b;
};

struct AdditivityCertificate {
  double class_b_max = 0.0;      // max D2 over the x_A (x) y_B block
  double class_a_max = 0.0;      // max D2 over the y_A (x) x_B block
  double class_prime_max = 0.0;  // max D2 over the y_A (x) y_B block
  double mixed_max = 0.0;        // max D2 over random cross-class directions
  double cross_term_max = 0.0;   // largest |H| entry coupling two classes
  double product_rule_dev = 0.0; // pure-class blocks vs scaled factor forms
  double tensor_residual = 0.0;  // criticality residual of x_A (x) x_B
  double tol_eig = 0.0;
  MaxClass factor_a = MaxClass::not_a_max;
  MaxClass factor_b = MaxClass::not_a_max;
  HessianSpectrum spectrum;  // full Hessian over the product complement
  std::string verdict;  // nondegenerate-local-min |
                        // local-min-degenerate-directions | FAILED
};

// Projected-gradient ascent of Q_alpha on the unit sphere of span(K) with
// backtracking line search; best converged restart wins; deterministic for
// a fixed seed. Residuals are certified with derivcalc::is_critical, not
// the optimizer's own gradient.
CriticalPoint maximize_q(const SubspaceBasis& k, const AlphaParam& alpha,
                         std::uint64_t seed, int restarts = opt::restarts,
                         int max_iters = opt::max_iters,
                         double grad_tol = opt::grad_tol);

// Real symmetric form H_ab of the second directional derivative over the
// real basis {y_i, i y_i} of the complement of x inside K; x must be
// critical. Diagonal entries are D2 at the basis directions; off-diagonal
// entries come from the exact polarization at the normalized midpoint.
HessianSpectrum hessian_form(const Matrix& x, const SubspaceBasis& k,
                             const AlphaParam& alpha);

MaxClass classify(const HessianSpectrum& spec,
                  double tol_eig = tol::eig_classify_default);

// Splits y in the complement of xA (x) xB into the three orthogonal classes
// xA (x) yB, yA (x) xB, yA (x) yB and Schmidt-decomposes the third.
DirectionDecomposition decompose_direction(const Matrix& y, const Matrix& xa,
                                           const SubspaceBasis& ka,
                                           const Matrix& xb,
                                           const SubspaceBasis& kb);

// Checks that D2 along y at xA (x) xB splits into the class-weighted sum
// with no cross terms; factors must be critical.
Lemma2Report verify_lemma2(const Matrix& xa, const SubspaceBasis& ka,
                           const Matrix& xb, const SubspaceBasis& kb,
                           const Matrix& y, const AlphaParam& alpha);

// A[i', i] = Tr[ yA_{i'}^* Phi(yA_i) ] with Phi the entrywise
// difference-quotient table of the factor spectrum pa (likewise B with pb);
// Hermitian, PSD, and spectrally below Tr rho^alpha at non-degenerate
// maxima. Schmidt factors are given in the aligned (diagonal) frame.
ABPair ab_matrices(const DirectionDecomposition& dec, const RealVector& pa,
                   const RealVector& pb, const AlphaParam& alpha);

// End-to-end certificate that xA (x) xB is a local maximum of Q_alpha over
// the product subspace: full Hessian over the class-ordered complement,
// per-class maxima, cross-term bound, and the product-rule cross-check.
// Rejects the doubly degenerate case, which this certificate cannot decide.
AdditivityCertificate verify_tensor_local_min(
    const Matrix& xa, const SubspaceBasis& ka, const Matrix& xb,
    const SubspaceBasis& kb, const AlphaParam& alpha,
    double tol_eig = tol::eig_classify_default);

}  // namespace ral::additivity
