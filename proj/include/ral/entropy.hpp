#pragma once
// Renyi entropy functionals on states and matrices, and the correspondence
// between channels and HS-orthonormal matrix subspaces: for unit x in the
// subspace, x x* is the channel output on the matching pure input, so
// minimizing output entropy is maximizing Q_alpha over the subspace sphere.

#include "ral/core.hpp"
#include "ral/matspace.hpp"

#include <cstdint>
#include <vector>

namespace ral::entropy {

// Renyi order away from 1; regime is main for alpha > 1, else exploratory.
class AlphaParam {
 public:
  explicit AlphaParam(double value);
  double value() const { return value_; }
  bool main_regime() const { return value_ > 1.0; }

 private:
  double value_;
};

// Trace-one PSD matrix, validated on construction.
struct DensityMatrix {
  explicit DensityMatrix(Matrix m);
  Matrix mat;
};

// Kraus family with sum K* K = I, validated on construction.
struct Channel {
  explicit Channel(std::vector<Matrix> kraus_ops);
  std::vector<Matrix> kraus;
  Index d_out() const { return kraus.front().rows(); }
  Index d_in() const { return kraus.front().cols(); }
  Index env_dim() const { return static_cast<Index>(kraus.size()); }
};

struct MinEntropyEstimate {
  double estimate = 0.0;  // E_alpha at the best critical point found;
                          // an upper bound on the true minimum
  Matrix x;
  double q_value = 0.0;
  double residual = 0.0;
  int restarts_used = 0;
};

// Eigenvalues of a Hermitian matrix, ascending, clamped at zero.
// Values below the floor are input errors.
RealVector clamped_spectrum(const Matrix& hermitian);

// (1/(1-alpha)) log Tr(rho^alpha), natural log.
double renyi_entropy(const DensityMatrix& rho, const AlphaParam& alpha);

// Q_alpha(x) = Tr[(x x*)^alpha] = sum of singular values^(2 alpha).
double q_alpha(const Matrix& x, const AlphaParam& alpha);

// E_alpha(x) = log(Q_alpha(x)) / (1 - alpha); unitarily invariant.
double e_alpha(const Matrix& x, const AlphaParam& alpha);

// Image of the input basis under the Stinespring block map: element j is
// the d_out x E matrix whose k-th column is K_k e_j.
matspace::SubspaceBasis channel_to_subspace(const Channel& ch);

MinEntropyEstimate min_output_entropy_estimate(const Channel& ch,
                                               const AlphaParam& alpha,
                                               int restarts,
                                               std::uint64_t seed);

// (d_out - 1)(d_env - 1): subspaces larger than this cannot avoid product
// states, forcing the entropy minimum to zero.
long upb_dimension_bound(long d_out, long d_env);

}  // namespace ral::entropy
