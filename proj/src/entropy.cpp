#include "ral/entropy.hpp"

#include "ral/additivity.hpp"

#include <cmath>
#include <utility>

namespace ral::entropy {

AlphaParam::AlphaParam(double value) : value_(value) {
  if (!(value > 0.0) || value == 1.0)
    throw precondition_error("alpha must be > 0 and != 1");
}

DensityMatrix::DensityMatrix(Matrix m) : mat(std::move(m)) {
  if (mat.rows() != mat.cols())
    throw dimension_error("DensityMatrix: not square");
  if ((mat - mat.adjoint()).norm() > tol::density)
    throw precondition_error("DensityMatrix: not Hermitian");
  if (std::abs(mat.trace().real() - 1.0) > tol::density ||
      std::abs(mat.trace().imag()) > tol::density)
    throw precondition_error("DensityMatrix: trace != 1");
  clamped_spectrum(mat);  // rejects eigenvalues below the floor
}

Channel::Channel(std::vector<Matrix> kraus_ops) : kraus(std::move(kraus_ops)) {
  if (kraus.empty()) throw precondition_error("Channel: no Kraus operators");
  const Index rows = kraus.front().rows();
  const Index cols = kraus.front().cols();
  Matrix sum = Matrix::Zero(cols, cols);
  for (const auto& k : kraus) {
    if (k.rows() != rows || k.cols() != cols)
      throw dimension_error("Channel: Kraus shape mismatch");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(cols, cols)).norm() > tol::kraus_completeness)
    throw precondition_error("Channel: sum K*K != I (not trace preserving)");
}

RealVector clamped_spectrum(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian,
                                           Eigen::EigenvaluesOnly);
  RealVector p = es.eigenvalues();
  if (p.minCoeff() < tol::eig_floor)
    throw precondition_error("spectrum: eigenvalue below the PSD floor");
  return p.cwiseMax(0.0);
}

double renyi_entropy(const DensityMatrix& rho, const AlphaParam& alpha) {
  const RealVector p = clamped_spectrum(rho.mat);
  double sum = 0.0;
  for (Index i = 0; i < p.size(); ++i) sum += std::pow(p(i), alpha.value());
  return std::log(sum) / (1.0 - alpha.value());
}

double q_alpha(const Matrix& x, const AlphaParam& alpha) {
  Eigen::JacobiSVD<Matrix> svd(x);
  const RealVector sigma = svd.singularValues();
  double sum = 0.0;
  for (Index i = 0; i < sigma.size(); ++i)
    sum += std::pow(sigma(i), 2.0 * alpha.value());
  return sum;
}

double e_alpha(const Matrix& x, const AlphaParam& alpha) {
  return std::log(q_alpha(x, alpha)) / (1.0 - alpha.value());
}

matspace::SubspaceBasis channel_to_subspace(const Channel& ch) {
  std::vector<Matrix> images;
  images.reserve(ch.d_in());
  for (Index j = 0; j < ch.d_in(); ++j) {
    Matrix m(ch.d_out(), ch.env_dim());
    for (Index k = 0; k < ch.env_dim(); ++k) m.col(k) = ch.kraus[k].col(j);
    images.push_back(std::move(m));
  }
  // Trace preservation makes the images HS-orthonormal already; a GS pass
  // only removes the 1e-8 slack the Channel invariant allows.
  return matspace::orthonormalize(images);
}

MinEntropyEstimate min_output_entropy_estimate(const Channel& ch,
                                               const AlphaParam& alpha,
                                               int restarts,
                                               std::uint64_t seed) {
  const additivity::CriticalPoint cp = additivity::maximize_q(
      channel_to_subspace(ch), alpha, seed, restarts);
  return {std::log(cp.q_value) / (1.0 - alpha.value()), cp.x, cp.q_value,
          cp.residual, cp.restarts_used};
}

long upb_dimension_bound(long d_out, long d_env) {
  if (d_out < 1 || d_env < 1)
    throw precondition_error("upb_dimension_bound: dims must be >= 1");
  return (d_out - 1) * (d_env - 1);
}

}  // namespace ral::entropy
