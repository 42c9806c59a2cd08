#include "ral/matspace.hpp"

#include <algorithm>
#include <random>
#include <utility>

namespace ral::matspace {

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw dimension_error("hs_inner: shape mismatch");
  return (a.array() * b.array().conjugate()).sum();
}

double hs_norm(const Matrix& a) { return a.norm(); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix pad_square(const Matrix& a) {
  if (a.rows() == a.cols()) return a;
  const Index s = std::max(a.rows(), a.cols());
  Matrix out = Matrix::Zero(s, s);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  return out;
}

static void require_shape(const SubspaceBasis& k, const Matrix& x,
                          const char* who) {
  if (x.rows() != k.rows || x.cols() != k.cols)
    throw dimension_error(std::string(who) + ": shape mismatch");
}

Eigen::VectorXcd coefficients(const SubspaceBasis& k, const Matrix& x) {
  require_shape(k, x, "coefficients");
  Eigen::VectorXcd c(k.dim());
  for (Index i = 0; i < k.dim(); ++i) c(i) = hs_inner(x, k.basis[i]);
  return c;
}

Matrix project(const SubspaceBasis& k, const Matrix& x) {
  const auto c = coefficients(k, x);
  Matrix out = Matrix::Zero(k.rows, k.cols);
  for (Index i = 0; i < k.dim(); ++i) out += c(i) * k.basis[i];
  return out;
}

double membership_residual(const SubspaceBasis& k, const Matrix& x) {
  return (x - project(k, x)).norm();
}

SubspaceBasis orthonormalize(const std::vector<Matrix>& vectors) {
  if (vectors.empty()) throw precondition_error("orthonormalize: empty input");
  SubspaceBasis out{vectors.front().rows(), vectors.front().cols(), {}};
  for (const auto& v : vectors) {
    if (v.rows() != out.rows || v.cols() != out.cols)
      throw dimension_error("orthonormalize: shape mismatch");
    if (!v.allFinite())
      throw precondition_error("orthonormalize: non-finite entry");
    const double in_norm = v.norm();
    Matrix w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : out.basis) w -= hs_inner(w, b) * b;
    const double res = w.norm();
    if (in_norm == 0.0 || res < tol::gs_drop * in_norm) continue;
    out.basis.push_back(w / res);
  }
  if (out.basis.empty())
    throw precondition_error("orthonormalize: input spans nothing");
  return out;
}

SubspaceBasis orth_complement(const SubspaceBasis& k, const Matrix& x) {
  require_shape(k, x, "orth_complement");
  if (membership_residual(k, x) > tol::membership)
    throw membership_error("orth_complement: x not in span");
  SubspaceBasis out{k.rows, k.cols, {}};
  const Index d = k.dim();
  if (d == 1) return out;
  // First Householder Q column is x's coefficient direction (up to phase),
  // so columns 2..d give the coefficient vectors of the complement.
  Eigen::MatrixXcd c = coefficients(k, x).normalized();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(c);
  Eigen::MatrixXcd q = qr.householderQ();
  for (Index i = 1; i < d; ++i) {
    Matrix y = Matrix::Zero(k.rows, k.cols);
    for (Index j = 0; j < d; ++j) y += q(j, i) * k.basis[j];
    out.basis.push_back(std::move(y));
  }
  return out;
}

Aligned schmidt_align(const SubspaceBasis& k, const Matrix& x) {
  require_shape(k, x, "schmidt_align");
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Aligned out;
  out.form = SchmidtForm{svd.matrixU().adjoint(), svd.matrixV(),
                         svd.singularValues()};
  out.x = Matrix::Zero(x.rows(), x.cols());
  for (Index i = 0; i < out.form.sigma.size(); ++i)
    out.x(i, i) = out.form.sigma(i);
  out.k.rows = k.rows;
  out.k.cols = k.cols;
  out.k.basis.reserve(k.basis.size());
  for (const auto& b : k.basis) out.k.basis.push_back(out.form.u * b * out.form.v);
  return out;
}

SubspaceBasis tensor_subspace(const SubspaceBasis& a, const SubspaceBasis& b) {
  SubspaceBasis out{a.rows * b.rows, a.cols * b.cols, {}};
  out.basis.reserve(a.basis.size() * b.basis.size());
  for (const auto& ba : a.basis)
    for (const auto& bb : b.basis) out.basis.push_back(kron(ba, bb));
  return out;
}

SubspaceBasis random_subspace(Index n, Index m, Index d, std::uint64_t seed) {
  if (n < 1 || m < 1 || d < 1 || d > n * m)
    throw dimension_error("random_subspace: need 1 <= d <= n*m");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Matrix> vs;
  vs.reserve(d);
  for (Index v = 0; v < d; ++v) {
    Matrix mat(n, m);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < m; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        mat(i, j) = Complex(re, im);
      }
    vs.push_back(std::move(mat));
  }
  auto out = orthonormalize(vs);
  if (out.dim() != d)
    throw degeneracy_error("random_subspace: rank-deficient draw");
  return out;
}

}  // namespace ral::matspace
