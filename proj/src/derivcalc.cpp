#include "ral/derivcalc.hpp"

#include <cmath>
#include <utility>

namespace ral::derivcalc {

namespace {

void require_same_shape(const Matrix& x, const Matrix& y, const char* who) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw dimension_error(std::string(who) + ": shape mismatch");
}

// Diagonal with real non-negative entries, within tol::diagonal.
RealVector diagonal_sigma(const Matrix& x, const char* who) {
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      if (i == j) continue;
      if (std::abs(x(i, j)) > tol::diagonal)
        throw precondition_error(std::string(who) + ": x not diagonal");
    }
  const Index n = std::min(x.rows(), x.cols());
  RealVector sigma(n);
  for (Index i = 0; i < n; ++i) {
    const Complex d = x(i, i);
    if (std::abs(d.imag()) > tol::diagonal || d.real() < -tol::diagonal)
      throw precondition_error(std::string(who) +
                               ": diagonal not real non-negative");
    sigma(i) = std::max(d.real(), 0.0);
  }
  return sigma;
}

void require_orthogonal(const Matrix& x, const Matrix& y, const char* who,
                        double bound) {
  if (std::abs(matspace::hs_inner(x, y)) > bound)
    throw precondition_error(std::string(who) + ": y not orthogonal to x");
}

}  // namespace

ScalarC2 g_alpha_function(const AlphaParam& alpha) {
  const double a = alpha.value();
  ScalarC2 g;
  g.f = [a](double x) { return std::pow(x * x, a); };
  g.df = [a](double x) { return 2.0 * a * x * std::pow(x * x, a - 1.0); };
  g.ddf = [a](double x) {
    return 2.0 * a * (2.0 * a - 1.0) * std::pow(x * x, a - 1.0);
  };
  g.holder_eps = std::min(1.0, 2.0 * (a - 1.0));
  return g;
}

double phi_entry(double a, double b, double alpha, PhiSign sign) {
  const double ra = std::sqrt(a);
  const double rb = std::sqrt(b);
  if (std::abs(ra - rb) < tol::deg_gap) {
    const double avg = 0.5 * (a + b);
    const double base = avg > 0.0 ? std::pow(avg, alpha - 1.0) : 0.0;
    return sign == PhiSign::plus ? base : (2.0 * alpha - 1.0) * base;
  }
  const double pa = std::pow(a, alpha - 0.5);
  const double pb = std::pow(b, alpha - 0.5);
  return sign == PhiSign::plus ? (pa + pb) / (ra + rb) : (pa - pb) / (ra - rb);
}

Matrix curve_point(const Matrix& x, const Matrix& y, double t) {
  require_same_shape(x, y, "curve_point");
  require_orthogonal(x, y, "curve_point", tol::ortho);
  if (std::abs(x.norm() - 1.0) > tol::unit_norm ||
      std::abs(y.norm() - 1.0) > tol::unit_norm)
    throw precondition_error("curve_point: x, y must be normalized");
  return (x + t * y) / std::sqrt(1.0 + t * t);
}

HermitianPair hermitian_parts(const Matrix& y) {
  if (y.rows() != y.cols())
    throw dimension_error("hermitian_parts: not square");
  HermitianPair out;
  out.w = (y + y.adjoint()) / 2.0;
  out.z = (y - y.adjoint()) / Complex(0.0, 2.0);
  return out;
}

HadamardOperator phi_coefficients(const RealVector& p, const AlphaParam& alpha,
                                  PhiSign sign) {
  if (!(alpha.value() > 1.0))
    throw precondition_error("phi_coefficients: alpha must be > 1");
  if (p.size() > 0 && p.minCoeff() < -1e-12)
    throw precondition_error("phi_coefficients: negative eigenvalue");
  if (std::abs(p.sum() - 1.0) > tol::membership)
    throw precondition_error("phi_coefficients: eigenvalues must sum to 1");
  HadamardOperator op;
  op.arity = 2;
  op.na = p.size();
  op.nb = 0;
  op.coeff.resize(p.size(), p.size());
  for (Index j = 0; j < p.size(); ++j)
    for (Index k = 0; k < p.size(); ++k)
      op.coeff(j, k) =
          phi_entry(std::max(p(j), 0.0), std::max(p(k), 0.0), alpha.value(),
                    sign);
  return op;
}

double first_derivative(const Matrix& x_diag, const Matrix& y,
                        const AlphaParam& alpha) {
  require_same_shape(x_diag, y, "first_derivative");
  require_orthogonal(x_diag, y, "first_derivative", tol::membership);
  const RealVector sigma = diagonal_sigma(x_diag, "first_derivative");
  const Matrix ys = matspace::pad_square(y);
  const Matrix w = (ys + ys.adjoint()) / 2.0;
  const double a = alpha.value();
  double tr = 0.0;
  for (Index j = 0; j < sigma.size(); ++j)
    tr += w(j, j).real() * std::pow(sigma(j), 2.0 * a - 1.0);
  return first_deriv_scale * a * tr;
}

double second_derivative(const Matrix& x_diag, const Matrix& y,
                         const AlphaParam& alpha) {
  require_same_shape(x_diag, y, "second_derivative");
  require_orthogonal(x_diag, y, "second_derivative", tol::membership);
  const RealVector sigma = diagonal_sigma(x_diag, "second_derivative");
  const Index s = std::max(x_diag.rows(), x_diag.cols());
  RealVector p = RealVector::Zero(s);
  for (Index i = 0; i < sigma.size(); ++i) p(i) = sigma(i) * sigma(i);

  const auto [w, z] = hermitian_parts(matspace::pad_square(y));
  const double a = alpha.value();
  double tr_rho_a = 0.0;
  for (Index i = 0; i < s; ++i) tr_rho_a += std::pow(p(i), a);

  double quad = 0.0;
  for (Index j = 0; j < s; ++j)
    for (Index k = 0; k < s; ++k) {
      quad += phi_entry(p(j), p(k), a, PhiSign::minus) * std::norm(w(j, k));
      quad += phi_entry(p(j), p(k), a, PhiSign::plus) * std::norm(z(j, k));
    }
  return 2.0 * a * (quad - tr_rho_a);
}

CriticalityCheck is_critical(const Matrix& x, const SubspaceBasis& k,
                             const AlphaParam& alpha, double tol) {
  const auto aligned = matspace::schmidt_align(k, x);
  const auto comp = matspace::orth_complement(aligned.k, aligned.x);
  const double a = alpha.value();
  const Index s = std::max(x.rows(), x.cols());
  RealVector m = RealVector::Zero(s);
  for (Index i = 0; i < aligned.form.sigma.size(); ++i)
    m(i) = std::pow(aligned.form.sigma(i), 2.0 * a - 1.0);

  double residual = 0.0;
  for (const auto& y : comp.basis) {
    const Matrix ys = matspace::pad_square(y);
    Complex tr(0.0, 0.0);
    for (Index i = 0; i < s; ++i) tr += ys(i, i) * m(i);
    // Tr(y* x^(2a-1)) is the conjugate for real diagonal x^(2a-1), so one
    // magnitude covers both stated conditions.
    residual = std::max(residual, std::abs(tr));
  }
  return {residual <= tol, residual};
}

double fd_oracle(const Matrix& x, const Matrix& y, const AlphaParam& alpha,
                 int order, double h) {
  if (order != 1 && order != 2)
    throw precondition_error("fd_oracle: order must be 1 or 2");
  if (!(h > 0.0)) throw precondition_error("fd_oracle: h must be positive");
  const auto f = [&](double t) {
    return entropy::q_alpha(curve_point(x, y, t), alpha);
  };
  if (order == 1) {
    const auto d = [&](double s) { return (f(s) - f(-s)) / (2.0 * s); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
  }
  const double f0 = f(0.0);
  const auto d = [&](double s) {
    return (f(s) - 2.0 * f0 + f(-s)) / (s * s);
  };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

DerivativeReport derivative_report(const Matrix& x_diag, const Matrix& y,
                                   const AlphaParam& alpha, int order,
                                   double h) {
  DerivativeReport rep;
  rep.order = order;
  rep.analytic = order == 1 ? first_derivative(x_diag, y, alpha)
                            : second_derivative(x_diag, y, alpha);
  rep.oracle = fd_oracle(x_diag, y, alpha, order, h);
  rep.abs_diff = std::abs(rep.analytic - rep.oracle);
  return rep;
}

TaylorCoeffs trace_taylor_coeffs(const Matrix& a_diag, const Matrix& b,
                                 const ScalarC2& f) {
  require_same_shape(a_diag, b, "trace_taylor_coeffs");
  if (a_diag.rows() != a_diag.cols())
    throw dimension_error("trace_taylor_coeffs: not square");
  for (Index i = 0; i < a_diag.rows(); ++i)
    for (Index j = 0; j < a_diag.cols(); ++j)
      if (i != j && std::abs(a_diag(i, j)) > tol::diagonal)
        throw precondition_error("trace_taylor_coeffs: A not diagonal");

  const RealVector lam = a_diag.diagonal().real();
  TaylorCoeffs out;
  out.holder_eps = f.holder_eps;
  for (Index j = 0; j < lam.size(); ++j) {
    out.c0 += f.f(lam(j));
    out.c1 += f.df(lam(j)) * b(j, j).real();
    for (Index k = 0; k < lam.size(); ++k) {
      const double gap = lam(j) - lam(k);
      const double quot =
          std::abs(gap) < tol::deg_gap
              ? 0.5 * f.ddf(0.5 * (lam(j) + lam(k)))
              : (f.df(lam(j)) - f.df(lam(k))) / (2.0 * gap);
      out.c2 += quot * std::norm(b(j, k));
    }
  }
  return out;
}

EigenPerturbation eigenvalue_perturbation(const Matrix& a_diag,
                                          const Matrix& b, Index j) {
  require_same_shape(a_diag, b, "eigenvalue_perturbation");
  const RealVector lam = a_diag.diagonal().real();
  for (Index i = 0; i < a_diag.rows(); ++i)
    for (Index k = 0; k < a_diag.cols(); ++k)
      if (i != k && std::abs(a_diag(i, k)) > tol::diagonal)
        throw precondition_error("eigenvalue_perturbation: A not diagonal");
  if (j < 0 || j >= lam.size())
    throw dimension_error("eigenvalue_perturbation: index out of range");
  for (Index k = 0; k < lam.size(); ++k)
    if (k != j && std::abs(lam(j) - lam(k)) < tol::deg_gap)
      throw degeneracy_error("eigenvalue_perturbation: eigenvalue not simple");

  EigenPerturbation out;
  out.mu0 = lam(j);
  out.mu1 = b(j, j).real();
  for (Index k = 0; k < lam.size(); ++k)
    if (k != j) out.mu2 += std::norm(b(j, k)) / (lam(j) - lam(k));
  return out;
}

Matrix linearize(const Matrix& x) {
  const Matrix xs = matspace::pad_square(x);
  const Index n = xs.rows();
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = xs;
  out.bottomLeftCorner(n, n) = xs.adjoint();
  return out;
}

}  // namespace ral::derivcalc
