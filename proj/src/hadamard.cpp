#include "ral/hadamard.hpp"

#include "ral/derivcalc.hpp"

#include <cmath>
#include <limits>

namespace ral::hadamard {

namespace {

void require_spectrum(const RealVector& p, const char* who) {
  if (p.size() == 0 || p.minCoeff() < -1e-12)
    throw precondition_error(std::string(who) + ": invalid spectrum");
  if (std::abs(p.sum() - 1.0) > tol::membership)
    throw precondition_error(std::string(who) +
                             ": spectrum must sum to 1");
}

RealVector product_spectrum(const RealVector& p, const RealVector& q) {
  RealVector r(p.size() * q.size());
  for (Index j = 0; j < p.size(); ++j)
    for (Index k = 0; k < q.size(); ++k)
      r(j * q.size() + k) = std::max(p(j), 0.0) * std::max(q(k), 0.0);
  return r;
}

}  // namespace

double dq_entry(double a, double b, double alpha) {
  if (std::abs(a - b) < tol::deg_gap) {
    const double avg = 0.5 * (a + b);
    return avg > 0.0 ? alpha * std::pow(avg, alpha - 1.0) : 0.0;
  }
  return (std::pow(a, alpha) - std::pow(b, alpha)) / (a - b);
}

Matrix apply_hadamard(const HadamardOperator& op, const Matrix& y) {
  if (y.rows() != op.coeff.rows() || y.cols() != op.coeff.cols())
    throw dimension_error("apply_hadamard: shape mismatch");
  return op.coeff.cast<Complex>().cwiseProduct(y);
}

HadamardOperator phi_tensor_coefficients(const RealVector& p,
                                         const RealVector& q,
                                         const AlphaParam& alpha,
                                         PhiSign sign) {
  if (!(alpha.value() > 1.0))
    throw precondition_error("phi_tensor_coefficients: alpha must be > 1");
  require_spectrum(p, "phi_tensor_coefficients");
  require_spectrum(q, "phi_tensor_coefficients");
  const RealVector r = product_spectrum(p, q);
  HadamardOperator op;
  op.arity = 4;
  op.na = p.size();
  op.nb = q.size();
  op.coeff.resize(r.size(), r.size());
  for (Index row = 0; row < r.size(); ++row)
    for (Index col = 0; col < r.size(); ++col)
      op.coeff(row, col) =
          derivcalc::phi_entry(r(row), r(col), alpha.value(), sign);
  return op;
}

HadamardOperator psi_coefficients(const RealVector& p, const RealVector& q,
                                  const AlphaParam& alpha) {
  if (!(alpha.value() > 1.0))
    throw precondition_error("psi_coefficients: alpha must be > 1");
  require_spectrum(p, "psi_coefficients");
  require_spectrum(q, "psi_coefficients");
  const Index na = p.size();
  const Index nb = q.size();
  HadamardOperator op;
  op.arity = 4;
  op.na = na;
  op.nb = nb;
  op.coeff.resize(na * nb, na * nb);
  for (Index j = 0; j < na; ++j)
    for (Index k = 0; k < nb; ++k)
      for (Index l = 0; l < na; ++l)
        for (Index m = 0; m < nb; ++m)
          op.coeff(j * nb + k, l * nb + m) =
              dq_entry(std::max(p(j), 0.0), std::max(p(l), 0.0),
                       alpha.value()) *
              dq_entry(std::max(q(k), 0.0), std::max(q(m), 0.0),
                       alpha.value());
  return op;
}

InequalityReport check_phi_le_psi(const RealVector& p, const RealVector& q,
                                  const AlphaParam& alpha, double tol) {
  // Accepts alpha < 1 deliberately: the exploratory probe records whether
  // the componentwise bound survives there, so entries are computed from
  // the scalar kernels instead of the alpha-gated table builders.
  require_spectrum(p, "check_phi_le_psi");
  require_spectrum(q, "check_phi_le_psi");
  const double av = alpha.value();
  const Index na = p.size();
  const Index nb = q.size();

  InequalityReport rep;
  rep.grid = std::to_string(na) + "x" + std::to_string(nb) +
             " spectra, both signs";
  rep.alpha = av;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < na; ++j)
    for (Index k = 0; k < nb; ++k)
      for (Index l = 0; l < na; ++l)
        for (Index m = 0; m < nb; ++m) {
          const double a = std::max(p(j), 0.0) * std::max(q(k), 0.0);
          const double b = std::max(p(l), 0.0) * std::max(q(m), 0.0);
          const double psi = dq_entry(std::max(p(j), 0.0), std::max(p(l), 0.0), av) *
                             dq_entry(std::max(q(k), 0.0), std::max(q(m), 0.0), av);
          for (PhiSign sign : {PhiSign::minus, PhiSign::plus}) {
            const double phi = derivcalc::phi_entry(a, b, av, sign);
            const double slack = psi - phi;
            rep.entries_checked += 1;
            if (slack < -tol) rep.violation_count += 1;
            if (slack < rep.min_slack) {
              rep.min_slack = slack;
              rep.worst = {sign == PhiSign::minus ? '-' : '+',
                           j, k, l, m, phi, psi, slack};
            }
          }
        }
  return rep;
}

Lemma8Result lemma8_check(double r, double s, double beta) {
  if (r < 0.0 || s < 0.0)
    throw precondition_error("lemma8_check: r, s must be non-negative");
  if (beta < 1.0) throw precondition_error("lemma8_check: beta must be >= 1");
  Lemma8Result out;
  if (r + s < tol::deg_gap) {
    // Both arguments at zero: read the empty quotients as 1 >= 1.
    out.lhs = 1.0;
    out.mid = 1.0;
  } else {
    out.mid = (std::pow(r, beta) + std::pow(s, beta)) / (r + s);
    out.lhs = std::abs(r - s) < tol::deg_gap
                  ? beta * std::pow(0.5 * (r + s), beta - 1.0)
                  : (std::pow(r, beta) - std::pow(s, beta)) / (r - s);
  }
  out.holds = out.lhs >= out.mid - 1e-12 && out.mid >= -1e-12;
  return out;
}

PropositionResult proposition_con(double s, double t,
                                  const AlphaParam& alpha) {
  if (s < 0.0 || t < 0.0)
    throw precondition_error("proposition_con: s, t must be non-negative");
  const double av = alpha.value();
  const auto g = [av](double v) {
    if (std::abs(1.0 - v) < tol::denom_gap) return av;
    return (1.0 - std::pow(v, av)) / (1.0 - v);
  };
  const double st = s * t;
  PropositionResult out;
  if (std::abs(1.0 - std::sqrt(st)) < tol::denom_gap)
    out.lhs = (2.0 * av - 1.0) * std::pow(st, av - 1.0);
  else
    out.lhs = (1.0 - std::pow(st, av - 0.5)) / (1.0 - std::sqrt(st));
  out.rhs = g(s) * g(t);
  out.strict = out.rhs - out.lhs > 1e-12;
  return out;
}

double upsilon(double a, double xi) {
  if (xi == 0.0 || a == 0.0)
    throw precondition_error("upsilon: a*xi must be nonzero");
  const double sh = std::sinh(0.5 * a * xi);
  return a * a / (4.0 * sh * sh);
}

double chi(double u) { return (u - 2.0) * std::exp(u) + u + 2.0; }

ConvexityWitness convexity_witness(double xi, const AlphaParam& alpha) {
  ConvexityWitness out;
  out.h_second = upsilon(1.0, xi) - upsilon(alpha.value(), xi);
  out.chi_value = chi(alpha.value() * xi);
  return out;
}

}  // namespace ral::hadamard
