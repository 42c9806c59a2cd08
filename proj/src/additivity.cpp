#include "ral/additivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace ral::additivity {

namespace {

using matspace::hs_inner;
using matspace::hs_norm;
using matspace::kron;

// Class weights below this are treated as exactly zero.
constexpr double coeff_floor = 1e-12;

Matrix assemble_point(const SubspaceBasis& k, const Eigen::VectorXcd& c) {
  Matrix x = Matrix::Zero(k.rows, k.cols);
  for (Index i = 0; i < k.dim(); ++i)
    x += c(i) * k.basis[static_cast<std::size_t>(i)];
  return x;
}

// {y_1..y_n, i y_1..i y_n}; orthonormal for the real part of the HS inner
// product whenever the y_i are HS-orthonormal.
std::vector<Matrix> real_doubling(const std::vector<Matrix>& ys) {
  std::vector<Matrix> out;
  out.reserve(2 * ys.size());
  for (const Matrix& y : ys) out.push_back(y);
  for (const Matrix& y : ys) out.push_back(Complex(0.0, 1.0) * y);
  return out;
}

// Matrix of the second-derivative quadratic form over a Re-orthonormal
// basis of directions. Off-diagonal entries polarize with the unit midpoint
// (e_p + e_q)/sqrt(2); the midpoint must be renormalized because the
// curve second derivative assumes a unit direction.
RealMatrix quadratic_form_matrix(const Matrix& x_diag,
                                 const std::vector<Matrix>& basis,
                                 const AlphaParam& alpha) {
  const Index d = static_cast<Index>(basis.size());
  RealMatrix h = RealMatrix::Zero(d, d);
  for (Index p = 0; p < d; ++p)
    h(p, p) = derivcalc::second_derivative(
        x_diag, basis[static_cast<std::size_t>(p)], alpha);
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  for (Index p = 0; p < d; ++p)
    for (Index q = p + 1; q < d; ++q) {
      const Matrix mid = inv_rt2 * (basis[static_cast<std::size_t>(p)] +
                                    basis[static_cast<std::size_t>(q)]);
      const double off = derivcalc::second_derivative(x_diag, mid, alpha) -
                         0.5 * h(p, p) - 0.5 * h(q, q);
      h(p, q) = off;
      h(q, p) = off;
    }
  return h;
}

RealVector descending_eigenvalues(const RealMatrix& h) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw error("hessian eigensolver failed");
  return es.eigenvalues().reverse();
}

SubspaceBasis pad_basis(const SubspaceBasis& k) {
  SubspaceBasis out;
  const Index s = std::max(k.rows, k.cols);
  out.rows = s;
  out.cols = s;
  out.basis.reserve(k.basis.size());
  for (const Matrix& b : k.basis)
    out.basis.push_back(matspace::pad_square(b));
  return out;
}

// Both factors aligned to diagonal form and zero-padded square, so that the
// Kronecker product of the factor points is coordinate-diagonal and the
// curve-derivative formulas apply to it directly. Padding changes no inner
// product, no Q value, and no derivative.
struct PairFrame {
  Matrix xa, xb;             // padded square diagonal factor points
  SubspaceBasis ka, kb;      // padded aligned factor subspaces
  SubspaceBasis compa, compb;  // padded complements of the points
  RealVector pa, pb;         // padded factor spectra (sigma^2)
  Matrix xt;                 // kron(xa, xb)
  Index na, nb, ma, mb;      // original factor shapes
  Matrix ua, ub, va, vb;     // alignment rotations
};

PairFrame make_pair_frame(const Matrix& xa, const SubspaceBasis& ka,
                          const Matrix& xb, const SubspaceBasis& kb) {
  if (std::abs(hs_norm(xa) - 1.0) > tol::unit_norm ||
      std::abs(hs_norm(xb) - 1.0) > tol::unit_norm)
    throw precondition_error("pair frame: factor points must be unit");
  const matspace::Aligned ala = matspace::schmidt_align(ka, xa);
  const matspace::Aligned alb = matspace::schmidt_align(kb, xb);
  PairFrame f;
  f.na = ka.rows;
  f.ma = ka.cols;
  f.nb = kb.rows;
  f.mb = kb.cols;
  f.ua = ala.form.u;
  f.va = ala.form.v;
  f.ub = alb.form.u;
  f.vb = alb.form.v;
  f.ka = pad_basis(ala.k);
  f.kb = pad_basis(alb.k);
  f.xa = matspace::pad_square(ala.x);
  f.xb = matspace::pad_square(alb.x);
  f.compa = pad_basis(matspace::orth_complement(ala.k, ala.x));
  f.compb = pad_basis(matspace::orth_complement(alb.k, alb.x));
  f.pa = RealVector::Zero(f.xa.rows());
  for (Index i = 0; i < ala.form.sigma.size(); ++i)
    f.pa(i) = ala.form.sigma(i) * ala.form.sigma(i);
  f.pb = RealVector::Zero(f.xb.rows());
  for (Index i = 0; i < alb.form.sigma.size(); ++i)
    f.pb(i) = alb.form.sigma(i) * alb.form.sigma(i);
  f.xt = kron(f.xa, f.xb);
  return f;
}

// Rotates a direction on the product space into the aligned frame and
// re-indexes it into the padded composite coordinates.
Matrix align_tensor_direction(const PairFrame& f, const Matrix& y) {
  if (y.rows() != f.na * f.nb || y.cols() != f.ma * f.mb)
    throw dimension_error("tensor direction: shape mismatch");
  const Matrix rot = kron(f.ua, f.ub) * y * kron(f.va, f.vb);
  const Index sb = f.xb.rows();
  Matrix out = Matrix::Zero(f.xt.rows(), f.xt.cols());
  for (Index ia = 0; ia < f.na; ++ia)
    for (Index ib = 0; ib < f.nb; ++ib)
      for (Index ja = 0; ja < f.ma; ++ja)
        for (Index jb = 0; jb < f.mb; ++jb)
          out(ia * sb + ib, ja * sb + jb) = rot(ia * f.nb + ib, ja * f.mb + jb);
  return out;
}

std::string verdict_name(MaxClass c) {
  switch (c) {
    case MaxClass::nondegenerate_max:
      return "nondegenerate-local-min";
    case MaxClass::degenerate_max_candidate:
      return "local-min-degenerate-directions";
    case MaxClass::not_a_max:
      return "FAILED";
  }
  return "FAILED";
}

}  // namespace

const char* to_string(MaxClass c) {
  switch (c) {
    case MaxClass::nondegenerate_max:
      return "nondegenerate-max";
    case MaxClass::degenerate_max_candidate:
      return "degenerate-max-candidate";
    case MaxClass::not_a_max:
      return "not-a-max";
  }
  return "not-a-max";
}

CriticalPoint maximize_q(const SubspaceBasis& k, const AlphaParam& alpha,
                         std::uint64_t seed, int restarts, int max_iters,
                         double grad_tol) {
  if (!alpha.main_regime())
    throw precondition_error("maximize_q: requires alpha > 1");
  if (k.dim() < 1) throw precondition_error("maximize_q: empty subspace");
  if (restarts < 1 || max_iters < 1 || !(grad_tol > 0.0))
    throw precondition_error("maximize_q: bad optimizer parameters");

  const Index d = k.dim();
  const double a = alpha.value();

  bool have_best = false;
  Matrix best_x;
  double best_q = 0.0;
  double best_res = 0.0;
  double best_failed_res = std::numeric_limits<double>::infinity();
  int certified = 0;

  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd c(d);
    for (Index i = 0; i < d; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      c(i) = Complex(re, im);
    }
    c.normalize();
    double q = entropy::q_alpha(assemble_point(k, c), alpha);

    struct GradInfo {
      Eigen::VectorXcd g;
      double radial;
      Eigen::VectorXcd tangent;
      double tnorm;
    };
    const auto grad_at = [&](const Eigen::VectorXcd& cc) {
      const Matrix x = assemble_point(k, cc);
      Eigen::JacobiSVD<Matrix> svd(x,
                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
      const RealVector sig = svd.singularValues();
      RealVector powed(sig.size());
      for (Index i = 0; i < sig.size(); ++i)
        powed(i) = sig(i) > 0.0 ? std::pow(sig(i), 2.0 * a - 1.0) : 0.0;
      const Matrix grad =
          2.0 * a *
          (svd.matrixU() * powed.asDiagonal() * svd.matrixV().adjoint());
      GradInfo gi;
      gi.g.resize(d);
      for (Index i = 0; i < d; ++i)
        gi.g(i) = hs_inner(grad, k.basis[static_cast<std::size_t>(i)]);
      // <g, c> = 2 alpha Q > 0 and is real because Tr(x* grad) is.
      gi.radial = cc.dot(gi.g).real();
      gi.tangent = gi.g - Complex(gi.radial, 0.0) * cc;
      gi.tnorm = gi.tangent.norm();
      return gi;
    };

    GradInfo gi = grad_at(c);
    for (int it = 0; it < max_iters; ++it) {
      if (gi.tnorm <= grad_tol) break;

      // The first candidate (step = 1/radial) renormalizes the projected
      // gradient itself; Q is a Schatten-norm power, hence convex, so that
      // candidate never decreases Q and the backtracking loop below is a
      // safeguard rather than the workhorse.  Acceptance allows a few ulps
      // of slack: near the maximum the true gain underflows, and without
      // the allowance a candidate whose computed Q lands one ulp low would
      // stall the whole restart.
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(1.0, std::abs(q));
      double step = 1.0 / gi.radial;
      bool accepted = false;
      for (int bt = 0; bt < 60 && !accepted; ++bt) {
        const Eigen::VectorXcd cand = (c + step * gi.tangent).normalized();
        if ((cand - c).norm() == 0.0) break;  // shrunk to a no-op
        const double qc = entropy::q_alpha(assemble_point(k, cand), alpha);
        if (qc >= q + opt::armijo_c * step * gi.tnorm * gi.tnorm - noise) {
          c = cand;
          q = qc;
          accepted = true;
        } else {
          step *= opt::armijo_shrink;
        }
      }
      if (accepted) {
        gi = grad_at(c);
        continue;
      }
      // Q comparisons are flat to fp precision here, but the gradient still
      // resolves progress: take the bare power step while it contracts the
      // tangent norm, and stop once it no longer does.
      const Eigen::VectorXcd cand = gi.g.normalized();
      const GradInfo gc = grad_at(cand);
      if (gc.tnorm >= gi.tnorm) break;
      c = cand;
      q = entropy::q_alpha(assemble_point(k, c), alpha);
      gi = gc;
    }

    const Matrix x = assemble_point(k, c);
    const derivcalc::CriticalityCheck check =
        derivcalc::is_critical(x, k, alpha, grad_tol);
    if (!check.critical) {
      best_failed_res = std::min(best_failed_res, check.residual);
      continue;
    }
    ++certified;
    if (!have_best || q > best_q) {
      have_best = true;
      best_x = x;
      best_q = q;
      best_res = check.residual;
    }
  }

  if (!have_best)
    throw convergence_error("maximize_q: no restart met the tolerance",
                            best_failed_res);
  return {best_x, best_q, best_res, certified};
}

HessianSpectrum hessian_form(const Matrix& x, const SubspaceBasis& k,
                             const AlphaParam& alpha) {
  if (!alpha.main_regime())
    throw precondition_error("hessian_form: requires alpha > 1");
  const derivcalc::CriticalityCheck check = derivcalc::is_critical(x, k, alpha);
  if (!check.critical)
    throw precondition_error("hessian_form: x not critical, residual " +
                             std::to_string(check.residual));
  const matspace::Aligned al = matspace::schmidt_align(k, x);
  const SubspaceBasis comp = matspace::orth_complement(al.k, al.x);
  HessianSpectrum out;
  out.real_basis = real_doubling(comp.basis);
  const RealMatrix h = quadratic_form_matrix(al.x, out.real_basis, alpha);
  out.eigenvalues = descending_eigenvalues(h);
  out.basis_labels.reserve(out.real_basis.size());
  for (Index i = 0; i < comp.dim(); ++i)
    out.basis_labels.push_back("y" + std::to_string(i + 1));
  for (Index i = 0; i < comp.dim(); ++i)
    out.basis_labels.push_back("i*y" + std::to_string(i + 1));
  return out;
}

MaxClass classify(const HessianSpectrum& spec, double tol_eig) {
  if (!(tol_eig > 0.0))
    throw precondition_error("classify: tolerance must be positive");
  if (spec.eigenvalues.size() == 0) return MaxClass::nondegenerate_max;
  const double top = spec.eigenvalues(0);
  if (top > tol_eig) return MaxClass::not_a_max;
  if (top >= -tol_eig) return MaxClass::degenerate_max_candidate;
  return MaxClass::nondegenerate_max;
}

DirectionDecomposition decompose_direction(const Matrix& y, const Matrix& xa,
                                           const SubspaceBasis& ka,
                                           const Matrix& xb,
                                           const SubspaceBasis& kb) {
  const SubspaceBasis compa = matspace::orth_complement(ka, xa);
  const SubspaceBasis compb = matspace::orth_complement(kb, xb);
  const Index da = compa.dim();
  const Index db = compb.dim();
  const Matrix xt = kron(xa, xb);
  if (y.rows() != xt.rows() || y.cols() != xt.cols())
    throw dimension_error("decompose_direction: shape mismatch");
  if (std::abs(hs_norm(y) - 1.0) > tol::unit_norm)
    throw precondition_error("decompose_direction: direction must be unit");
  if (std::abs(hs_inner(y, xt)) > tol::ortho)
    throw precondition_error(
        "decompose_direction: component along the product point");

  DirectionDecomposition out;
  Eigen::VectorXcd beta(db);
  for (Index j = 0; j < db; ++j)
    beta(j) = hs_inner(y, kron(xa, compb.basis[static_cast<std::size_t>(j)]));
  Eigen::VectorXcd alpha_c(da);
  for (Index i = 0; i < da; ++i)
    alpha_c(i) = hs_inner(y, kron(compa.basis[static_cast<std::size_t>(i)], xb));
  Matrix gamma(da, db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < db; ++j)
      gamma(i, j) = hs_inner(y, kron(compa.basis[static_cast<std::size_t>(i)],
                                     compb.basis[static_cast<std::size_t>(j)]));

  out.c1 = beta.norm();
  out.c2 = alpha_c.norm();
  out.c3 = gamma.norm();

  out.yB = Matrix::Zero(kb.rows, kb.cols);
  if (out.c1 > coeff_floor)
    for (Index j = 0; j < db; ++j)
      out.yB += (beta(j) / out.c1) * compb.basis[static_cast<std::size_t>(j)];
  out.yA = Matrix::Zero(ka.rows, ka.cols);
  if (out.c2 > coeff_floor)
    for (Index i = 0; i < da; ++i)
      out.yA += (alpha_c(i) / out.c2) * compa.basis[static_cast<std::size_t>(i)];

  out.yprime = Matrix::Zero(xt.rows(), xt.cols());
  if (out.c3 > coeff_floor) {
    const Matrix coeff = gamma / out.c3;
    for (Index i = 0; i < da; ++i)
      for (Index j = 0; j < db; ++j)
        out.yprime += coeff(i, j) *
                      kron(compa.basis[static_cast<std::size_t>(i)],
                           compb.basis[static_cast<std::size_t>(j)]);
    Eigen::JacobiSVD<Matrix> svd(coeff,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector r = svd.singularValues();
    Index kept = 0;
    for (Index s = 0; s < r.size(); ++s)
      if (r(s) > coeff_floor) ++kept;
    out.schmidt_r = r.head(kept);
    for (Index s = 0; s < kept; ++s) {
      Matrix fa = Matrix::Zero(ka.rows, ka.cols);
      for (Index i = 0; i < da; ++i)
        fa += svd.matrixU()(i, s) * compa.basis[static_cast<std::size_t>(i)];
      Matrix fb = Matrix::Zero(kb.rows, kb.cols);
      for (Index j = 0; j < db; ++j)
        fb += std::conj(svd.matrixV()(j, s)) *
              compb.basis[static_cast<std::size_t>(j)];
      out.schmidt_a.push_back(std::move(fa));
      out.schmidt_b.push_back(std::move(fb));
    }
  }

  // Reconstructing from the three classes must give y back; anything left
  // over lies outside the product subspace.
  Matrix rec = Matrix::Zero(xt.rows(), xt.cols());
  if (out.c1 > coeff_floor) rec += out.c1 * kron(xa, out.yB);
  if (out.c2 > coeff_floor) rec += out.c2 * kron(out.yA, xb);
  if (out.c3 > coeff_floor) rec += out.c3 * out.yprime;
  if (hs_norm(y - rec) > tol::membership)
    throw membership_error(
        "decompose_direction: direction not in the product subspace");
  return out;
}

Lemma2Report verify_lemma2(const Matrix& xa, const SubspaceBasis& ka,
                           const Matrix& xb, const SubspaceBasis& kb,
                           const Matrix& y, const AlphaParam& alpha) {
  if (!alpha.main_regime())
    throw precondition_error("verify_lemma2: requires alpha > 1");
  const derivcalc::CriticalityCheck ca =
      derivcalc::is_critical(xa, ka, alpha, 1e-9);
  if (!ca.critical)
    throw precondition_error("verify_lemma2: factor A not critical, residual " +
                             std::to_string(ca.residual));
  const derivcalc::CriticalityCheck cb =
      derivcalc::is_critical(xb, kb, alpha, 1e-9);
  if (!cb.critical)
    throw precondition_error("verify_lemma2: factor B not critical, residual " +
                             std::to_string(cb.residual));

  const PairFrame f = make_pair_frame(xa, ka, xb, kb);
  const Matrix ya = align_tensor_direction(f, y);
  const DirectionDecomposition dec =
      decompose_direction(ya, f.xa, f.ka, f.xb, f.kb);

  Lemma2Report rep;
  rep.lhs = derivcalc::second_derivative(f.xt, ya, alpha);
  double rhs = 0.0;
  if (dec.c1 > coeff_floor)
    rhs += dec.c1 * dec.c1 *
           derivcalc::second_derivative(f.xt, kron(f.xa, dec.yB), alpha);
  if (dec.c2 > coeff_floor)
    rhs += dec.c2 * dec.c2 *
           derivcalc::second_derivative(f.xt, kron(dec.yA, f.xb), alpha);
  if (dec.c3 > coeff_floor)
    rhs += dec.c3 * dec.c3 *
           derivcalc::second_derivative(f.xt, dec.yprime, alpha);
  rep.rhs = rhs;
  rep.abs_diff = std::abs(rep.lhs - rep.rhs);
  return rep;
}

ABPair ab_matrices(const DirectionDecomposition& dec, const RealVector& pa,
                   const RealVector& pb, const AlphaParam& alpha) {
  if (!alpha.main_regime())
    throw precondition_error("ab_matrices: requires alpha > 1");
  const Index s = dec.schmidt_r.size();
  if (s == 0)
    throw precondition_error("ab_matrices: empty Schmidt decomposition");
  if (static_cast<Index>(dec.schmidt_a.size()) != s ||
      static_cast<Index>(dec.schmidt_b.size()) != s)
    throw precondition_error("ab_matrices: inconsistent Schmidt data");

  const auto table = [&alpha](const RealVector& p) {
    RealMatrix t(p.size(), p.size());
    for (Index j = 0; j < p.size(); ++j)
      for (Index l = 0; l < p.size(); ++l)
        t(j, l) = hadamard::dq_entry(std::max(p(j), 0.0), std::max(p(l), 0.0),
                                     alpha.value());
    return t;
  };
  const RealMatrix ta = table(pa);
  const RealMatrix tb = table(pb);

  const auto gram = [](const RealMatrix& t, const std::vector<Matrix>& ys) {
    const Index n = static_cast<Index>(ys.size());
    Matrix g(n, n);
    for (Index ip = 0; ip < n; ++ip)
      for (Index i = 0; i < n; ++i) {
        const Matrix& yi = ys[static_cast<std::size_t>(i)];
        const Matrix& yip = ys[static_cast<std::size_t>(ip)];
        if (yi.rows() != t.rows() || yi.cols() != t.cols())
          throw dimension_error("ab_matrices: factor shape vs spectrum");
        Complex acc(0.0, 0.0);
        for (Index j = 0; j < t.rows(); ++j)
          for (Index l = 0; l < t.cols(); ++l)
            acc += t(j, l) * yi(j, l) * std::conj(yip(j, l));
        g(ip, i) = acc;
      }
    return g;
  };
  return {gram(ta, dec.schmidt_a), gram(tb, dec.schmidt_b)};
}

AdditivityCertificate verify_tensor_local_min(
    const Matrix& xa, const SubspaceBasis& ka, const Matrix& xb,
    const SubspaceBasis& kb, const AlphaParam& alpha, double tol_eig) {
  if (!alpha.main_regime())
    throw precondition_error("verify_tensor_local_min: requires alpha > 1");
  const derivcalc::CriticalityCheck ca = derivcalc::is_critical(xa, ka, alpha);
  if (!ca.critical)
    throw precondition_error(
        "verify_tensor_local_min: factor A not critical, residual " +
        std::to_string(ca.residual));
  const derivcalc::CriticalityCheck cb = derivcalc::is_critical(xb, kb, alpha);
  if (!cb.critical)
    throw precondition_error(
        "verify_tensor_local_min: factor B not critical, residual " +
        std::to_string(cb.residual));

  AdditivityCertificate cert;
  cert.tol_eig = tol_eig;
  cert.factor_a = classify(hessian_form(xa, ka, alpha), tol_eig);
  cert.factor_b = classify(hessian_form(xb, kb, alpha), tol_eig);
  if (cert.factor_a == MaxClass::degenerate_max_candidate &&
      cert.factor_b == MaxClass::degenerate_max_candidate)
    throw unsupported_error(
        "verify_tensor_local_min: both factors degenerate; no criterion "
        "covers this case");

  const PairFrame f = make_pair_frame(xa, ka, xb, kb);
  const SubspaceBasis kt = matspace::tensor_subspace(f.ka, f.kb);
  const derivcalc::CriticalityCheck ct =
      derivcalc::is_critical(f.xt, kt, alpha, 1e-7);
  cert.tensor_residual = ct.residual;
  if (!ct.critical)
    throw error(
        "verify_tensor_local_min: criticality did not transfer to the "
        "product point, residual " +
        std::to_string(ct.residual));

  // Complement of the product point, ordered by class.
  const Index n1 = f.compb.dim();
  const Index n2 = f.compa.dim();
  const Index n3 = n2 * n1;
  const Index n = n1 + n2 + n3;
  std::vector<Matrix> ys;
  ys.reserve(static_cast<std::size_t>(n));
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n1; ++j) {
    ys.push_back(kron(f.xa, f.compb.basis[static_cast<std::size_t>(j)]));
    names.push_back("xA*b" + std::to_string(j + 1));
  }
  for (Index i = 0; i < n2; ++i) {
    ys.push_back(kron(f.compa.basis[static_cast<std::size_t>(i)], f.xb));
    names.push_back("a" + std::to_string(i + 1) + "*xB");
  }
  for (Index i = 0; i < n2; ++i)
    for (Index j = 0; j < n1; ++j) {
      ys.push_back(kron(f.compa.basis[static_cast<std::size_t>(i)],
                        f.compb.basis[static_cast<std::size_t>(j)]));
      names.push_back("a" + std::to_string(i + 1) + "*b" + std::to_string(j + 1));
    }

  const std::vector<Matrix> basis = real_doubling(ys);
  const RealMatrix h = quadratic_form_matrix(f.xt, basis, alpha);

  // Class of each real-basis index; the i-multiplied copy inherits it.
  const auto class_of = [&](Index p) {
    const Index base = p % n;
    if (base < n1) return 0;
    if (base < n1 + n2) return 1;
    return 2;
  };
  const auto class_block = [&](int cls) {
    std::vector<Index> idx;
    for (Index p = 0; p < 2 * n; ++p)
      if (class_of(p) == cls) idx.push_back(p);
    RealMatrix block(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c)
        block(static_cast<Index>(r), static_cast<Index>(c)) =
            h(idx[r], idx[c]);
    return block;
  };

  const auto block_max = [](const RealMatrix& block) {
    if (block.rows() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(block);
    return es.eigenvalues().maxCoeff();
  };
  const RealMatrix block1 = class_block(0);
  const RealMatrix block2 = class_block(1);
  const RealMatrix block3 = class_block(2);
  cert.class_b_max = block_max(block1);
  cert.class_a_max = block_max(block2);
  cert.class_prime_max = block_max(block3);

  double cross = 0.0;
  for (Index p = 0; p < 2 * n; ++p)
    for (Index q = 0; q < 2 * n; ++q)
      if (class_of(p) != class_of(q)) cross = std::max(cross, std::abs(h(p, q)));
  cert.cross_term_max = cross;

  // Pure-class blocks obey the product rule: restricting to x_A (x) y_B
  // directions scales the B-factor form by Q_alpha(x_A), and symmetrically.
  const double qa = entropy::q_alpha(f.xa, alpha);
  const double qb = entropy::q_alpha(f.xb, alpha);
  const RealMatrix ha_mat =
      quadratic_form_matrix(f.xa, real_doubling(f.compa.basis), alpha);
  const RealMatrix hb_mat =
      quadratic_form_matrix(f.xb, real_doubling(f.compb.basis), alpha);
  double dev = 0.0;
  if (n1 > 0) dev = (block1 - qa * hb_mat).cwiseAbs().maxCoeff();
  if (n2 > 0)
    dev = std::max(dev, (block2 - qb * ha_mat).cwiseAbs().maxCoeff());
  cert.product_rule_dev = dev;

  // Random unit directions mixing the classes, probed directly rather than
  // through the assembled form.
  std::mt19937_64 rng(0x6d69786564ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  double mixed = -std::numeric_limits<double>::infinity();
  for (int probe = 0; probe < 20; ++probe) {
    RealVector v(2 * n);
    for (Index p = 0; p < 2 * n; ++p) v(p) = normal(rng);
    v.normalize();
    Matrix y = Matrix::Zero(f.xt.rows(), f.xt.cols());
    for (Index p = 0; p < 2 * n; ++p)
      y += v(p) * basis[static_cast<std::size_t>(p)];
    mixed = std::max(mixed,
                     derivcalc::second_derivative(f.xt, y, alpha));
  }
  cert.mixed_max = mixed;

  cert.spectrum.eigenvalues = descending_eigenvalues(h);
  cert.spectrum.real_basis = basis;
  cert.spectrum.basis_labels.reserve(basis.size());
  for (const std::string& nm : names) cert.spectrum.basis_labels.push_back(nm);
  for (const std::string& nm : names)
    cert.spectrum.basis_labels.push_back("i*" + nm);

  cert.verdict = verdict_name(classify(cert.spectrum, tol_eig));
  return cert;
}

}  // namespace ral::additivity
