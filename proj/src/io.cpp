#include "ral/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

namespace ral::io {

namespace {

// Deviation of the basis Gram matrix from the identity.
double gram_deviation(const std::vector<Matrix>& basis) {
  double dev = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex g = matspace::hs_inner(basis[i], basis[j]);
      const double target = i == j ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(g - Complex(target, 0.0)));
    }
  return dev;
}

long require_int(const json& j, const char* what) {
  if (!j.is_number_integer())
    throw parse_error(std::string(what) + ": expected an integer");
  return j.get<long>();
}

const json& require_field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw parse_error(std::string(what) + ": missing field \"" + key + "\"");
  return j.at(key);
}

}  // namespace

json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 1 && j[0].is_number())
    return Complex(j[0].get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  throw parse_error("complex scalar: expected a number or [re, im]");
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index jx = 0; jx < m.cols(); ++jx)
      row.push_back(complex_to_json(m(i, jx)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty())
    throw parse_error("matrix: expected non-empty row-major nested arrays");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw parse_error("matrix: ragged rows");
    for (Index jx = 0; jx < cols; ++jx)
      m(i, jx) = complex_from_json(row[static_cast<std::size_t>(jx)]);
  }
  return m;
}

json real_vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

matspace::SubspaceBasis subspace_from_json(const json& j) {
  const Index n = static_cast<Index>(require_int(
      require_field(j, "n", "subspace"), "subspace: \"n\""));
  const Index m = static_cast<Index>(require_int(
      require_field(j, "m", "subspace"), "subspace: \"m\""));
  if (n < 1 || m < 1) throw parse_error("subspace: n, m must be positive");
  const json& jb = require_field(j, "basis", "subspace");
  if (!jb.is_array() || jb.empty())
    throw parse_error("subspace: \"basis\" must be a non-empty array");
  std::vector<Matrix> mats;
  mats.reserve(jb.size());
  for (const json& jm : jb) {
    Matrix b = matrix_from_json(jm);
    if (b.rows() != n || b.cols() != m)
      throw parse_error("subspace: basis element is not n x m");
    mats.push_back(std::move(b));
  }
  if (gram_deviation(mats) <= tol::ortho) {
    matspace::SubspaceBasis k;
    k.rows = n;
    k.cols = m;
    k.basis = std::move(mats);
    return k;
  }
  return matspace::orthonormalize(mats);
}

json subspace_to_json(const matspace::SubspaceBasis& k) {
  json out;
  out["n"] = k.rows;
  out["m"] = k.cols;
  json basis = json::array();
  for (const Matrix& b : k.basis) basis.push_back(matrix_to_json(b));
  out["basis"] = std::move(basis);
  return out;
}

entropy::Channel channel_from_json(const json& j) {
  const json& jk = require_field(j, "kraus", "channel");
  if (!jk.is_array() || jk.empty())
    throw parse_error("channel: \"kraus\" must be a non-empty array");
  std::vector<Matrix> ops;
  ops.reserve(jk.size());
  for (const json& jm : jk) ops.push_back(matrix_from_json(jm));
  return entropy::Channel(std::move(ops));
}

PairInput pair_from_json(const json& j) {
  const json& ja = require_field(j, "A", "tensor pair");
  const json& jb = require_field(j, "B", "tensor pair");
  PairInput pair;
  pair.ka = subspace_from_json(ja);
  pair.kb = subspace_from_json(jb);
  const auto read_point = [](const json& side,
                             const matspace::SubspaceBasis& k,
                             const char* name) -> std::optional<Matrix> {
    if (!side.contains("x")) return std::nullopt;
    Matrix x = matrix_from_json(side.at("x"));
    if (x.rows() != k.rows || x.cols() != k.cols)
      throw parse_error(std::string("tensor pair: ") + name +
                        ".x has the wrong shape");
    if (matspace::membership_residual(k, x) > tol::membership)
      throw membership_error(std::string("tensor pair: ") + name +
                             ".x lies outside the stated subspace");
    return x;
  };
  pair.xa = read_point(ja, pair.ka, "A");
  pair.xb = read_point(jb, pair.kb, "B");
  return pair;
}

json spectrum_to_json(const additivity::HessianSpectrum& spec) {
  json out;
  out["eigenvalues"] = real_vector_to_json(spec.eigenvalues);
  out["basis_labels"] = spec.basis_labels;
  return out;
}

json certificate_to_json(const additivity::AdditivityCertificate& cert) {
  json out;
  out["verdict"] = cert.verdict;
  out["factor_a"] = additivity::to_string(cert.factor_a);
  out["factor_b"] = additivity::to_string(cert.factor_b);
  out["class_b_max"] = cert.class_b_max;
  out["class_a_max"] = cert.class_a_max;
  out["class_prime_max"] = cert.class_prime_max;
  out["mixed_max"] = cert.mixed_max;
  out["cross_term_max"] = cert.cross_term_max;
  out["product_rule_dev"] = cert.product_rule_dev;
  out["tensor_residual"] = cert.tensor_residual;
  out["tol_eig"] = cert.tol_eig;
  out["spectrum"] = spectrum_to_json(cert.spectrum);
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw parse_error("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace ral::io
