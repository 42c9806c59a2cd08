#pragma once
// JSON (de)serialization for the library's input and report types.
// Conventions: complex scalar as [re, im] (a bare number or one-element
// array is accepted on input), matrix as row-major nested arrays, subspace
// as {"n", "m", "basis"}, channel as {"kraus"}, tensor pair as
// {"A": {subspace, optional "x"}, "B": {...}}.

#include "ral/additivity.hpp"
#include "ral/entropy.hpp"
#include "ral/matspace.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace ral::io {

using json = nlohmann::ordered_json;

json complex_to_json(const Complex& z);
Complex complex_from_json(const json& j);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json real_vector_to_json(const RealVector& v);

// Basis elements are kept verbatim when already HS-orthonormal and are
// re-orthonormalized (as a spanning set) otherwise.
matspace::SubspaceBasis subspace_from_json(const json& j);
json subspace_to_json(const matspace::SubspaceBasis& k);

entropy::Channel channel_from_json(const json& j);

struct PairInput {
  matspace::SubspaceBasis ka, kb;
  std::optional<Matrix> xa, xb;  // absent: the optimizer finds the point
};
PairInput pair_from_json(const json& j);

json spectrum_to_json(const additivity::HessianSpectrum& spec);
json certificate_to_json(const additivity::AdditivityCertificate& cert);

// Reads and parses a file; throws parse_error with the path on failure.
json load_json_file(const std::string& path);

}  // namespace ral::io
