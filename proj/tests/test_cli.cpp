#include "ral/cli.hpp"

#include "ral/matspace.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace ral;
using cli::Report;
using cli::RunConfig;
using io::json;

namespace {

Matrix e_mat(Index n, Index m, Index i, Index j) {
  Matrix e = Matrix::Zero(n, m);
  e(i, j) = 1.0;
  return e;
}

// Fixture files live in the test process's temp directory and are
// overwritten freely; names are unique per content tag.
std::string write_fixture(const std::string& tag, const json& doc) {
  const std::string path =
      (std::filesystem::temp_directory_path() / ("ral_test_" + tag + ".json"))
          .string();
  std::ofstream out(path);
  out << doc.dump();
  return path;
}

json diag2_subspace() {
  json j;
  j["n"] = 2;
  j["m"] = 2;
  j["basis"] = {io::matrix_to_json(e_mat(2, 2, 0, 0)),
                io::matrix_to_json(e_mat(2, 2, 1, 1))};
  return j;
}

RunConfig base_config(const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  return cfg;
}

}  // namespace

TEST_CASE("complex and matrix json round-trips and lenient scalar forms") {
  const Complex z(1.5, -2.25);
  CHECK(io::complex_from_json(io::complex_to_json(z)) == z);
  CHECK(io::complex_from_json(json(3.0)) == Complex(3.0, 0.0));
  CHECK(io::complex_from_json(json::array({2.0})) == Complex(2.0, 0.0));
  CHECK_THROWS_AS(io::complex_from_json(json::array({1.0, 2.0, 3.0})),
                  parse_error);
  CHECK_THROWS_AS(io::complex_from_json(json("x")), parse_error);

  Matrix m(2, 3);
  m << Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(-2, 0.5),
      Complex(0, 0), Complex(4, -4);
  const Matrix back = io::matrix_from_json(io::matrix_to_json(m));
  CHECK((back - m).norm() == 0.0);

  json ragged = json::array();
  ragged.push_back(json::array({json::array({1.0, 0.0})}));
  ragged.push_back(json::array());
  CHECK_THROWS_AS(io::matrix_from_json(ragged), parse_error);
  CHECK_THROWS_AS(io::matrix_from_json(json::array()), parse_error);
}

TEST_CASE("subspace json keeps orthonormal bases and fixes spanning sets") {
  const auto k = io::subspace_from_json(diag2_subspace());
  CHECK(k.rows == 2);
  CHECK(k.dim() == 2);
  CHECK((k.basis[0] - e_mat(2, 2, 0, 0)).norm() == 0.0);

  // A non-orthonormal spanning set of the same plane.
  json j;
  j["n"] = 2;
  j["m"] = 2;
  Matrix b0 = 2.0 * e_mat(2, 2, 0, 0);
  Matrix b1 = e_mat(2, 2, 0, 0) + e_mat(2, 2, 1, 1);
  j["basis"] = {io::matrix_to_json(b0), io::matrix_to_json(b1)};
  const auto fixed = io::subspace_from_json(j);
  CHECK(fixed.dim() == 2);
  CHECK(std::abs(matspace::hs_inner(fixed.basis[0], fixed.basis[1])) < 1e-12);
  CHECK(matspace::membership_residual(fixed, b1) < 1e-12);

  json bad = diag2_subspace();
  bad.erase("m");
  CHECK_THROWS_AS(io::subspace_from_json(bad), parse_error);
  bad = diag2_subspace();
  bad["basis"][0] = io::matrix_to_json(Matrix::Zero(3, 3));
  CHECK_THROWS_AS(io::subspace_from_json(bad), parse_error);
}

TEST_CASE("pair json reads optional points and rejects outsiders") {
  json pj;
  pj["A"] = diag2_subspace();
  pj["A"]["x"] = io::matrix_to_json(e_mat(2, 2, 0, 0));
  pj["B"] = diag2_subspace();
  const auto pair = io::pair_from_json(pj);
  CHECK(pair.xa.has_value());
  CHECK_FALSE(pair.xb.has_value());

  pj["B"]["x"] = io::matrix_to_json(e_mat(2, 2, 0, 1));  // not in the span
  CHECK_THROWS_AS(io::pair_from_json(pj), membership_error);
  pj["B"]["x"] = io::matrix_to_json(Matrix::Zero(3, 3));
  CHECK_THROWS_AS(io::pair_from_json(pj), parse_error);
}

TEST_CASE("parse_config resolves defaults and maps bad input to usage") {
  const std::string pair_path = write_fixture("pair", [] {
    json pj;
    pj["A"] = diag2_subspace();
    pj["B"] = diag2_subspace();
    return pj;
  }());

  const std::vector<const char*> argv = {
      "ral_cli", "verify-tensor", "--alpha", "2",     "--seed",
      "7",       "-i",            pair_path.c_str(),  "-o",
      "cert.json"};
  const auto cfg =
      cli::parse_config(static_cast<int>(argv.size()), argv.data());
  REQUIRE(cfg.has_value());
  CHECK(cfg->command == "verify-tensor");
  CHECK(cfg->alpha == 2.0);
  CHECK(cfg->seed == 7);
  CHECK(cfg->restarts == opt::restarts);
  CHECK(cfg->tol_grad == opt::grad_tol);
  CHECK(cfg->output_path == "cert.json");

  const auto expect_usage = [](std::vector<const char*> args) {
    args.insert(args.begin(), "ral_cli");
    CHECK_THROWS_AS(
        cli::parse_config(static_cast<int>(args.size()), args.data()),
        usage_error);
  };
  expect_usage({"minimize", "--alpha", "1"});
  expect_usage({"minimize", "--alpha", "-2"});
  expect_usage({"frobnicate"});
  expect_usage({});
  expect_usage({"minimize", "-i", "/nonexistent/path.json"});
  expect_usage({"minimize", "--restarts", "0"});
  expect_usage({"minimize", "--tol-grad", "nope"});
}

TEST_CASE("config file supplies defaults and flags win") {
  const std::string conf = write_fixture("conf", {{"command", "check-phi-psi"},
                                                  {"alpha", 3.0},
                                                  {"seed", 42},
                                                  {"threads", 2}});
  const std::vector<const char*> argv = {"ral_cli", "--config", conf.c_str(),
                                         "--alpha", "1.5"};
  const auto cfg =
      cli::parse_config(static_cast<int>(argv.size()), argv.data());
  REQUIRE(cfg.has_value());
  CHECK(cfg->command == "check-phi-psi");
  CHECK(cfg->alpha == 1.5);  // flag beats file
  CHECK(cfg->seed == 42);
  CHECK(cfg->threads == 2);

  const std::string bad = write_fixture("conf_bad", {{"alpha", "three"}});
  const std::vector<const char*> argv2 = {"ral_cli", "minimize", "--config",
                                          bad.c_str()};
  CHECK_THROWS_AS(
      cli::parse_config(static_cast<int>(argv2.size()), argv2.data()),
      usage_error);
}

TEST_CASE("minimize and hessian commands on the diagonal plane") {
  json with_x = diag2_subspace();
  const std::string sub_path = write_fixture("diag2", with_x);
  with_x["x"] = io::matrix_to_json(e_mat(2, 2, 0, 0));
  const std::string subx_path = write_fixture("diag2x", with_x);

  RunConfig cfg = base_config("minimize");
  cfg.input_path = sub_path;
  cfg.seed = 5;
  const Report rep = cli::run(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.doc["command"] == "minimize");
  CHECK(rep.doc["version"] == std::string(version));
  CHECK(rep.doc["results"]["q_value"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.doc["results"]["entropy"].get<double>() ==
        doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.doc["results"]["residual"].get<double>() <= opt::grad_tol);

  RunConfig hcfg = base_config("hessian");
  hcfg.input_path = subx_path;
  const Report hrep = cli::run(hcfg);
  CHECK(hrep.exit_code == 0);
  CHECK(hrep.doc["results"]["classification"] ==
        std::string("nondegenerate-max"));
  CHECK(hrep.doc["results"]["optimized"] == false);
  const auto eigs =
      hrep.doc["results"]["spectrum"]["eigenvalues"].get<std::vector<double>>();
  REQUIRE(eigs.size() == 2);
  CHECK(eigs[0] == doctest::Approx(-4.0).epsilon(1e-8));
  CHECK(eigs[1] == doctest::Approx(-4.0).epsilon(1e-8));

  cfg.input_path = "";
  CHECK_THROWS_AS(cli::run(cfg), usage_error);
}

TEST_CASE("verify-tensor exits by verdict") {
  json pass;
  pass["A"] = diag2_subspace();
  pass["A"]["x"] = io::matrix_to_json(e_mat(2, 2, 0, 0));
  pass["B"] = pass["A"];
  RunConfig cfg = base_config("verify-tensor");
  cfg.input_path = write_fixture("pair_pass", pass);
  const Report ok = cli::run(cfg);
  CHECK(ok.exit_code == 0);
  CHECK(ok.doc["results"]["verdict"] == std::string("nondegenerate-local-min"));
  CHECK(ok.doc["results"]["optimized_a"] == false);

  // (e11 + e22)/sqrt(2) is critical but a saddle, so the pair must FAIL.
  Matrix mid = (e_mat(2, 2, 0, 0) + e_mat(2, 2, 1, 1)) / std::sqrt(2.0);
  json fail = pass;
  fail["B"]["x"] = io::matrix_to_json(mid);
  cfg.input_path = write_fixture("pair_fail", fail);
  const Report bad = cli::run(cfg);
  CHECK(bad.exit_code == 1);
  CHECK(bad.doc["results"]["verdict"] == std::string("FAILED"));
}

TEST_CASE("phi-psi grid command counts violations and stays deterministic") {
  RunConfig cfg = base_config("check-phi-psi");
  const Report rep = cli::run(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.doc["results"]["entries_checked"].get<long>() == 121 * 32);
  CHECK(rep.doc["results"]["violation_count"].get<long>() == 0);
  CHECK(rep.doc["results"]["min_slack"].get<double>() >= -1e-12);
  const std::string csv = rep.doc["results"]["csv"].get<std::string>();
  CHECK(csv.rfind("alpha,param1,param2,lhs,rhs,slack\n", 0) == 0);

  // Below alpha = 1 the tables genuinely cross; the run is informational.
  cfg.alpha = 0.7;
  const Report low = cli::run(cfg);
  CHECK(low.exit_code == 0);
  CHECK(low.doc["results"]["exploratory"] == true);
  CHECK(low.doc["results"]["violation_count"].get<long>() > 0);

  cfg.alpha = 2.0;
  cfg.threads = 3;
  const Report threaded = cli::run(cfg);
  RunConfig serial = cfg;
  serial.threads = 1;
  const Report single = cli::run(serial);
  CHECK(threaded.doc["results"].dump() == single.doc["results"].dump());
}

TEST_CASE("proposition command asserts only in the main regime") {
  RunConfig cfg = base_config("scan-proposition");
  const Report rep = cli::run(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.doc["results"]["violation_count"].get<long>() == 0);
  CHECK(rep.doc["results"]["nonstrict_count"].get<long>() == 0);
  CHECK(rep.doc["results"]["convexity"]["h_second_min"].get<double>() > 0.0);

  cfg.alpha = 0.5;
  const Report low = cli::run(cfg);
  CHECK(low.exit_code == 0);
  CHECK(low.doc["results"]["exploratory"] == true);
  CHECK(low.doc["results"]["convexity"]["h_second_max"].get<double>() < 0.0);
  CHECK(low.doc["results"]["convexity"]["positive_count"].get<long>() == 0);
}

TEST_CASE("alpha scans aggregate rows and reject bad ranges") {
  RunConfig cfg = base_config("check-phi-psi");
  cfg.grid = "1.1:3:0.19";
  const Report rep = cli::run(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.doc["results"]["alpha_count"].get<long>() == 11);
  CHECK(rep.doc["results"]["per_alpha"].size() == 11);
  const std::string csv = rep.doc["results"]["csv"].get<std::string>();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);  // header + 11 rows

  RunConfig prop = base_config("scan-proposition");
  prop.grid = "0.3:0.9:0.2";
  const Report low = cli::run(prop);
  CHECK(low.exit_code == 0);
  CHECK(low.doc["results"]["per_alpha"][0]["exploratory"] == true);

  cfg.grid = "0.5:2:0.5";  // crosses alpha = 1
  CHECK_THROWS_AS(cli::run(cfg), usage_error);
  cfg.grid = "2:1.5:0.1";  // empty
  CHECK_THROWS_AS(cli::run(cfg), usage_error);
  cfg.grid = "junk";
  CHECK_THROWS_AS(cli::run(cfg), usage_error);
  RunConfig other = base_config("minimize");
  other.grid = "1.5:2:0.5";
  CHECK_THROWS_AS(cli::run(other), usage_error);
  CHECK_THROWS_AS(cli::scan_alpha(other, 1.5, 2.0, 0.5), usage_error);
}

TEST_CASE("taylor probe fits the remainder order") {
  RunConfig cfg = base_config("taylor-probe");
  cfg.alpha = 1.25;
  cfg.seed = 21;
  const Report rep = cli::run(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.doc["results"]["slope"].get<double>() >= 2.3);
  CHECK(rep.doc["results"]["expected_min_slope"].get<double>() ==
        doctest::Approx(2.3).epsilon(1e-12));

  cfg.alpha = 2.0;
  cfg.seed = 81;
  const Report quad = cli::run(cfg);
  CHECK(quad.exit_code == 0);
  CHECK(quad.doc["results"]["slope"].get<double>() >= 2.9);
  CHECK(quad.doc["results"]["pass"] == true);
}

TEST_CASE("channel command reports the entropy estimate and bound") {
  const Complex i(0.0, 1.0);
  Matrix k0(2, 2), k1(2, 2), k2(2, 2), k3(2, 2);
  k0 << 0.5, 0, 0, 0.5;
  k1 << 0, 0.5, 0.5, 0;
  k2 << 0, -0.5 * i, 0.5 * i, 0;
  k3 << 0.5, 0, 0, -0.5;
  json cj;
  cj["kraus"] = {io::matrix_to_json(k0), io::matrix_to_json(k1),
                 io::matrix_to_json(k2), io::matrix_to_json(k3)};
  RunConfig cfg = base_config("channel-min-entropy");
  cfg.input_path = write_fixture("depol", cj);
  cfg.seed = 9;
  const Report rep = cli::run(cfg);
  CHECK(rep.exit_code == 0);
  CHECK(rep.doc["results"]["estimate"].get<double>() ==
        doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(rep.doc["results"]["product_state_bound"].get<long>() == 3);
  CHECK(rep.doc["results"]["bound_forces_zero"] == false);
  CHECK(rep.doc["results"]["residual"].get<double>() <= opt::grad_tol);
}

TEST_CASE("reports are byte-identical for fixed config and seed") {
  json pj;
  pj["A"] = diag2_subspace();
  pj["B"] = diag2_subspace();
  RunConfig cfg = base_config("verify-tensor");
  cfg.input_path = write_fixture("pair_opt", pj);
  cfg.alpha = 2.5;
  cfg.seed = 11;
  const Report a = cli::run(cfg);
  const Report b = cli::run(cfg);
  CHECK(a.doc["results"].dump() == b.doc["results"].dump());
  CHECK(a.doc["config"].dump() == b.doc["config"].dump());
  CHECK(a.exit_code == 0);
  CHECK(a.doc["results"]["optimized_a"] == true);
}

TEST_CASE("main_impl maps outcomes to process exit codes") {
  const std::string sub_path = write_fixture("diag2_main", diag2_subspace());
  const std::string out_path =
      (std::filesystem::temp_directory_path() / "ral_test_report.json")
          .string();

  const auto run_main = [](std::vector<const char*> args) {
    args.insert(args.begin(), "ral_cli");
    return cli::main_impl(static_cast<int>(args.size()), args.data());
  };
  CHECK(run_main({"minimize", "-i", sub_path.c_str(), "-o",
                  out_path.c_str()}) == 0);
  CHECK(std::filesystem::exists(out_path));
  const json written = io::load_json_file(out_path);
  CHECK(written["command"] == std::string("minimize"));

  CHECK(run_main({"minimize", "--alpha", "1", "-i", sub_path.c_str()}) == 2);
  CHECK(run_main({"check-phi-psi", "--grid", "0.5:2:0.5", "-o",
                  out_path.c_str()}) == 2);

  // Scans write a sibling CSV next to the report.
  CHECK(run_main({"check-phi-psi", "--grid", "1.5:2:0.5", "-o",
                  out_path.c_str()}) == 0);
  CHECK(std::filesystem::exists(out_path + ".csv"));

  const std::string rand_path = [] {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto rnd = [&](Index n, Index m) {
      Matrix g(n, m);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) {
          const double re = normal(rng);
          const double im = normal(rng);
          g(i, j) = Complex(re, im);
        }
      return g;
    };
    json sj;
    sj["n"] = 3;
    sj["m"] = 3;
    sj["basis"] = {io::matrix_to_json(rnd(3, 3)), io::matrix_to_json(rnd(3, 3))};
    return write_fixture("rand33", sj);
  }();
  CHECK(run_main({"minimize", "-i", rand_path.c_str(), "--tol-grad", "1e-18",
                  "-o", out_path.c_str()}) == 3);
}
