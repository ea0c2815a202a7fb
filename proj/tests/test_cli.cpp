// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ricciforge/cli.hpp"
#include "ricciforge/report.hpp"
#include "ricciforge/torus.hpp"

using namespace ricciforge;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("no command prints usage and exits 2") { CHECK(cli_main({}) == 2); }

TEST_CASE("unknown config keys are rejected with exit 2") {
  const std::string cfg_path = "cli_bad_config.json";
  atomic_write(cfg_path, "{\"seeds\": 2, \"bogus\": 1}\n");
  CHECK(cli_main({"identities", "--config", cfg_path, "--out", "cli_ignored.json"}) == 2);
  std::remove(cfg_path.c_str());
  std::remove("cli_ignored.json");
}

TEST_CASE("config values win over flags") {
  const std::string cfg_path = "cli_spectrum_config.json";
  const std::string out_path = "cli_spectrum_out.json";
  atomic_write(cfg_path, "{\"N\": 8, \"c\": \"2\"}\n");
  CHECK(cli_main({"spectrum", "--N", "16", "--config", cfg_path, "--out", out_path}) == 0);
  const auto report = nlohmann::json::parse(slurp(out_path));
  CHECK(report.at("config").at("N").get<int>() == 8);
  CHECK(report.at("rows").size() == 1);
  CHECK(report.at("rows")[0].at("expected").get<double>() == 1.0);
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("identity reports are deterministic modulo the timestamp") {
  const std::string out_a = "cli_identities_a.json";
  const std::string out_b = "cli_identities_b.json";
  const std::vector<std::string> args{"identities", "--seeds", "2",    "--order", "4",
                                      "--dims",     "2",       "--seed", "42"};
  auto run = [&](const std::string& out) {
    auto a = args;
    a.push_back("--out");
    a.push_back(out);
    return cli_main(a);
  };
  CHECK(run(out_a) == 0);
  CHECK(run(out_b) == 0);
  auto ja = nlohmann::json::parse(slurp(out_a));
  auto jb = nlohmann::json::parse(slurp(out_b));
  ja.erase("generated_at");
  jb.erase("generated_at");
  CHECK(ja.dump() == jb.dump());
  // every row carries a non-empty anchor string
  for (const auto& row : ja.at("rows")) CHECK(!row.at("anchor").get<std::string>().empty());
  std::remove(out_a.c_str());
  std::remove(out_b.c_str());
}

TEST_CASE("csv format emits one line per row") {
  const std::string out_path = "cli_identities.csv";
  CHECK(cli_main({"identities", "--seeds", "1", "--order", "4", "--dims", "2", "--format",
                  "csv", "--out", out_path}) == 0);
  const std::string csv = slurp(out_path);
  CHECK(csv.find("identity,anchor,n,seeds") == 0);
  CHECK(csv.find("contracted_bianchi_ricci") != std::string::npos);
  std::remove(out_path.c_str());
}

TEST_CASE("solve-ein writes a report and a field file") {
  const std::string out_path = "cli_solve_out.json";
  const std::string h_path = "cli_solve_h.rft";
  CHECK(cli_main({"solve-ein", "--n", "2", "--N", "16", "--kappa", "0", "--lambda", "1",
                  "--eps", "1e-2", "--out", out_path, "--h-out", h_path}) == 0);
  const auto report = nlohmann::json::parse(slurp(out_path));
  CHECK(report.at("verdict").get<std::string>() == "converged");
  CHECK(report.at("schema").get<int>() == 1);
  CHECK(report.at("iterations").size() > 1);
  int rank = -1;
  const FieldStorage h = read_field(h_path, &rank);
  CHECK(rank == 2);
  CHECK(h.grid.n_axis == 16);
  CHECK(h.sup_norm() > 1e-4);
  std::remove(out_path.c_str());
  std::remove(h_path.c_str());
}

TEST_CASE("solve-ein accepts a prescription field file") {
  const TorusGrid grid(2, 16);
  Sym2Field e(grid);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    const double c = 5e-3 * std::sin(grid.coords(node)[1]);
    e.at(0, 0, node) = c;
    e.at(1, 1, node) = -c;
  }
  const std::string e_path = "cli_e_field.rft";
  const std::string out_path = "cli_e_solve.json";
  write_field(e_path, e, 2, /*binary=*/true);
  CHECK(cli_main({"solve-ein", "--n", "2", "--N", "16", "--e-file", e_path, "--out",
                  out_path}) == 0);
  const auto report = nlohmann::json::parse(slurp(out_path));
  CHECK(report.at("verdict").get<std::string>() == "converged");
  // grid mismatch between the file and the flags is rejected
  CHECK(cli_main({"solve-ein", "--n", "2", "--N", "32", "--e-file", e_path}) == 2);
  std::remove(e_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("invalid solver configuration exits 2") {
  CHECK(cli_main({"solve-ein", "--n", "2", "--N", "16", "--lambda", "0"}) == 2);
}

TEST_SUITE_END();
