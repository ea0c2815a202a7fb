// SPDX-License-Identifier: MIT
#include "ricciforge/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "ricciforge/bounds.hpp"
#include "ricciforge/parallel.hpp"
#include "ricciforge/report.hpp"
#include "ricciforge/solver.hpp"

namespace ricciforge {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Loads the config file and folds it over CLI flags: the config wins on
/// conflict (with a warning), unknown keys are rejected.
class ConfigMerge {
 public:
  ConfigMerge(CLI::App* cmd, const std::string& path, const std::set<std::string>& allowed)
      : cmd_(cmd) {
    if (path.empty()) return;
    std::ifstream is(path);
    require(is.good(), "config: cannot open " + path);
    try {
      config_ = json::parse(is);
    } catch (const json::exception& e) {
      fail(std::string("config: parse failure: ") + e.what());
    }
    require(config_.is_object(), "config: top level must be an object");
    for (const auto& item : config_.items())
      if (!allowed.count(item.key())) fail("config: unknown key \"" + item.key() + "\"");
  }

  template <class T>
  T get(const std::string& key, const std::string& flag, T flag_value) const {
    if (!config_.contains(key)) return flag_value;
    if (cmd_->count(flag) > 0)
      std::fprintf(stderr, "ricciforge: warning: config key \"%s\" overrides %s\n", key.c_str(),
                   flag.c_str());
    return config_.at(key).get<T>();
  }

  bool has(const std::string& key) const { return config_.contains(key); }

 private:
  CLI::App* cmd_;
  json config_ = json::object();
};

void emit_report(const std::string& out_path, const ordered_json& report) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    atomic_write(out_path, text);
}

int finish_rows(const std::vector<IdentityRow>& rows, const std::string& out,
                const std::string& format, const ordered_json& envelope) {
  if (format == "csv") {
    const std::string csv = identity_rows_to_csv(rows);
    if (out.empty())
      std::cout << csv;
    else
      atomic_write(out, csv);
  } else {
    ordered_json report = envelope;
    report["rows"] = identity_rows_to_json(rows);
    emit_report(out, report);
  }
  bool ok = true;
  for (const auto& r : rows)
    if (!r.pass) {
      ok = false;
      std::fprintf(stderr, "FAILED row: %s (n=%d) residual %.3e vs tolerance %.3e\n",
                   r.name.c_str(), r.dim, r.max_residual, r.tolerance);
    }
  return ok ? 0 : 1;
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  std::string cur;
  for (const char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) dims.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  require(!dims.empty(), "dims: empty list");
  return dims;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::string cur;
  for (const char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stod(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  require(!out.empty(), "list: empty");
  return out;
}

// -- identities --------------------------------------------------------------

int run_identities(CLI::App* cmd, const std::string& config_path, int seeds, int order,
                   std::string dims, std::uint64_t seed, std::string out, std::string format) {
  const ConfigMerge cfg(cmd, config_path,
                        {"seeds", "order", "dims", "seed", "out", "format"});
  seeds = cfg.get("seeds", "--seeds", seeds);
  order = cfg.get("order", "--order", order);
  dims = cfg.get<std::string>("dims", "--dims", dims);
  seed = cfg.get<std::uint64_t>("seed", "--seed", seed);
  out = cfg.get<std::string>("out", "--out", out);
  format = cfg.get<std::string>("format", "--format", format);
  require(format == "json" || format == "csv", "format must be json or csv");

  IdentitySuiteConfig sc;
  sc.seeds = seeds;
  sc.order = order;
  sc.dims = parse_dims(dims);
  sc.seed = seed;
  require(sc.seeds >= 1, "seeds must be positive");
  require(sc.order >= 2 && sc.order <= 10, "order must lie in [2, 10]");
  for (const int n : sc.dims) require(n >= 2 && n <= 4, "dims entries must lie in {2,3,4}");

  const auto rows = run_identity_suite(sc);
  ordered_json envelope = report_envelope(
      "identities", {{"seeds", seeds}, {"order", order}, {"dims", dims}, {"seed", seed}});
  return finish_rows(rows, out, format, envelope);
}

// -- fujitani ----------------------------------------------------------------

int run_fujitani(CLI::App* cmd, const std::string& config_path, int samples, std::string dims,
                 std::uint64_t seed, std::string out, std::string format) {
  const ConfigMerge cfg(cmd, config_path, {"samples", "dims", "seed", "out", "format"});
  samples = cfg.get("samples", "--samples", samples);
  dims = cfg.get<std::string>("dims", "--dims", dims);
  seed = cfg.get<std::uint64_t>("seed", "--seed", seed);
  out = cfg.get<std::string>("out", "--out", out);
  format = cfg.get<std::string>("format", "--format", format);
  require(samples >= 1, "samples must be positive");

  const std::string anchor =
      "⟨(Ric−Riem)h,h⟩ ≥ min{2Ric_min−(n−2)K_max, nK_min}‖h‖²";
  ordered_json rows = ordered_json::array();
  bool ok = true;
  for (const int n : parse_dims(dims)) {
    require(n >= 2 && n <= 4, "dims entries must lie in {2,3,4}");
    std::vector<FujitaniReport> reports(samples);
    parallel_for(static_cast<std::size_t>(samples), [&](std::size_t s) {
      CounterRng rng(seed, 300 + 31 * s + n);
      const Tensor4Value riem = random_algebraic_curvature(n, rng);
      const PointCurvatureData data =
          PointCurvatureData::from_riemann(SymMatrixValue::identity(n), riem);
      reports[s] = fujitani_check(data);
    });
    for (int s = 0; s < samples; ++s) {
      const FujitaniReport& rep = reports[s];
      rows.push_back({{"anchor", anchor},
                      {"n", n},
                      {"sample", s},
                      {"ric_min", rep.ric_min},
                      {"k_min", rep.k_min},
                      {"k_max", rep.k_max},
                      {"bound", rep.bound},
                      {"exact_min", rep.exact_min},
                      {"margin", rep.margin},
                      {"pass", rep.pass}});
      ok = ok && rep.pass;
    }
    // equality case on constant curvature
    const FujitaniReport rep = fujitani_check(constant_curvature_data(n, 1.0));
    const bool tight = std::abs(rep.margin) < 1e-10;
    rows.push_back({{"anchor", anchor},
                    {"n", n},
                    {"sample", "constant_curvature"},
                    {"bound", rep.bound},
                    {"exact_min", rep.exact_min},
                    {"margin", rep.margin},
                    {"pass", rep.pass && tight}});
    ok = ok && rep.pass && tight;
  }

  ordered_json report = report_envelope(
      "fujitani", {{"samples", samples}, {"dims", dims}, {"seed", seed}});
  report["rows"] = rows;
  if (format == "csv") {
    std::ostringstream os;
    os.precision(17);
    os << "n,sample,ric_min,k_min,k_max,bound,exact_min,margin,pass\n";
    for (const auto& r : report["rows"])
      os << r.value("n", 0) << "," << r.at("sample").dump() << "," << r.value("ric_min", 0.0)
         << "," << r.value("k_min", 0.0) << "," << r.value("k_max", 0.0) << ","
         << r.value("bound", 0.0) << "," << r.value("exact_min", 0.0) << ","
         << r.value("margin", 0.0) << "," << (r.value("pass", false) ? "true" : "false") << "\n";
    if (out.empty())
      std::cout << os.str();
    else
      atomic_write(out, os.str());
  } else {
    emit_report(out, report);
  }
  return ok ? 0 : 1;
}

// -- spectrum ----------------------------------------------------------------

int run_spectrum(CLI::App* cmd, const std::string& config_path, int N, std::string c_list,
                 std::string out) {
  const ConfigMerge cfg(cmd, config_path, {"N", "c", "out"});
  N = cfg.get("N", "--N", N);
  c_list = cfg.get<std::string>("c", "--c", c_list);
  out = cfg.get<std::string>("out", "--out", out);

  const TorusGrid grid(2, N);
  const int d = sym2_count(grid.dim);
  const MultiplierOperator lap = laplacian_multiplier(grid, d);
  const KernelProjection kp = lichnerowicz_flat_kernel(grid);

  ordered_json rows = ordered_json::array();
  bool ok = true;
  for (const double c : parse_doubles(c_list)) {
    // Fourier route: multipliers are |k|^2 off the kernel and c on it.
    double fourier = c;
    bool seen = false;
    for (int k1 = -N / 2; k1 < N / 2; ++k1)
      for (int k2 = -N / 2; k2 < N / 2; ++k2) {
        const double k2n = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        if (k2n == 0.0) continue;
        fourier = seen ? std::min(fourier, k2n) : std::min(c, k2n);
        seen = true;
      }
    // dense route
    const auto matrix = dense_operator_matrix(
        [&](const Sym2Field& u) { return apply_shifted(lap, c, u); }, grid);
    const double dense =
        linalg::min_eigenvalue(matrix, d * static_cast<int>(grid.nodes()));
    const double expected = std::min(c, 1.0);
    const bool pass = std::abs(fourier - expected) < 1e-12 && std::abs(dense - expected) < 1e-8;
    ok = ok && pass;
    rows.push_back({{"anchor", "est un isomorphisme de"},
                    {"c", c},
                    {"min_eig_fourier", fourier},
                    {"min_eig_dense", dense},
                    {"expected", expected},
                    {"kernel_dim", kp.basis.fields.size()},
                    {"pass", pass}});
  }

  ordered_json report = report_envelope("spectrum", {{"N", N}, {"c", c_list}});
  report["rows"] = rows;
  emit_report(out, report);
  return ok ? 0 : 1;
}

// -- solve-ein ---------------------------------------------------------------

int run_solve_ein(CLI::App* cmd, const std::string& config_path, int n, int N, double kappa,
                  double lambda, double eps, int axis, std::string e_file, double tol_residual,
                  double tol_gauge, int max_iterations, std::string mode, std::string out,
                  std::string h_out, std::string h_format) {
  const ConfigMerge cfg(cmd, config_path,
                        {"n", "N", "kappa", "lambda", "eps", "axis", "e_file", "tol_residual",
                         "tol_gauge", "max_iterations", "mode", "out", "h_out", "h_format"});
  n = cfg.get("n", "--n", n);
  N = cfg.get("N", "--N", N);
  kappa = cfg.get("kappa", "--kappa", kappa);
  lambda = cfg.get("lambda", "--lambda", lambda);
  eps = cfg.get("eps", "--eps", eps);
  axis = cfg.get("axis", "--axis", axis);
  e_file = cfg.get<std::string>("e_file", "--e-file", e_file);
  tol_residual = cfg.get("tol_residual", "--tol-residual", tol_residual);
  tol_gauge = cfg.get("tol_gauge", "--tol-gauge", tol_gauge);
  max_iterations = cfg.get("max_iterations", "--max-iterations", max_iterations);
  mode = cfg.get<std::string>("mode", "--mode", mode);
  out = cfg.get<std::string>("out", "--out", out);
  h_out = cfg.get<std::string>("h_out", "--h-out", h_out);
  h_format = cfg.get<std::string>("h_format", "--h-format", h_format);
  require(mode == "newton_chord" || mode == "full_newton_fd",
          "mode must be newton_chord or full_newton_fd");
  require(h_format == "csv" || h_format == "binary", "h_format must be csv or binary");

  SolveConfig sc;
  sc.dim = n;
  sc.n_axis = N;
  sc.kappa = kappa;
  sc.lambda = lambda;
  sc.tolerance_residual = tol_residual;
  sc.tolerance_gauge = tol_gauge;
  sc.max_iterations = max_iterations;
  sc.mode = mode == "newton_chord" ? SolveConfig::Mode::NewtonChord
                                   : SolveConfig::Mode::FullNewtonFd;
  if (!e_file.empty()) {
    int rank = -1;
    const FieldStorage f = read_field(e_file, &rank);
    require(rank == 2, "e_file: rank-2 field expected");
    require(f.grid == sc.grid(), "e_file: grid mismatch with n/N");
    Sym2Field e(sc.grid());
    e.v = f.v;
    sc.prescription = e;
  } else {
    sc.prescription = cosine_mode_prescription(sc.grid(), eps, axis);
  }

  const SolveReport report = newton_chord_solve(sc);
  const ordered_json config_echo = {{"n", n},
                                    {"N", N},
                                    {"kappa", kappa},
                                    {"lambda", lambda},
                                    {"eps", eps},
                                    {"axis", axis},
                                    {"e_file", e_file},
                                    {"tol_residual", tol_residual},
                                    {"tol_gauge", tol_gauge},
                                    {"max_iterations", max_iterations},
                                    {"mode", mode}};
  ordered_json j = report_envelope("solve-ein", config_echo);
  j["anchor"] = "Ein(g+h)=Ein(g)+e−½Π̃(h)";
  const ordered_json body = report.to_json(config_echo);
  for (auto it = body.begin(); it != body.end(); ++it)
    if (it.key() != "schema" && it.key() != "config") j[it.key()] = it.value();
  emit_report(out, j);
  if (!h_out.empty()) write_field(h_out, report.h, 2, h_format == "binary");
  if (!report.accepted())
    std::fprintf(stderr, "solve verdict: %s\n", report.verdict.c_str());
  return report.accepted() ? 0 : 1;
}

// -- linearize ---------------------------------------------------------------

int run_linearize(CLI::App* cmd, const std::string& config_path, int n, int N, double kappa,
                  double lambda, std::string eps_list, int axis, std::string out) {
  const ConfigMerge cfg(cmd, config_path,
                        {"n", "N", "kappa", "lambda", "eps_list", "axis", "out"});
  n = cfg.get("n", "--n", n);
  N = cfg.get("N", "--N", N);
  kappa = cfg.get("kappa", "--kappa", kappa);
  lambda = cfg.get("lambda", "--lambda", lambda);
  eps_list = cfg.get<std::string>("eps_list", "--eps-list", eps_list);
  axis = cfg.get("axis", "--axis", axis);
  out = cfg.get<std::string>("out", "--out", out);

  const TorusGrid grid(n, N);
  ordered_json rows = ordered_json::array();
  bool ok = true;
  double prev_dev = -1.0;
  for (const double eps : parse_doubles(eps_list)) {
    SolveConfig sc;
    sc.dim = n;
    sc.n_axis = N;
    sc.kappa = kappa;
    sc.lambda = lambda;
    sc.prescription = cosine_mode_prescription(grid, eps, axis);
    const SolveReport rep = newton_chord_solve(sc);
    const double prediction =
        linear_response_prediction(grid, kappa, lambda, sc.prescription) / eps;
    const double response = rep.h_sup_norm / eps;
    const double rel_dev = std::abs(response - prediction) / prediction;
    const bool pass = rep.accepted() && rel_dev < 0.05;
    bool shrink = true;
    if (prev_dev >= 0.0) shrink = rel_dev <= std::max(0.3 * prev_dev, 1e-6);
    ok = ok && pass && shrink;
    rows.push_back({{"anchor", "p(u)=(1+2(n-1)κ)Δu+2Λu"},
                    {"eps", eps},
                    {"response_per_eps", response},
                    {"prediction_per_eps", prediction},
                    {"relative_deviation", rel_dev},
                    {"deviation_shrinks", shrink},
                    {"pass", pass && shrink}});
    prev_dev = rel_dev;
  }
  ordered_json report = report_envelope("linearize", {{"n", n},
                                                      {"N", N},
                                                      {"kappa", kappa},
                                                      {"lambda", lambda},
                                                      {"eps_list", eps_list},
                                                      {"axis", axis}});
  report["rows"] = rows;
  emit_report(out, report);
  return ok ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{
      "ricciforge: curvature-operator identity suites, eigenvalue bound checks, flat-torus "
      "spectra and prescribed-curvature solves (RICCIFORGE_THREADS caps parallelism)"};
  app.require_subcommand(1);

  // identities
  auto* identities = app.add_subcommand("identities", "run the chart-level identity suite");
  std::string id_config, id_dims = "2,3", id_out, id_format = "json";
  int id_seeds = 20, id_order = 6;
  std::uint64_t id_seed = 1;
  identities->add_option("--config", id_config, "JSON config file (wins over flags)");
  identities->add_option("--seeds", id_seeds, "random seeds per identity");
  identities->add_option("--order", id_order, "jet truncation order");
  identities->add_option("--dims", id_dims, "comma-separated chart dimensions");
  identities->add_option("--seed", id_seed, "base RNG key");
  identities->add_option("--out", id_out, "report path (stdout when empty)");
  identities->add_option("--format", id_format, "json or csv");

  // fujitani
  auto* fujitani = app.add_subcommand("fujitani", "pointwise eigenvalue bound checks");
  std::string fu_config, fu_dims = "3,4", fu_out, fu_format = "json";
  int fu_samples = 50;
  std::uint64_t fu_seed = 1;
  fujitani->add_option("--config", fu_config, "JSON config file (wins over flags)");
  fujitani->add_option("--samples", fu_samples, "random curvature samples per dimension");
  fujitani->add_option("--dims", fu_dims, "comma-separated dimensions");
  fujitani->add_option("--seed", fu_seed, "base RNG key");
  fujitani->add_option("--out", fu_out, "report path (stdout when empty)");
  fujitani->add_option("--format", fu_format, "json or csv");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "projected-operator spectrum checks on T^2");
  std::string sp_config, sp_c = "0.5,1,2", sp_out;
  int sp_N = 8;
  spectrum->add_option("--config", sp_config, "JSON config file (wins over flags)");
  spectrum->add_option("--N", sp_N, "grid points per axis (dense route)");
  spectrum->add_option("--c", sp_c, "comma-separated projection shifts");
  spectrum->add_option("--out", sp_out, "report path (stdout when empty)");

  // solve-ein
  auto* solve = app.add_subcommand("solve-ein", "prescribed-curvature solve on the flat torus");
  std::string so_config, so_e_file, so_mode = "newton_chord", so_out, so_h_out,
              so_h_format = "csv";
  int so_n = 2, so_N = 64, so_axis = 0, so_max_iterations = 40;
  double so_kappa = 0.0, so_lambda = 1.0, so_eps = 1e-2, so_tol_residual = 1e-10,
         so_tol_gauge = 1e-9;
  solve->add_option("--config", so_config, "JSON config file (wins over flags)");
  solve->add_option("--n", so_n, "torus dimension (2 or 3)");
  solve->add_option("--N", so_N, "grid points per axis");
  solve->add_option("--kappa", so_kappa, "scalar-curvature coupling");
  solve->add_option("--lambda", so_lambda, "constant term (must keep multipliers nonzero)");
  solve->add_option("--eps", so_eps, "cosine-mode prescription amplitude");
  solve->add_option("--axis", so_axis, "cosine-mode axis");
  solve->add_option("--e-file", so_e_file, "prescription field file (overrides eps pattern)");
  solve->add_option("--tol-residual", so_tol_residual, "sup-norm residual tolerance");
  solve->add_option("--tol-gauge", so_tol_gauge, "gauge one-form tolerance");
  solve->add_option("--max-iterations", so_max_iterations, "iteration cap");
  solve->add_option("--mode", so_mode, "newton_chord or full_newton_fd");
  solve->add_option("--out", so_out, "report path (stdout when empty)");
  solve->add_option("--h-out", so_h_out, "write the solved field to this path");
  solve->add_option("--h-format", so_h_format, "csv or binary");

  // linearize
  auto* lin = app.add_subcommand("linearize", "linear-response study against the multiplier inverse");
  std::string li_config, li_eps = "1e-2,1e-3,1e-4", li_out;
  int li_n = 2, li_N = 64, li_axis = 0;
  double li_kappa = 0.0, li_lambda = 1.0;
  lin->add_option("--config", li_config, "JSON config file (wins over flags)");
  lin->add_option("--n", li_n, "torus dimension");
  lin->add_option("--N", li_N, "grid points per axis");
  lin->add_option("--kappa", li_kappa, "scalar-curvature coupling");
  lin->add_option("--lambda", li_lambda, "constant term");
  lin->add_option("--eps-list", li_eps, "comma-separated amplitudes");
  lin->add_option("--axis", li_axis, "cosine-mode axis");
  lin->add_option("--out", li_out, "report path (stdout when empty)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (identities->parsed())
      return run_identities(identities, id_config, id_seeds, id_order, id_dims, id_seed, id_out,
                            id_format);
    if (fujitani->parsed())
      return run_fujitani(fujitani, fu_config, fu_samples, fu_dims, fu_seed, fu_out, fu_format);
    if (spectrum->parsed()) return run_spectrum(spectrum, sp_config, sp_N, sp_c, sp_out);
    if (solve->parsed())
      return run_solve_ein(solve, so_config, so_n, so_N, so_kappa, so_lambda, so_eps, so_axis,
                           so_e_file, so_tol_residual, so_tol_gauge, so_max_iterations, so_mode,
                           so_out, so_h_out, so_h_format);
    if (lin->parsed())
      return run_linearize(lin, li_config, li_n, li_N, li_kappa, li_lambda, li_eps, li_axis,
                           li_out);
  } catch (const Error& e) {
    std::cerr << "ricciforge: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "ricciforge: config error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ricciforge
