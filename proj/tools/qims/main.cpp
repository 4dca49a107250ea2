// qims: command-line front end for the Hamiltonians, Pfaffian systems and
// hypergeometric integrals of the core library.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qims/commands.hpp"
#include "qims/config.hpp"
#include "qims/errors.hpp"
#include "qims/parallel.hpp"

namespace {

using namespace qims;
using namespace qims::cli;
using nlohmann::json;

struct Flags {
  std::string config;
  std::optional<int> L, N, M, i, nodes, order, degree;
  std::optional<std::string> z, T, path, scheme, out, plot;
  std::optional<std::uint64_t> seed, samples;
  std::optional<double> tolerance;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--L", f.L, "number of levels L");
  app->add_option("--N", f.N, "number of times N");
  app->add_option("--M", f.M, "degree M of V(M) / number of copies");
  app->add_option("--T", f.T, "box F(T) as a comma-separated list T_1,...,T_{L-1}");
  app->add_option("--z", f.z, "points z_1,...,z_N (decimals or p/q)");
  app->add_option("--i", f.i, "time index i");
  app->add_option("--nodes", f.nodes, "quadrature nodes per axis");
  app->add_option("--scheme", f.scheme, "gauss_jacobi | tanh_sinh | monte_carlo");
  app->add_option("--samples", f.samples, "Monte Carlo samples");
  app->add_option("--seed", f.seed, "seed for default parameters, lemma samples and Monte Carlo");
  app->add_option("--order", f.order, "series order");
  app->add_option("--degree", f.degree, "maximal probe degree for checks");
  app->add_option("--tolerance", f.tolerance, "residual tolerance");
  app->add_option("--path", f.path, "path JSON file (list of z waypoints)");
  app->add_option("--out", f.out, "output file (JSON, or CSV for hamiltonian with a .csv name)");
  app->add_option("--plot", f.plot, "SVG plot of coefficient trajectories (verify)");
}

RunConfig build_config(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (f.L) cfg.L = *f.L;
  if (f.N) cfg.N = *f.N;
  if (f.M) cfg.M = *f.M;
  if (f.T) {
    std::vector<int> T;
    for (const auto& t : parse_rational_list(*f.T)) {
      if (t.get_den() != 1) throw ParameterError("T entries are integers");
      T.push_back(static_cast<int>(t.get_num().get_si()));
    }
    cfg.T = T;
  }
  if (f.z) cfg.z = parse_rational_list(*f.z);
  if (f.i) cfg.i = *f.i;
  if (f.nodes) cfg.quad.nodes_per_axis = *f.nodes;
  if (f.scheme) cfg.quad.scheme = parse_scheme(*f.scheme);
  if (f.samples) cfg.quad.mc_samples = *f.samples;
  if (f.seed) {
    cfg.seed = *f.seed;
    cfg.quad.seed = *f.seed;
  }
  if (f.order) cfg.order = *f.order;
  if (f.degree) cfg.probe_degree = *f.degree;
  if (f.tolerance) cfg.tolerance = *f.tolerance;
  if (f.path) cfg.path = load_path(*f.path);
  if (f.out) cfg.out = *f.out;
  if (f.plot) cfg.plot = *f.plot;
  return cfg;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw ParameterError("cannot write '" + file + "'");
  os << text;
}

/// The artifact goes to --out or stdout; it never contains run-dependent data.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

/// Timestamps and timings live beside the artifact, not inside it.
void emit_metadata(const std::string& out, const std::string& command, double seconds, int code) {
  const json meta = {{"command", command},
                     {"timestamp", utc_now()},
                     {"wall_seconds", seconds},
                     {"threads", worker_count()},
                     {"exit_code", code}};
  if (out.empty()) {
    std::cerr << meta.dump() << "\n";
  } else {
    write_file(out + ".meta.json", meta.dump(2) + "\n");
  }
}

int error_exit(const std::string& out, int code, const std::string& kind, const std::string& message) {
  const json report = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  try {
    emit(out, report.dump(2) + "\n");
  } catch (const std::exception&) {
    std::cout << report.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qims: quantum integrable model toolkit"};
  app.require_subcommand(1);
  Flags flags;
  std::string check_name;

  auto* basis = app.add_subcommand("basis", "ordered monomial basis of V(M) or F(T)");
  auto* hamiltonian = app.add_subcommand("hamiltonian", "matrices M_i(z) of the Pfaffian system");
  auto* check = app.add_subcommand("check", "exact structural checks");
  check->add_option("name", check_name, "commute | braid | flatness | subspace | garnier | lemmas")->required();
  auto* pfaffian = app.add_subcommand("pfaffian", "transport a solution along a path");
  auto* integral = app.add_subcommand("integral", "hypergeometric integral coefficients");
  auto* series = app.add_subcommand("series", "power-series oracle (N = 1)");
  auto* verify = app.add_subcommand("verify", "PDE residual and closed-form comparison");
  for (auto* sub : {basis, hamiltonian, check, pfaffian, integral, series, verify}) add_flags(sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("", kConfigError, "UsageError", e.what());
  }

  const std::string out = flags.out.value_or("");
  const auto start = std::chrono::steady_clock::now();
  std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = build_config(flags);
    CommandOutput result;
    if (basis->parsed()) result = cmd_basis(cfg);
    if (hamiltonian->parsed()) result = cmd_hamiltonian(cfg, ends_with(cfg.out, ".csv"));
    if (check->parsed()) result = cmd_check(cfg, check_name);
    if (pfaffian->parsed()) result = cmd_pfaffian(cfg);
    if (integral->parsed()) result = cmd_integral(cfg);
    if (series->parsed()) result = cmd_series(cfg);
    if (verify->parsed()) result = cmd_verify(cfg);
    emit(cfg.out, result.csv ? *result.csv : result.report.dump(2) + "\n");
    if (result.svg) write_file(cfg.plot, *result.svg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_metadata(cfg.out, command, secs, result.code);
    return result.code;
  } catch (const SingularityError& e) {
    return error_exit(out, kNumericalError, "SingularityError", e.what());
  } catch (const ConvergenceError& e) {
    return error_exit(out, kNumericalError, "ConvergenceError", e.what());
  } catch (const PropagationError& e) {
    return error_exit(out, kNumericalError, "PropagationError", e.what());
  } catch (const ParameterError& e) {
    return error_exit(out, kConfigError, "ParameterError", e.what());
  } catch (const StructureError& e) {
    return error_exit(out, kConfigError, "StructureError", e.what());
  } catch (const DomainError& e) {
    return error_exit(out, kConfigError, "DomainError", e.what());
  } catch (const UnsupportedError& e) {
    return error_exit(out, kConfigError, "UnsupportedError", e.what());
  } catch (const std::exception& e) {
    return error_exit(out, kNumericalError, "Error", e.what());
  }
}
