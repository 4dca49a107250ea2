#include "qims/commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qims/cohomology.hpp"
#include "qims/errors.hpp"
#include "qims/exponents.hpp"
#include "qims/hamiltonian.hpp"
#include "qims/integrals.hpp"
#include "qims/lemmas.hpp"
#include "qims/pfaffian.hpp"
#include "qims/report.hpp"
#include "qims/series.hpp"
#include "qims/svg.hpp"

namespace qims::cli {

namespace {

using R = Rational;
using RSpan = std::span<const Rational>;

json model_json(const RunConfig& cfg, const Parameters<R>& p) {
  json m = {{"L", cfg.L}, {"N", cfg.N}};
  if (cfg.M) m["M"] = *cfg.M;
  if (cfg.T) m["T"] = *cfg.T;
  json theta = exact_list(p.theta);
  m["parameters"] = {{"e", exact_list(p.e)},        {"kappa", exact_list(p.kappa)}, {"theta", theta},
                     {"hbar", exact(p.hbar)},       {"planck", exact(p.planck)},
                     {"resonance", exact(p.resonance())}};
  return m;
}

std::vector<int> times(const RunConfig& cfg) {
  if (cfg.i) {
    if (*cfg.i < 1 || *cfg.i > cfg.N) throw ParameterError("i must lie in 1..N");
    return {*cfg.i};
  }
  std::vector<int> all;
  for (int i = 1; i <= cfg.N; ++i) all.push_back(i);
  return all;
}

int copies(const RunConfig& cfg) {
  if (cfg.T) throw ParameterError("integrals are defined on V(M); T is not supported here");
  return cfg.M.value_or(1);
}

std::vector<double> real_z(const RunConfig& cfg) { return to_doubles(resolve_z(cfg)); }

std::vector<ChainIntegrand> integrands_for(const Parameters<R>& p, int M) {
  return M == 1 ? psi1_integrands(dictionary_m1(p)) : psim_integrands(dictionary_m(p, M));
}

json integral_json(const IntegralResult& r, const QuadratureSpec& q) {
  const bool mc = q.scheme == QuadratureSpec::Scheme::MonteCarlo;
  const double tol = mc ? *std::max_element(r.error.begin(), r.error.end()) : r.max_relative_error;
  json out = {{"basis", basis_json(r.basis)},
              {"c", approx_list(r.c, tol)},
              {mc ? "standard_error" : "doubling_change", approx_list(r.error, tol)},
              {"max_relative_error", approx(r.max_relative_error, r.max_relative_error)},
              {"converged", r.converged},
              {"scheme", scheme_name(q.scheme)}};
  if (mc) {
    out["samples"] = r.samples;
    out["seed"] = q.seed;
  } else {
    out["nodes_per_axis"] = r.nodes;
  }
  return out;
}

/// Default residual tolerance: tighter for tensor rules on one copy.
double pde_tolerance(const RunConfig& cfg, int M) {
  if (cfg.tolerance) return *cfg.tolerance;
  if (cfg.quad.scheme == QuadratureSpec::Scheme::MonteCarlo) return 1e-2;
  return M == 1 ? 1e-5 : 1e-4;
}

}  // namespace

CommandOutput cmd_basis(const RunConfig& cfg) {
  const Space space = resolve_space(cfg);
  const auto basis = space.basis(cfg.L, cfg.N);
  CommandOutput out;
  out.report = {{"command", "basis"},   {"L", cfg.L},
                {"N", cfg.N},           {"space", space.describe()},
                {"dimension", basis.size()}, {"basis", basis_json(basis)}};
  return out;
}

CommandOutput cmd_hamiltonian(const RunConfig& cfg, bool csv) {
  const auto p = resolve_parameters(cfg);
  const auto z = resolve_z(cfg);
  const Space space = resolve_space(cfg);
  const PfaffianSystem<R> sys(p, space);
  const auto which = times(cfg);
  CommandOutput out;
  if (csv) {
    if (which.size() != 1) throw ParameterError("CSV output holds one matrix: pass --i");
    out.csv = matrix_csv(sys.matrix_at(which[0], RSpan(z)), sys.basis());
  }
  json mats = json::array();
  for (int i : which) mats.push_back({{"i", i}, {"matrix", exact_matrix(sys.matrix_at(i, RSpan(z)))}});
  out.report = {{"command", "hamiltonian"}, {"model", model_json(cfg, p)},   {"space", space.describe()},
                {"z", exact_list(z)},       {"basis", basis_json(sys.basis())}, {"matrices", mats},
                {"convention", "(M_i)_{A,B} = coefficient of q^A in H_i q^B"}};
  return out;
}

CommandOutput cmd_check(const RunConfig& cfg, const std::string& which) {
  CommandOutput out;
  bool passed = true;
  json results = json::array();
  json report = {{"command", "check"}, {"check", which}};

  if (which == "lemmas") {
    std::mt19937_64 rng(cfg.seed);
    for (LemmaId id : all_lemmas()) {
      if (id == LemmaId::Jacobi && cfg.N < 2) {
        results.push_back({{"identity", lemma_name(id)}, {"skipped", "needs N >= 2"}});
        continue;
      }
      R worst = 0;
      for (int k = 0; k < cfg.lemma_samples; ++k) {
        const R r = abs(lemma_identity_check(id, random_lemma_sample(cfg.L, cfg.N, rng)));
        if (r > worst) worst = r;
      }
      passed = passed && worst == 0;
      results.push_back({{"identity", lemma_name(id)}, {"samples", cfg.lemma_samples}, {"residual", exact(worst)}});
    }
    report["L"] = cfg.L;
    report["N"] = cfg.N;
    report["seed"] = cfg.seed;
  } else {
    const auto p = resolve_parameters(cfg);
    const auto z = resolve_z(cfg);
    report["model"] = model_json(cfg, p);
    report["z"] = exact_list(z);
    const auto probes = enumerate_basis(cfg.L, cfg.N, cfg.probe_degree);
    const std::span<const MultiIndex> pr(probes);
    report["probes"] = {{"max_degree", cfg.probe_degree}, {"count", probes.size()}};

    if (which == "commute") {
      for (int i = 1; i <= cfg.N; ++i) {
        for (int j = i + 1; j <= cfg.N; ++j) {
          const R r = commutator_residual(i, j, p, RSpan(z), pr);
          passed = passed && r == 0;
          results.push_back({{"i", i}, {"j", j}, {"residual", exact(r)}});
        }
      }
      R worst = 0;
      for (const auto& r : results) worst = std::max(worst, parse_rational(r["residual"]["value"].get<std::string>()));
      report["residual"] = to_string(worst);
    } else if (which == "braid") {
      R ahat = 0;
      int count = 0;
      for (int i = 1; i <= cfg.N; ++i) {
        for (int j = 1; j <= cfg.N; ++j) {
          for (int m = 1; m < cfg.L; ++m) {
            for (int n = 1; n < cfg.L; ++n) {
              for (int m2 = 1; m2 < cfg.L; ++m2) {
                for (int n2 = 1; n2 < cfg.L; ++n2) {
                  ahat = std::max(ahat, R(ahat_commutator_check(i, j, {m, n, m2, n2}, p, pr)));
                  ++count;
                }
              }
            }
          }
        }
      }
      const auto b = braid_residuals(p, pr);
      passed = ahat == 0 && b.three_distinct == 0 && b.four_distinct == 0;
      results.push_back({{"relation", "interior A-hat commutators"}, {"tested", count}, {"residual", exact(ahat)}});
      results.push_back({{"relation", "braid, three distinct times"},
                         {"tested", b.tested.three_distinct},
                         {"residual", exact(b.three_distinct)}});
      results.push_back({{"relation", "braid, four distinct times"},
                         {"tested", b.tested.four_distinct},
                         {"residual", exact(b.four_distinct)}});
    } else if (which == "flatness") {
      const double tol = cfg.tolerance.value_or(1e-7);
      const PfaffianSystem<R> sys(p, resolve_space(cfg));
      for (int i = 1; i <= cfg.N; ++i) {
        for (int j = i + 1; j <= cfg.N; ++j) {
          const auto r = flatness_residual(sys, RSpan(z), i, j, 1e-5);
          passed = passed && r.commutator == 0.0 && r.cross_derivative_relative < tol;
          results.push_back({{"i", i},
                             {"j", j},
                             {"commutator", exact(R(r.commutator))},
                             {"cross_derivative_relative", approx(r.cross_derivative_relative, tol)},
                             {"step", 1e-5}});
        }
      }
      report["dimension"] = sys.dimension();
    } else if (which == "subspace") {
      const Space space = resolve_space(cfg);
      for (int i = 1; i <= cfg.N; ++i) {
        try {
          const auto m = restrict_hamiltonian(p, RSpan(z), space, i);
          results.push_back({{"i", i}, {"overflow", false}, {"dimension", m.rows()}});
        } catch (const SubspaceOverflowError& e) {
          passed = false;
          results.push_back({{"i", i},
                             {"overflow", true},
                             {"source", e.source().to_string()},
                             {"target", e.target().to_string()},
                             {"message", e.what()}});
        }
      }
      // Leading coefficient of the degree-raising part on every probe.
      int compared = 0, mismatched = 0;
      for (int i = 1; i <= cfg.N; ++i) {
        const R zi = z[i - 1];
        const auto h = hamiltonian(i, p, RSpan(z));
        for (const auto& a : probes) {
          const auto image = apply(h, Polynomial<R>::monomial(a), p) * R(zi * (zi - 1));
          for (int n = 1; n < cfg.L; ++n) {
            MultiIndex target = a;
            target.shift(n, i, 1);
            const R want = -(p.resonance() - a.degree()) * (p.kappa[n] + a.level_degree(n));
            ++compared;
            if (image.coefficient(target) != want) ++mismatched;
          }
        }
      }
      passed = passed && mismatched == 0;
      report["space"] = space.describe();
      report["leading_coefficient"] = {{"compared", compared}, {"mismatched", mismatched}};
    } else if (which == "garnier") {
      for (int i = 1; i <= cfg.N; ++i) {
        const auto r = garnier_example_residual(i, p, RSpan(z), pr);
        passed = passed && r.deviation == 0;
        results.push_back({{"i", i}, {"lambda", exact(r.lambda)}, {"deviation", exact(r.deviation)}});
      }
    } else {
      throw ParameterError("unknown check '" + which + "' (commute, braid, flatness, subspace, garnier, lemmas)");
    }
  }
  report["results"] = results;
  report["passed"] = passed;
  out.report = report;
  out.code = passed ? kOk : kCheckFailed;
  return out;
}

CommandOutput cmd_pfaffian(const RunConfig& cfg) {
  const auto p = resolve_parameters(cfg);
  const Space space = resolve_space(cfg);
  if (cfg.path.size() < 2) throw ParameterError("pfaffian needs a path with at least two waypoints (--path)");
  const ZPath path{cfg.path};
  const PfaffianSystem<Complex> sys(PfaffianSystem<R>(p, space));
  CVector c0;
  std::string source;
  if (cfg.initial) {
    c0 = *cfg.initial;
    source = "config";
  } else {
    std::vector<double> z0;
    for (const auto& w : path.waypoints.front()) {
      if (w.imag() != 0.0) throw ParameterError("quadrature start needs a real first waypoint; give 'initial'");
      z0.push_back(w.real());
    }
    const int M = copies(cfg);
    const auto r = M == 1 ? eval_psi1(p, z0, cfg.quad) : eval_psim(p, z0, M, cfg.quad);
    c0.assign(r.c.begin(), r.c.end());
    source = "quadrature";
  }
  if (c0.size() != sys.dimension()) throw ParameterError("initial vector needs " + std::to_string(sys.dimension()) + " entries");
  OdeOptions opts;
  const auto r = propagate(sys, path, c0, opts);
  json waypoints = json::array();
  for (const auto& w : path.waypoints) waypoints.push_back(approx_list(w, 0.0));
  CommandOutput out;
  out.report = {{"command", "pfaffian"},
                {"model", model_json(cfg, p)},
                {"space", space.describe()},
                {"basis", basis_json(sys.basis())},
                {"path", waypoints},
                {"initial", approx_list(c0, 0.0)},
                {"initial_source", source},
                {"endpoint", approx_list(r.c, opts.rtol)},
                {"steps",
                 {{"accepted", r.stats.accepted},
                  {"rejected", r.stats.rejected},
                  {"evaluations", r.stats.evaluations},
                  {"min_step", approx(r.stats.min_step, 0.0)},
                  {"max_step", approx(r.stats.max_step, 0.0)}}},
                {"rtol", opts.rtol},
                {"atol", opts.atol}};
  if (path.closed()) {
    double defect = 0;
    for (std::size_t k = 0; k < c0.size(); ++k) defect = std::max(defect, std::abs(r.c[k] - c0[k]));
    out.report["return_defect"] = approx(defect, opts.rtol);
  }
  return out;
}

CommandOutput cmd_integral(const RunConfig& cfg) {
  const auto p = resolve_parameters(cfg);
  const int M = copies(cfg);
  const auto z = real_z(cfg);
  const auto r = M == 1 ? eval_psi1(p, z, cfg.quad) : eval_psim(p, z, M, cfg.quad);
  CommandOutput out;
  out.report = integral_json(r, cfg.quad);
  out.report["command"] = "integral";
  out.report["model"] = model_json(cfg, p);
  out.report["z"] = approx_list(z, 0.0);
  out.report["M"] = M;
  return out;
}

CommandOutput cmd_series(const RunConfig& cfg) {
  if (cfg.N != 1) throw UnsupportedError("the series oracle covers N = 1");
  const auto p = resolve_parameters(cfg);
  const auto z = real_z(cfg);
  const auto s = series_psi1(p, z[0], cfg.order);
  CommandOutput out;
  out.report = {{"command", "series"},   {"model", model_json(cfg, p)}, {"z", approx(z[0], 0.0)},
                {"order", s.order},      {"basis", basis_json(s.basis)}, {"c", approx_list(s.c, s.tail_bound)},
                {"tail_bound", approx(s.tail_bound, s.tail_bound)}};
  return out;
}

CommandOutput cmd_verify(const RunConfig& cfg) {
  const auto p = resolve_parameters(cfg);
  const int M = copies(cfg);
  const auto zq = resolve_z(cfg);
  const auto z = to_doubles(zq);
  const PfaffianSystem<Complex> sys(PfaffianSystem<R>(p, Space::level(M)));
  const auto integrands = integrands_for(p, M);
  const auto coeffs = [&](std::span<const double> zz) { return integrate_chains(integrands, zz, cfg.quad); };
  const double tol = pde_tolerance(cfg, M);
  bool passed = true;
  json pde = json::array();
  for (int i : times(cfg)) {
    const auto r = schroedinger_residual(sys, z, i, coeffs, 1e-3);
    passed = passed && r.relative < tol;
    pde.push_back({{"i", i}, {"relative", approx(r.relative, tol)}, {"absolute", approx(r.absolute, tol)}});
  }
  json coh = json::array();
  const auto x = dictionary_m(p, M);
  for (int i : times(cfg)) {
    const auto r = compare_with_operator(p, RSpan(zq), M, i);
    passed = passed && (r.exact || r.scalar_shift);
    coh.push_back({{"i", i},
                   {"exact", r.exact},
                   {"scalar_shift", r.scalar_shift},
                   {"lambda", exact(r.lambda)},
                   {"expected_lambda", exact(M * x.beta[i - 1] / zq[i - 1])},
                   {"discrepancy", exact_matrix(r.discrepancy)}});
  }
  CommandOutput out;
  out.report = {{"command", "verify"},
                {"model", model_json(cfg, p)},
                {"z", exact_list(zq)},
                {"quadrature", {{"scheme", scheme_name(cfg.quad.scheme)}}},
                {"pde_residual", pde},
                {"fd_step", 1e-3},
                {"cohomology", coh},
                {"passed", passed}};
  if (cfg.quad.scheme == QuadratureSpec::Scheme::MonteCarlo) {
    out.report["quadrature"]["samples"] = cfg.quad.mc_samples;
    out.report["quadrature"]["seed"] = cfg.quad.seed;
  } else {
    out.report["quadrature"]["nodes_per_axis"] = cfg.quad.nodes_per_axis;
  }
  if (!cfg.plot.empty()) {
    // c_A along z(s) = s z for s in [1/4, 1]
    const int points = 31;
    std::vector<double> grid;
    std::vector<Series> series(sys.dimension());
    for (std::size_t b = 0; b < sys.dimension(); ++b) series[b].label = "c[" + sys.basis()[b].to_string() + "]";
    for (int k = 0; k < points; ++k) {
      const double s = 0.25 + 0.75 * k / (points - 1);
      std::vector<double> zs;
      for (double v : z) zs.push_back(s * v);
      const auto c = coeffs(zs);
      grid.push_back(zs[0]);
      for (std::size_t b = 0; b < c.size(); ++b) series[b].y.push_back(c[b]);
    }
    out.svg = line_chart("coefficients along z(s) = s z", "z_1", grid, series);
    out.report["plot"] = {{"file", cfg.plot}, {"points", points}, {"path", "z(s) = s z, s in [1/4, 1]"}};
  }
  out.code = passed ? kOk : kCheckFailed;
  return out;
}

}  // namespace qims::cli
