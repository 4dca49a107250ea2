#include "qims/config.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qims/errors.hpp"
#include "qims/exponents.hpp"

namespace qims::cli {

using nlohmann::json;

namespace {

Rational rational_of(const json& v, const std::string& what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) return parse_rational(v.dump());
  throw ParameterError(what + ": expected a number or a \"p/q\" string");
}

std::vector<Rational> rationals_of(const json& v, const std::string& what) {
  if (!v.is_array()) throw ParameterError(what + ": expected a list");
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(rational_of(x, what));
  return out;
}

Complex complex_of(const json& v, const std::string& what) {
  if (v.is_array()) {
    if (v.size() != 2) throw ParameterError(what + ": complex values are [re, im]");
    return {rational_of(v[0], what).get_d(), rational_of(v[1], what).get_d()};
  }
  return {rational_of(v, what).get_d(), 0.0};
}

CVector cvector_of(const json& v, const std::string& what) {
  if (!v.is_array()) throw ParameterError(what + ": expected a list");
  CVector out;
  for (const auto& x : v) out.push_back(complex_of(x, what));
  return out;
}

std::vector<CVector> waypoints_of(const json& v) {
  const json& list = v.is_object() && v.contains("waypoints") ? v.at("waypoints") : v;
  if (!list.is_array()) throw ParameterError("path: expected a list of waypoints");
  std::vector<CVector> out;
  for (const auto& w : list) out.push_back(cvector_of(w, "path waypoint"));
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ParameterError(where + ": expected an object");
  for (const auto& [k, _] : obj.items()) {
    if (!known.count(k)) throw ParameterError("unknown key '" + k + "' in " + where);
  }
}

int int_of(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ParameterError(what + ": expected an integer");
  return v.get<int>();
}

/// Uniform k / den with k in [lo * den, hi * den], from raw engine output so
/// the draw does not depend on the standard library's distributions.
Rational draw(std::mt19937_64& rng, long lo, long hi, long den) {
  const auto span = static_cast<std::uint64_t>((hi - lo) * den + 1);
  return make_rational(lo * den + static_cast<long>(rng() % span), den);
}

}  // namespace

RunConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot read config '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError("config '" + file + "' is not valid JSON: " + e.what());
  }
  reject_unknown(j,
                 {"model", "parameters", "exponents", "z", "i", "path", "initial", "quadrature", "series", "probes",
                  "lemmas", "tolerance", "seed", "output"},
                 "config");
  RunConfig cfg;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    reject_unknown(m, {"L", "N", "M", "T"}, "model");
    if (m.contains("L")) cfg.L = int_of(m.at("L"), "model.L");
    if (m.contains("N")) cfg.N = int_of(m.at("N"), "model.N");
    if (m.contains("M")) cfg.M = int_of(m.at("M"), "model.M");
    if (m.contains("T")) {
      std::vector<int> T;
      for (const auto& t : m.at("T")) T.push_back(int_of(t, "model.T"));
      cfg.T = T;
    }
  }
  if (j.contains("parameters")) {
    const auto& p = j.at("parameters");
    reject_unknown(p, {"e", "kappa", "theta", "theta0", "hbar", "planck"}, "parameters");
    ParameterSpec s;
    s.e = rationals_of(p.at("e"), "parameters.e");
    s.kappa = rationals_of(p.at("kappa"), "parameters.kappa");
    s.theta = rationals_of(p.at("theta"), "parameters.theta");
    if (p.contains("theta0")) s.theta0 = rational_of(p.at("theta0"), "parameters.theta0");
    if (p.contains("hbar")) s.hbar = rational_of(p.at("hbar"), "parameters.hbar");
    if (p.contains("planck")) s.planck = rational_of(p.at("planck"), "parameters.planck");
    cfg.parameters = s;
  }
  if (j.contains("exponents")) {
    const auto& x = j.at("exponents");
    reject_unknown(x, {"alpha", "beta", "gamma", "planck"}, "exponents");
    ExponentSpec s;
    s.alpha = rationals_of(x.at("alpha"), "exponents.alpha");
    s.beta = rationals_of(x.at("beta"), "exponents.beta");
    const auto& g = x.at("gamma");
    s.gamma = g.is_array() ? rationals_of(g, "exponents.gamma") : std::vector<Rational>{rational_of(g, "exponents.gamma")};
    if (x.contains("planck")) s.planck = rational_of(x.at("planck"), "exponents.planck");
    cfg.exponents = s;
  }
  if (cfg.parameters && cfg.exponents) throw ParameterError("give either parameters or exponents, not both");
  if (j.contains("z")) cfg.z = rationals_of(j.at("z"), "z");
  if (j.contains("i")) cfg.i = int_of(j.at("i"), "i");
  if (j.contains("path")) cfg.path = waypoints_of(j.at("path"));
  if (j.contains("initial")) cfg.initial = cvector_of(j.at("initial"), "initial");
  if (j.contains("quadrature")) {
    const auto& q = j.at("quadrature");
    reject_unknown(q, {"scheme", "nodes", "samples", "seed", "doubling_tolerance"}, "quadrature");
    if (q.contains("scheme")) cfg.quad.scheme = parse_scheme(q.at("scheme").get<std::string>());
    if (q.contains("nodes")) cfg.quad.nodes_per_axis = int_of(q.at("nodes"), "quadrature.nodes");
    if (q.contains("samples")) cfg.quad.mc_samples = q.at("samples").get<std::uint64_t>();
    if (q.contains("seed")) cfg.quad.seed = q.at("seed").get<std::uint64_t>();
    if (q.contains("doubling_tolerance")) cfg.quad.doubling_tolerance = q.at("doubling_tolerance").get<double>();
  }
  if (j.contains("series")) {
    reject_unknown(j.at("series"), {"order"}, "series");
    cfg.order = int_of(j.at("series").at("order"), "series.order");
  }
  if (j.contains("probes")) {
    reject_unknown(j.at("probes"), {"degree"}, "probes");
    cfg.probe_degree = int_of(j.at("probes").at("degree"), "probes.degree");
  }
  if (j.contains("lemmas")) {
    reject_unknown(j.at("lemmas"), {"samples"}, "lemmas");
    cfg.lemma_samples = int_of(j.at("lemmas").at("samples"), "lemmas.samples");
  }
  if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, {"out", "plot"}, "output");
    if (o.contains("out")) cfg.out = o.at("out").get<std::string>();
    if (o.contains("plot")) cfg.plot = o.at("plot").get<std::string>();
  }
  return cfg;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw ParameterError("empty list '" + text + "'");
  return out;
}

std::vector<CVector> load_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot read path file '" + file + "'");
  try {
    return waypoints_of(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ParameterError("path file '" + file + "' is not valid JSON: " + e.what());
  }
}

Parameters<Rational> resolve_parameters(const RunConfig& cfg) {
  const int L = cfg.L, N = cfg.N;
  if (L < 2 || N < 1) throw ParameterError("need L >= 2 and N >= 1");
  if (cfg.parameters) {
    const auto& s = *cfg.parameters;
    return make_parameters(L, N, s.e, s.kappa, s.theta, s.hbar, s.planck, s.theta0);
  }
  if (cfg.exponents) {
    const auto& x = *cfg.exponents;
    const int M = cfg.M.value_or(1);
    if (M == 1) return parameters_for_m1(L, N, x.alpha, x.beta, x.gamma, x.planck);
    if (x.gamma.size() != 1) throw ParameterError("exponents.gamma is a single value for M >= 2");
    return parameters_for_m(L, N, M, x.alpha, x.beta, x.gamma[0], x.planck);
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<Rational> e, kappa, theta;
  Rational sum_e = 0, sum_theta = 0;
  for (int m = 0; m + 1 < L; ++m) {
    e.push_back(draw(rng, -2, 2, 7));
    sum_e += e.back();
  }
  e.push_back(make_rational(L - 1, 2) - sum_e);
  for (int m = 0; m < L; ++m) kappa.push_back(draw(rng, -3, 3, 5));
  for (int i = 1; i <= N; ++i) {
    theta.push_back(draw(rng, -2, 2, 3));
    sum_theta += theta.back();
  }
  if (cfg.T) {
    if (static_cast<int>(cfg.T->size()) != L - 1) throw ParameterError("T needs L-1 entries");
    for (int m = 1; m < L; ++m) kappa[m] = -(*cfg.T)[m - 1];
  } else if (cfg.M) {
    kappa[0] = Rational(*cfg.M) + sum_theta;
  }
  return make_parameters(L, N, e, kappa, theta);
}

Space resolve_space(const RunConfig& cfg) {
  if (cfg.T) return Space::box(*cfg.T);
  if (cfg.M) return Space::level(*cfg.M);
  throw ParameterError("this command needs a space: set M (V(M)) or T (F(T))");
}

std::vector<Rational> resolve_z(const RunConfig& cfg) {
  if (cfg.z) {
    if (static_cast<int>(cfg.z->size()) != cfg.N) {
      throw ParameterError("z needs N = " + std::to_string(cfg.N) + " entries");
    }
    return *cfg.z;
  }
  // (2(N-i)+1) / (2N+2): distinct, decreasing, inside (0, 1)
  std::vector<Rational> z;
  for (int i = 1; i <= cfg.N; ++i) z.push_back(make_rational(2 * (cfg.N - i) + 1, 2 * cfg.N + 2));
  return z;
}

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

}  // namespace qims::cli
