#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qims/integrals.hpp"
#include "qims/parameters.hpp"
#include "qims/pfaffian.hpp"

namespace qims::cli {

/// Exponent-side description, turned into Parameters through the dictionary.
struct ExponentSpec {
  std::vector<Rational> alpha;
  std::vector<Rational> beta;
  std::vector<Rational> gamma;  // L-1 entries for one copy, a single entry for M >= 2
  Rational planck = 1;
};

/// Parameters as written in the config; theta0 is verified when present.
struct ParameterSpec {
  std::vector<Rational> e;
  std::vector<Rational> kappa;
  std::vector<Rational> theta;  // theta_1..theta_N
  std::optional<Rational> theta0;
  Rational hbar = 1;
  Rational planck = 1;
};

struct RunConfig {
  int L = 2;
  int N = 1;
  std::optional<int> M;
  std::optional<std::vector<int>> T;
  std::optional<ParameterSpec> parameters;
  std::optional<ExponentSpec> exponents;
  std::optional<std::vector<Rational>> z;
  std::optional<int> i;
  std::vector<CVector> path;
  std::optional<CVector> initial;
  QuadratureSpec quad;
  int order = 20;
  int probe_degree = 3;
  int lemma_samples = 50;
  std::optional<double> tolerance;
  std::uint64_t seed = 20240601;
  std::string out;
  std::string plot;
};

/// Reads a JSON config; unknown keys are rejected.
RunConfig load_config(const std::string& file);

/// "1/3,0.25,-2" as exact rationals.
std::vector<Rational> parse_rational_list(const std::string& text);

/// Waypoints from a path file: a list of points, or {"waypoints": [...]}.
/// A coordinate is a number, a rational string or a [re, im] pair.
std::vector<CVector> load_path(const std::string& file);

/// Exact parameters: explicit values, the exponent dictionary, or a
/// seed-determined default satisfying the relations (and the resonance
/// condition of the configured space).
Parameters<Rational> resolve_parameters(const RunConfig& cfg);

/// The configured space: F(T) when T is set, else V(M); throws if neither.
Space resolve_space(const RunConfig& cfg);

/// Configured points, or a fixed admissible default in (0, 1).
std::vector<Rational> resolve_z(const RunConfig& cfg);

std::vector<double> to_doubles(const std::vector<Rational>& v);

}  // namespace qims::cli
