#include "qims/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "qims/parallel.hpp"

namespace qims {

const char* scheme_name(QuadratureSpec::Scheme s) {
  switch (s) {
    case QuadratureSpec::Scheme::GaussJacobiTensor:
      return "gauss_jacobi_tensor";
    case QuadratureSpec::Scheme::TanhSinhTensor:
      return "tanh_sinh_tensor";
    case QuadratureSpec::Scheme::MonteCarlo:
      return "monte_carlo";
  }
  return "?";
}

QuadratureSpec::Scheme parse_scheme(const std::string& name) {
  if (name == "gauss_jacobi_tensor" || name == "gauss_jacobi") return QuadratureSpec::Scheme::GaussJacobiTensor;
  if (name == "tanh_sinh_tensor" || name == "tanh_sinh") return QuadratureSpec::Scheme::TanhSinhTensor;
  if (name == "monte_carlo" || name == "mc") return QuadratureSpec::Scheme::MonteCarlo;
  throw ParameterError("unknown quadrature scheme '" + name + "'");
}

void add_factor(ChainTerm& term, ChainFactor f) {
  for (auto it = term.factors.begin(); it != term.factors.end(); ++it) {
    if (it->kind == f.kind && it->p == f.p && it->q == f.q) {
      it->e += f.e;
      if (std::abs(it->e) < 1e-14) term.factors.erase(it);
      return;
    }
  }
  if (std::abs(f.e) >= 1e-14) term.factors.push_back(f);
}

std::pair<double, double> ChainIntegrand::axis_exponents(const ChainTerm& term, int K, int k) {
  double a = K - k;  // Jacobian prod_k s_{k-1}
  double b = 0.0;
  for (const auto& f : term.factors) {
    switch (f.kind) {
      case ChainFactor::Kind::Power:
        if (f.p >= k) a += f.e;
        break;
      case ChainFactor::Kind::Diff:
        if (f.p >= k) a += f.e;
        if (f.p == k - 1 && f.q == k) b += f.e;
        break;
      case ChainFactor::Kind::Linear:
        break;
    }
  }
  return {a, b};
}

std::vector<std::pair<double, double>> ChainIntegrand::worst_exponents() const {
  std::vector<std::pair<double, double>> out(K, {INFINITY, INFINITY});
  for (const auto& t : terms) {
    for (int k = 1; k <= K; ++k) {
      const auto [a, b] = axis_exponents(t, K, k);
      out[k - 1].first = std::min(out[k - 1].first, a);
      out[k - 1].second = std::min(out[k - 1].second, b);
    }
  }
  for (int k = 1; k <= K; ++k) {
    const auto [a, b] = out[k - 1];
    const bool b_ok = b > -1.0 || (b > -2.0 && std::abs(b + 1.0) > 1e-9);
    if (!(a > -1.0) || !b_ok) {
      throw DomainError("integral diverges: axis " + std::to_string(k) + " has endpoint exponents (" +
                        std::to_string(a) + ", " + std::to_string(b) +
                        "); need a > -1 and b > -1, or -2 < b < -1 for the finite-part continuation");
    }
  }
  return out;
}

namespace {

/// Integrand divided by prod_k u_k^{a_k} (1-u_k)^{b_k}, evaluated from log u and
/// log(1-u). A node with log(1-u) = -inf is the endpoint u = 1 of a
/// finite-part axis: only terms whose exponent there equals b_k survive.
struct ChainEvaluator {
  const ChainIntegrand& f;
  std::vector<std::pair<double, double>> exps;
  std::span<const double> z;
  std::vector<std::vector<double>> term_b;  // term_b[t][k-1]: exponent of (1 - u_k) in term t

  ChainEvaluator(const ChainIntegrand& f_, std::vector<std::pair<double, double>> exps_, std::span<const double> z_)
      : f(f_), exps(std::move(exps_)), z(z_) {
    for (const auto& t : f.terms) {
      std::vector<double> bs;
      for (int k = 1; k <= f.K; ++k) bs.push_back(ChainIntegrand::axis_exponents(t, f.K, k).second);
      term_b.push_back(std::move(bs));
    }
  }

  double operator()(const double* lu, const double* l1mu, double* logs) const {
    const int K = f.K;
    logs[0] = 0.0;
    double base = 0.0;
    bool any_end = false;
    for (int k = 1; k <= K; ++k) {
      logs[k] = logs[k - 1] + lu[k - 1];
      base += (K - k - exps[k - 1].first) * lu[k - 1];
      if (std::isinf(l1mu[k - 1])) {
        any_end = true;
      } else {
        base -= exps[k - 1].second * l1mu[k - 1];
      }
    }
    double total = 0.0;
    for (std::size_t ti = 0; ti < f.terms.size(); ++ti) {
      const auto& term = f.terms[ti];
      if (any_end) {
        bool vanishes = false;
        for (int k = 1; k <= K; ++k) {
          if (std::isinf(l1mu[k - 1]) && term_b[ti][k - 1] - exps[k - 1].second > 1e-9) vanishes = true;
        }
        if (vanishes) continue;
      }
      double lg = base;
      for (const auto& fa : term.factors) {
        switch (fa.kind) {
          case ChainFactor::Kind::Power:
            lg += fa.e * logs[fa.p];
            break;
          case ChainFactor::Kind::Diff: {
            double gap;
            if (fa.q == fa.p + 1) {
              gap = std::isinf(l1mu[fa.q - 1]) ? 0.0 : l1mu[fa.q - 1];
            } else {
              double s = 0.0;
              for (int j = fa.p + 1; j <= fa.q; ++j) s += lu[j - 1];
              gap = std::log(-std::expm1(s));
            }
            lg += fa.e * (logs[fa.p] + gap);
            break;
          }
          case ChainFactor::Kind::Linear:
            lg += fa.e * std::log1p(-z[fa.q - 1] * std::exp(logs[fa.p]));
            break;
        }
      }
      total += term.coeff * std::exp(lg);
    }
    return total;
  }
};

/// Rule for one axis. For b in (-2, -1) the finite part
///   FP int u^a (1-u)^b R = int u^a (1-u)^{b+1} (R(u) - R(1))/(1-u) + R(1) B(a+1, b+1),
/// B continued analytically, becomes a rule for (a, b+1) with weights divided
/// by (1-u_j) plus an endpoint node u = 1. Such axes always use Gauss-Jacobi:
/// tanh-sinh nodes sit so close to u = 1 that the divided weights cancel
/// against the endpoint weight in floating point.
AxisRule axis_rule(QuadratureSpec::Scheme scheme, int n, double a, double b) {
  const bool fp = b <= -1.0;
  const double b_rule = fp ? b + 1.0 : b;
  AxisRule r = scheme == QuadratureSpec::Scheme::TanhSinhTensor && !fp ? tanh_sinh_rule(n, a, b_rule)
                                                                       : gauss_jacobi_rule(n, a, b_rule);
  if (!fp) return r;
  double moved = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    r.weight[j] /= std::exp(r.log_1mu[j]);
    moved += r.weight[j];
  }
  const double b_reg = std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  r.a = a;
  r.b = b;
  r.log_u.push_back(0.0);
  r.log_1mu.push_back(-INFINITY);
  r.weight.push_back(b_reg - moved);
  return r;
}

void check_real_z(std::span<const double> z) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] < 1.0)) throw DomainError("quadrature needs real z_i < 1 (z_" + std::to_string(i + 1) + ")");
  }
}

double tensor_integral(const ChainIntegrand& f, std::span<const double> z, const QuadratureSpec& quad) {
  const auto exps = f.worst_exponents();
  const int K = f.K;
  std::vector<AxisRule> rules;
  for (const auto& [a, b] : exps) rules.push_back(axis_rule(quad.scheme, quad.nodes_per_axis, a, b));
  const ChainEvaluator eval(f, exps, z);
  const std::size_t n0 = rules[0].size();
  std::vector<double> slices(n0, 0.0);
  parallel_for(n0, [&](std::size_t first) {
    std::vector<std::size_t> idx(K, 0);
    idx[0] = first;
    std::vector<double> lu(K), l1mu(K), logs(K + 1);
    double acc = 0.0;
    while (true) {
      double w = 1.0;
      for (int k = 0; k < K; ++k) {
        lu[k] = rules[k].log_u[idx[k]];
        l1mu[k] = rules[k].log_1mu[idx[k]];
        w *= rules[k].weight[idx[k]];
      }
      acc += w * eval(lu.data(), l1mu.data(), logs.data());
      int k = K - 1;
      while (k >= 1 && ++idx[k] == rules[k].size()) idx[k--] = 0;
      if (k < 1) break;
    }
    slices[first] = acc;
  });
  return pairwise_sum<double>(slices);
}

std::vector<double> monte_carlo(const std::vector<ChainIntegrand>& fs, std::span<const double> z,
                                const QuadratureSpec& quad, std::vector<double>* std_error) {
  const int K = fs.front().K;
  std::vector<std::pair<double, double>> exps(K, {INFINITY, INFINITY});
  for (const auto& f : fs) {
    if (f.K != K) throw StructureError("Monte Carlo integrands must share the chain length");
    const auto e = f.worst_exponents();
    for (int k = 0; k < K; ++k) {
      exps[k].first = std::min(exps[k].first, e[k].first);
      exps[k].second = std::min(exps[k].second, e[k].second);
    }
  }
  // Finite-part axes are sampled from (a, b+1); see axis_rule for the estimator.
  std::vector<BetaSampler> samplers;
  std::vector<int> fp_axes;
  std::vector<double> fp_reg;  // continued B(a+1, b+1) / B(a+1, b+2)
  double log_norm = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto [a, b] = exps[k];
    const bool fp = b <= -1.0;
    samplers.emplace_back(a, fp ? b + 1.0 : b);
    log_norm += samplers.back().log_norm();
    if (fp) {
      fp_axes.push_back(k);
      fp_reg.push_back(std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0) /
                       std::exp(samplers.back().log_norm()));
    }
  }
  std::vector<ChainEvaluator> evals;
  for (const auto& f : fs) evals.emplace_back(f, exps, z);
  const std::size_t subsets = std::size_t{1} << fp_axes.size();

  const std::uint64_t total = quad.mc_samples;
  if (total < 2) throw ParameterError("Monte Carlo needs at least two samples");
  constexpr std::uint64_t chunk = 8192;
  const std::size_t chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
  const std::size_t F = fs.size();
  std::vector<double> sums(chunks * F, 0.0), squares(chunks * F, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(quad.seed), static_cast<std::uint32_t>(quad.seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min(total, begin + chunk);
    std::vector<double> lu(K), l1mu(K), logs(K + 1), lu_s(K), l1mu_s(K), v(F);
    for (std::uint64_t s = begin; s < end; ++s) {
      for (int k = 0; k < K; ++k) samplers[k].draw(rng, lu[k], l1mu[k]);
      std::fill(v.begin(), v.end(), 0.0);
      // Product over finite-part axes of [R(u)/(1-u)] + [reg - 1/(1-u)] R(1), expanded by subsets.
      for (std::size_t mask = 0; mask < subsets; ++mask) {
        lu_s = lu;
        l1mu_s = l1mu;
        double w = 1.0;
        for (std::size_t r = 0; r < fp_axes.size(); ++r) {
          const int k = fp_axes[r];
          const double inv = std::exp(-l1mu[k]);
          if (mask >> r & 1U) {
            w *= fp_reg[r] - inv;
            lu_s[k] = 0.0;
            l1mu_s[k] = -INFINITY;
          } else {
            w *= inv;
          }
        }
        for (std::size_t f = 0; f < F; ++f) v[f] += w * evals[f](lu_s.data(), l1mu_s.data(), logs.data());
      }
      for (std::size_t f = 0; f < F; ++f) {
        sums[c * F + f] += v[f];
        squares[c * F + f] += v[f] * v[f];
      }
    }
  });
  const double scale = std::exp(log_norm);
  std::vector<double> out(F);
  if (std_error) std_error->assign(F, 0.0);
  for (std::size_t f = 0; f < F; ++f) {
    std::vector<double> s(chunks), q(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
      s[c] = sums[c * F + f];
      q[c] = squares[c * F + f];
    }
    const double n = static_cast<double>(total);
    const double mean = pairwise_sum<double>(s) / n;
    const double var = std::max(0.0, pairwise_sum<double>(q) / n - mean * mean) * n / (n - 1.0);
    out[f] = scale * mean;
    if (std_error) (*std_error)[f] = scale * std::sqrt(var / n);
  }
  return out;
}

double to_d(const Rational& x) { return x.get_d(); }

}  // namespace

std::vector<double> integrate_chains(const std::vector<ChainIntegrand>& integrands, std::span<const double> z,
                                     const QuadratureSpec& quad, std::vector<double>* std_error) {
  check_real_z(z);
  if (integrands.empty()) return {};
  if (quad.scheme == QuadratureSpec::Scheme::MonteCarlo) return monte_carlo(integrands, z, quad, std_error);
  if (quad.nodes_per_axis < 4) throw ParameterError("tensor quadrature needs at least 4 nodes per axis");
  std::vector<double> out;
  for (const auto& f : integrands) out.push_back(tensor_integral(f, z, quad));
  if (std_error) std_error->assign(out.size(), 0.0);
  return out;
}

std::vector<ChainIntegrand> psi1_integrands(const ExponentsM1<Rational>& exps) {
  const int K = static_cast<int>(exps.alpha.size());
  const int N = static_cast<int>(exps.beta.size());
  const double kappa = to_d(exps.planck);
  ChainTerm weight;
  for (int n = 1; n <= K; ++n) {
    add_factor(weight, {ChainFactor::Kind::Power, n, 0, to_d(exps.alpha[n - 1]) / kappa});
    add_factor(weight, {ChainFactor::Kind::Diff, n - 1, n, -to_d(exps.gamma[n - 1]) / kappa});
  }
  for (int i = 1; i <= N; ++i) add_factor(weight, {ChainFactor::Kind::Linear, K, i, -to_d(exps.beta[i - 1]) / kappa});

  auto form = [&](int n, int i) {
    ChainTerm t = weight;
    t.coeff = n == 0 ? 1.0 : -1.0;
    add_factor(t, {ChainFactor::Kind::Power, K, 0, -1.0});
    for (int m = 1; m <= K; ++m) {
      if (m != n) add_factor(t, {ChainFactor::Kind::Diff, m - 1, m, -1.0});
    }
    if (n != 0) add_factor(t, {ChainFactor::Kind::Linear, K, i, -1.0});
    return ChainIntegrand{K, {t}};
  };

  std::vector<ChainIntegrand> out;
  for (const auto& a : enumerate_basis(K + 1, N, 1)) {
    if (a.degree() == 0) {
      out.push_back(form(0, 0));
      continue;
    }
    for (int n = 1; n <= K; ++n) {
      for (int i = 1; i <= N; ++i) {
        if (a(n, i) == 1) out.push_back(form(n, i));
      }
    }
  }
  return out;
}

namespace {

std::vector<std::vector<int>> permutations(int M) {
  std::vector<int> p(M);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Chain position of t_n^{(a)} in one chamber of the integration region; row 0 is t_0 = 1.
using Chamber = std::vector<std::vector<int>>;

/// The region 1 > t_1^{(a)} > ... > t_{L-1}^{(a)} > 0 for every copy a, with t_n^{(1)} > ... > t_n^{(M)} on each
/// level, split into its total orders (linear extensions of the (L-1) x M grid order).
std::vector<Chamber> region_chambers(int L, int M) {
  std::vector<Chamber> out;
  Chamber cur(L, std::vector<int>(M + 1, 0));
  std::vector<int> filled(L, 0);  // filled[n] = copies already placed on level n
  const int K = (L - 1) * M;
  auto rec = [&](auto&& self, int next) -> void {
    if (next > K) {
      out.push_back(cur);
      return;
    }
    for (int n = 1; n < L; ++n) {
      const int a = filled[n] + 1;
      if (a > M) continue;
      if (n > 1 && filled[n - 1] < a) continue;
      cur[n][a] = next;
      ++filled[n];
      self(self, next + 1);
      --filled[n];
    }
  };
  rec(rec, 1);
  return out;
}

/// Adds (t_x - t_y)^e on the chamber, oriented so that the base is positive. Returns true when the orientation
/// was flipped, which matters only for rational (integer-exponent) factors.
bool add_diff(ChainTerm& t, int x, int y, double e) {
  if (x < y) {
    add_factor(t, {ChainFactor::Kind::Diff, x, y, e});
    return false;
  }
  add_factor(t, {ChainFactor::Kind::Diff, y, x, e});
  return true;
}

ChainTerm weight_m(const ExponentsM<Rational>& exps, const Chamber& pos) {
  const int L = static_cast<int>(exps.alpha.size()) + 1;
  const int N = static_cast<int>(exps.beta.size());
  const int M = exps.M;
  const double kappa = to_d(exps.planck);
  ChainTerm w;
  for (int n = 1; n < L; ++n) {
    for (int a = 1; a <= M; ++a) {
      for (int b = a + 1; b <= M; ++b) add_diff(w, pos[n][a], pos[n][b], 2.0 / kappa);
      if (n + 1 < L) {
        for (int b = 1; b <= M; ++b) add_diff(w, pos[n][a], pos[n + 1][b], -1.0 / kappa);
      }
      add_factor(w, {ChainFactor::Kind::Power, pos[n][a], 0, to_d(exps.alpha[n - 1]) / kappa});
    }
  }
  for (int a = 1; a <= M; ++a) {
    for (int i = 1; i <= N; ++i) {
      add_factor(w, {ChainFactor::Kind::Linear, pos[L - 1][a], i, -to_d(exps.beta[i - 1]) / kappa});
    }
    add_factor(w, {ChainFactor::Kind::Diff, 0, pos[1][a], -to_d(exps.gamma) / kappa});
  }
  return w;
}

/// sigma(phi_A) on one chamber: copy c uses t_n^{(sigma_n(c))} at level n.
ChainTerm sym_term(const ChainTerm& weight, const PhiIndexData& data, int L, const Chamber& chamber,
                   const std::vector<const std::vector<int>*>& sigma) {
  const int M = data.M;
  auto pos = [&](int n, int c) { return n == 0 ? 0 : chamber[n][(*sigma[n - 1])[c - 1]]; };
  ChainTerm t = weight;
  t.coeff = static_cast<double>(data.sign) * static_cast<double>(data.multinomial);
  for (int c = 1; c <= M; ++c) {
    const auto [fn, fi] = data.form_of_copy(c);
    add_factor(t, {ChainFactor::Kind::Power, pos(L - 1, c), 0, -1.0});
    for (int m = 1; m < L; ++m) {
      if (m != fn && add_diff(t, pos(m - 1, c), pos(m, c), -1.0)) t.coeff = -t.coeff;
    }
    if (fn != 0) add_factor(t, {ChainFactor::Kind::Linear, pos(L - 1, c), fi, -1.0});
  }
  return t;
}

template <class Fn>
void for_each_sigma(int levels, const std::vector<std::vector<int>>& perms, Fn&& fn) {
  std::vector<std::size_t> idx(levels, 0);
  std::vector<const std::vector<int>*> sigma(levels);
  while (true) {
    for (int n = 0; n < levels; ++n) sigma[n] = &perms[idx[n]];
    fn(sigma);
    int k = levels - 1;
    while (k >= 0 && ++idx[k] == perms.size()) idx[k--] = 0;
    if (k < 0) break;
  }
}

}  // namespace

std::vector<ChainIntegrand> psim_integrands(const ExponentsM<Rational>& exps) {
  const int L = static_cast<int>(exps.alpha.size()) + 1;
  const int N = static_cast<int>(exps.beta.size());
  const int M = exps.M;
  const int K = M * (L - 1);
  const auto perms = permutations(M);
  const auto chambers = region_chambers(L, M);
  std::vector<ChainTerm> weights;
  for (const auto& chamber : chambers) weights.push_back(weight_m(exps, chamber));
  std::vector<ChainIntegrand> out;
  for (const auto& a : enumerate_basis(L, N, M)) {
    const PhiIndexData data = phi_index_data(a, M);
    ChainIntegrand f{K, {}};
    for (std::size_t h = 0; h < chambers.size(); ++h) {
      for_each_sigma(L - 1, perms,
                     [&](const auto& sigma) { f.terms.push_back(sym_term(weights[h], data, L, chambers[h], sigma)); });
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ChainIntegrand> psim_unsymmetrized(const ExponentsM<Rational>& exps, const MultiIndex& a) {
  const int L = static_cast<int>(exps.alpha.size()) + 1;
  const int M = exps.M;
  const auto perms = permutations(M);
  const PhiIndexData data = phi_index_data(a, M);
  std::vector<ChainIntegrand> out;
  for (const auto& chamber : region_chambers(L, M)) {
    const ChainTerm w = weight_m(exps, chamber);
    for_each_sigma(L - 1, perms, [&](const auto& sigma) {
      out.push_back(ChainIntegrand{M * (L - 1), {sym_term(w, data, L, chamber, sigma)}});
    });
  }
  return out;
}

namespace {

IntegralResult run_with_doubling(std::vector<MultiIndex> basis, const std::vector<ChainIntegrand>& fs,
                                 std::span<const double> z, const QuadratureSpec& quad) {
  IntegralResult r;
  r.basis = std::move(basis);
  if (quad.scheme == QuadratureSpec::Scheme::MonteCarlo) {
    r.c = integrate_chains(fs, z, quad, &r.error);
    r.samples = quad.mc_samples;
  } else {
    QuadratureSpec fine = quad;
    fine.nodes_per_axis = 2 * quad.nodes_per_axis;
    const std::vector<double> coarse = integrate_chains(fs, z, quad);
    r.c = integrate_chains(fs, z, fine);
    r.nodes = fine.nodes_per_axis;
    for (std::size_t k = 0; k < r.c.size(); ++k) r.error.push_back(std::abs(r.c[k] - coarse[k]));
  }
  double scale = 0.0, err = 0.0;
  for (std::size_t k = 0; k < r.c.size(); ++k) {
    scale = std::max(scale, std::abs(r.c[k]));
    err = std::max(err, r.error[k]);
  }
  r.max_relative_error = scale > 0 ? err / scale : err;
  if (quad.scheme != QuadratureSpec::Scheme::MonteCarlo) {
    r.converged = r.max_relative_error <= quad.doubling_tolerance;
    if (!r.converged) {
      throw ConvergenceError("quadrature did not stabilise: relative change " + std::to_string(r.max_relative_error) +
                             " between " + std::to_string(quad.nodes_per_axis) + " and " +
                             std::to_string(r.nodes) + " nodes per axis");
    }
  }
  return r;
}

}  // namespace

IntegralResult eval_psi1(const Parameters<Rational>& params, std::span<const double> z, const QuadratureSpec& quad) {
  const auto exps = dictionary_m1(params);
  if (static_cast<int>(z.size()) != params.N) throw ParameterError("expected one z value per time");
  return run_with_doubling(enumerate_basis(params.L, params.N, 1), psi1_integrands(exps), z, quad);
}

IntegralResult eval_psim(const Parameters<Rational>& params, std::span<const double> z, int M,
                         const QuadratureSpec& quad) {
  const auto exps = dictionary_m(params, M);
  if (static_cast<int>(z.size()) != params.N) throw ParameterError("expected one z value per time");
  return run_with_doubling(enumerate_basis(params.L, params.N, M), psim_integrands(exps), z, quad);
}

PdeResidual schroedinger_residual(const PfaffianSystem<Complex>& system, std::span<const double> z, int i,
                                  const CoefficientFn& coefficients, double h) {
  const int N = system.params().N;
  if (i < 1 || i > N) throw StructureError("time index out of range");
  auto at = [&](double shift) {
    std::vector<double> zz(z.begin(), z.end());
    zz[i - 1] += shift;
    return coefficients(zz);
  };
  const auto c0 = at(0.0);
  const auto p1 = at(h), m1 = at(-h), p2 = at(2 * h), m2 = at(-2 * h);
  CVector zc(z.begin(), z.end());
  const auto Mi = system.matrix_at(i, zc);
  CVector cc(c0.begin(), c0.end());
  const CVector mc = Mi.apply(cc);
  const Complex kappa = system.params().planck;
  PdeResidual r;
  double scale = 0.0;
  for (std::size_t k = 0; k < c0.size(); ++k) {
    const double d = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h);
    r.absolute = std::max(r.absolute, std::abs(kappa * d - mc[k]));
    scale = std::max(scale, std::abs(mc[k]));
  }
  r.relative = scale > 0 ? r.absolute / scale : r.absolute;
  return r;
}

}  // namespace qims
