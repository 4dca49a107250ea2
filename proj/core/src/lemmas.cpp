#include "qims/lemmas.hpp"

#include <algorithm>
#include <functional>

#include "qims/errors.hpp"

namespace qims {

namespace {

using Copy = std::vector<Rational>;  // t_0 = 1, t_1, ..., t_{L-1}

struct Ctx {
  const LemmaSample& s;
  int L;

  const Rational& z(int i) const { return s.z[i - 1]; }

  /// f_0 (n = 0) or f_n^{(i)}.
  Rational f(const Copy& t, int n, int i) const {
    Rational r = 1;
    if (n > 0) r /= 1 - z(i) * t[L - 1];
    for (int m = 1; m < L; ++m) {
      if (m != n) r /= t[m - 1] - t[m];
    }
    return r;
  }
  Rational phi(const Copy& t, int n, int i) const { return f(t, n, i) / t[L - 1]; }

  Rational C(int n, const Copy& x, const Copy& y) const {
    Rational s = 0;
    for (int m = n; m < L; ++m) {
      Rational part = -1 / Rational(x[m] - y[m - 1]) + 2 / Rational(x[m] - y[m]);
      if (m + 1 < L) part -= 1 / Rational(x[m] - y[m + 1]);
      s += x[m] * part;
    }
    if (n == 1) s += x[1] / (x[1] - 1);
    return s;
  }

  /// Sum over S_2^{L-1}: each level's pair of variables is swapped independently.
  Rational sym(const std::function<Rational(const Copy&, const Copy&)>& g) const {
    Rational total = 0;
    const unsigned count = 1u << (L - 1);
    for (unsigned mask = 0; mask < count; ++mask) {
      Copy x(L), y(L);
      x[0] = y[0] = 1;
      for (int m = 1; m < L; ++m) {
        const bool swap = (mask >> (m - 1)) & 1u;
        x[m] = s.t[swap ? 1 : 0][m];
        y[m] = s.t[swap ? 0 : 1][m];
      }
      total += g(x, y);
    }
    return total;
  }

  Rational sum_f(const Copy& t, int from, int to, int i) const {
    Rational r = 0;
    for (int m = from; m <= to; ++m) r += f(t, m, i);
    return r;
  }
};

Rational two_copy(const Ctx& c, LemmaId id, int n, int l, int i, int j) {
  const int L = c.L;
  const Rational zi = c.z(i), zj = c.z(j);
  const bool cross = i != j;
  auto S = [&](auto g) { return c.sym(g); };
  Rational lhs, rhs;
  if (id == LemmaId::LEq0) {
    const int d = n == 1 ? 1 : 0;
    lhs = S([&](const Copy& x, const Copy& y) -> Rational { return c.C(n, x, y) * c.phi(x, n, i) * c.f(y, 0, i) / y[L - 1]; });
    rhs = S([&](const Copy& x, const Copy& y) -> Rational {
      return c.f(x, n, i) * (-(1 + d) * c.f(y, 0, i) + zi * c.sum_f(y, 1, L - 1, i)) /
             ((zi - 1) * x[L - 1] * y[L - 1]);
    });
    if (d) {
      rhs += S([&](const Copy& x, const Copy& y) -> Rational {
        return c.f(y, 0, i) * (c.f(x, 0, i) - zi * c.sum_f(x, 2, L - 1, i)) / ((zi - 1) * x[L - 1] * y[L - 1]);
      });
    }
    return abs(lhs - rhs);
  }
  lhs = S([&](const Copy& x, const Copy& y) -> Rational { return c.C(n, x, y) * c.phi(x, n, i) * c.phi(y, l, j); });
  auto exchange = [&](int level) {
    return S([&](const Copy& x, const Copy& y) -> Rational {
      return (c.phi(x, n, i) - c.phi(x, n, j)) * (c.phi(y, level, i) - c.phi(y, level, j));
    });
  };
  if (l < n) {
    rhs = S([&](const Copy& x, const Copy& y) -> Rational { return c.phi(x, n, i) * c.phi(y, l, i); });
    if (cross) rhs += zj / (zi - zj) * exchange(l);
  } else if (l > n) {
    rhs = 0;
    if (cross) {
      rhs += S([&](const Copy& x, const Copy& y) -> Rational {
               return (c.phi(x, n, i) - c.phi(x, n, j)) * (zi * c.phi(y, l, i) - zj * c.phi(y, l, j));
             }) /
             (zi - zj);
    }
    if (n == 1) {
      rhs += S([&](const Copy& x, const Copy& y) -> Rational {
               return (c.f(x, 0, i) - c.f(x, 1, i) - zi * c.sum_f(x, 2, L - 1, i)) / x[L - 1] * c.phi(y, l, j);
             }) /
             (zi - 1);
    }
  } else {
    rhs = 0;
    if (n != 1) {
      rhs += S([&](const Copy& x, const Copy& y) -> Rational {
               return (-c.f(x, 0, i) + c.sum_f(x, 1, n, i) + zi * c.sum_f(x, n + 1, L - 1, i)) / x[L - 1] *
                      c.phi(y, n, j);
             }) /
             (zi - 1);
    }
    rhs += S([&](const Copy& x, const Copy& y) -> Rational { return c.phi(x, n, i) * c.phi(y, n, i); });
    if (cross) rhs += zj / (zi - zj) * exchange(n);
  }
  return abs(lhs - rhs);
}

bool covers(LemmaId id, int n, int l) {
  switch (id) {
    case LemmaId::LLtN: return l >= 1 && l < n;
    case LemmaId::NLtL: return n >= 2 && l > n;
    case LemmaId::OneLtL: return n == 1 && l > 1;
    case LemmaId::LEqN: return l == n;
    case LemmaId::LEq0: return l == 0;
    default: return false;
  }
}

}  // namespace

const char* lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::LLtN: return "l_lt_n";
    case LemmaId::NLtL: return "n_lt_l";
    case LemmaId::OneLtL: return "one_lt_l";
    case LemmaId::LEqN: return "l_eq_n";
    case LemmaId::LEq0: return "l_eq_0";
    case LemmaId::Jacobi: return "jacobi";
    case LemmaId::F0: return "f0";
  }
  return "?";
}

LemmaId parse_lemma(const std::string& name) {
  for (LemmaId id : all_lemmas()) {
    if (name == lemma_name(id)) return id;
  }
  throw ParameterError("unknown lemma '" + name + "'");
}

const std::vector<LemmaId>& all_lemmas() {
  static const std::vector<LemmaId> ids{LemmaId::LLtN, LemmaId::NLtL,   LemmaId::OneLtL, LemmaId::LEqN,
                                        LemmaId::LEq0, LemmaId::Jacobi, LemmaId::F0};
  return ids;
}

void LemmaSample::validate() const {
  if (L < 2 || N < 1) throw ParameterError("need L >= 2 and N >= 1");
  if (static_cast<int>(z.size()) != N) throw ParameterError("expected N times");
  std::vector<Rational> all{Rational(0), Rational(1)};
  for (const auto& copy : t) {
    if (static_cast<int>(copy.size()) != L || copy[0] != 1) throw ParameterError("each copy needs t_0 = 1 and L-1 values");
    all.insert(all.end(), copy.begin() + 1, copy.end());
  }
  for (std::size_t a = 0; a < all.size(); ++a) {
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (all[a] == all[b]) throw SingularityError("sample coordinates must be distinct and avoid 0 and 1");
    }
  }
  for (int i = 0; i < N; ++i) {
    if (z[i] == 0 || z[i] == 1) throw SingularityError("z_i must avoid 0 and 1");
    for (int j = i + 1; j < N; ++j) {
      if (z[i] == z[j]) throw SingularityError("times must be distinct");
    }
    for (const auto& copy : t) {
      for (int m = 1; m < L; ++m) {
        if (z[i] * copy[m] == 1) throw SingularityError("sample on the divisor z_i t = 1");
      }
    }
  }
}

LemmaSample random_lemma_sample(int L, int N, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(1, 996);
  while (true) {
    LemmaSample s;
    s.L = L;
    s.N = N;
    for (auto& copy : s.t) {
      copy.assign(L, Rational(1));
      for (int m = 1; m < L; ++m) copy[m] = make_rational(k(rng), 997);
    }
    for (int i = 0; i < N; ++i) s.z.push_back(make_rational(k(rng), 997));
    try {
      s.validate();
      return s;
    } catch (const SingularityError&) {
    }
  }
}

Rational lemma_identity_check(LemmaId id, const LemmaSample& sample) {
  sample.validate();
  const Ctx c{sample, sample.L};
  const int L = sample.L, N = sample.N;
  if (id == LemmaId::Jacobi) {
    if (N < 2) throw ParameterError("the Jacobi relation needs two times");
    Rational worst = 0;
    for (int i = 1; i <= N; ++i) {
      for (int j = 1; j <= N; ++j) {
        if (i == j) continue;
        for (const auto& copy : sample.t) {
          for (int m = 1; m < L; ++m) {
            const Rational& t = copy[m];
            const Rational zi = c.z(i), zj = c.z(j);
            const Rational lhs = t / (1 - zi * t);
            const Rational rhs = (1 - zj * t) / (zi - zj) * (1 / Rational(1 - zi * t) - 1 / Rational(1 - zj * t));
            worst = std::max(worst, Rational(abs(lhs - rhs)));
          }
        }
      }
    }
    return worst;
  }
  if (id == LemmaId::F0) {
    Rational worst = 0;
    for (int i = 1; i <= N; ++i) {
      for (const auto& copy : sample.t) {
        const Rational f0 = c.f(copy, 0, i);
        const Rational lhs = copy[L - 1] / (1 - c.z(i) * copy[L - 1]);
        const Rational rhs = (-f0 + c.sum_f(copy, 1, L - 1, i)) / ((c.z(i) - 1) * f0);
        worst = std::max(worst, Rational(abs(lhs - rhs)));
      }
    }
    return worst;
  }
  Rational worst = 0;
  for (int i = 1; i <= N; ++i) {
    for (int j = 1; j <= N; ++j) {
      for (int n = 1; n < L; ++n) {
        for (int l = 0; l < L; ++l) {
          if (!covers(id, n, l)) continue;
          if (id == LemmaId::LEq0 && j != 1) continue;  // j does not enter
          worst = std::max(worst, two_copy(c, id, n, l, i, j));
        }
      }
    }
  }
  return worst;
}

}  // namespace qims
