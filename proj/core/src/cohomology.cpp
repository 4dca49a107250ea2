#include "qims/cohomology.hpp"

#include <map>
#include <vector>

#include "qims/errors.hpp"
#include "qims/exponents.hpp"
#include "qims/hamiltonian.hpp"
#include "qims/pfaffian.hpp"

namespace qims {

const char* display_variant_name(DisplayVariant v) {
  return v == DisplayVariant::Printed ? "printed" : "sign_corrected";
}

DisplayVariant parse_display_variant(const std::string& name) {
  if (name == "printed") return DisplayVariant::Printed;
  if (name == "sign_corrected" || name == "corrected") return DisplayVariant::SignCorrected;
  throw ParameterError("unknown display variant '" + name + "'");
}

namespace {

double to_double_mag(const Rational& x) { return x.get_d(); }
double to_double_mag(double x) { return x; }

struct Shift {
  int m;
  int j;
  int delta;
};

template <Scalar S>
class Assembler {
 public:
  Assembler(int L, int N, int M) : L_(L), N_(N), M_(M), basis_(Space::level(M).basis(L, N)) {
    for (std::size_t k = 0; k < basis_.size(); ++k) index_[key(basis_[k])] = k;
    out_ = DenseMatrix<S>(basis_.size(), basis_.size());
  }

  const std::vector<MultiIndex>& basis() const { return basis_; }

  void add(std::size_t row, const MultiIndex& a, std::initializer_list<Shift> shifts, const S& coef) {
    MultiIndex b = a;
    for (const auto& s : shifts) {
      if (!b.shift(s.m, s.j, s.delta)) return;  // an entry would go negative
    }
    if (b.degree() > M_) return;  // A_0 would go negative
    out_(row, index_.at(key(b))) += coef;
  }

  DenseMatrix<S> take() { return std::move(out_); }

 private:
  static std::vector<int> key(const MultiIndex& a) {
    std::vector<int> k(a.size());
    for (int t = 0; t < a.size(); ++t) k[t] = a.entry(t);
    return k;
  }

  int L_, N_, M_;
  std::vector<MultiIndex> basis_;
  std::map<std::vector<int>, std::size_t> index_;
  DenseMatrix<S> out_;
};

}  // namespace

template <Scalar S>
DenseMatrix<S> pfaffian_from_cohomology(const Parameters<S>& params, std::span<const S> z, int M, int i,
                                        DisplayVariant variant) {
  const int L = params.L, N = params.N;
  if (i < 1 || i > N) throw StructureError("time index out of range");
  check_admissible<S>(z, N);
  const ExponentsM<S> ex = dictionary_m(params, M);
  auto alpha = [&](int n) { return ex.alpha[n - 1]; };
  auto beta = [&](int j) { return ex.beta[j - 1]; };
  const S& gamma = ex.gamma;
  const S one = from_int<S>(1);
  const S zi = z[i - 1];
  auto zz = [&](int j) { return z[j - 1]; };
  const long sign_ln = variant == DisplayVariant::Printed ? 1 : -1;

  Assembler<S> as(L, N, M);
  const auto& basis = as.basis();
  for (std::size_t row = 0; row < basis.size(); ++row) {
    const MultiIndex& A = basis[row];
    auto a = [&](int m, int j) { return from_int<S>(A(m, j)); };
    auto col_sum = [&](int j) {
      S s = from_int<S>(0);
      for (int m = 1; m < L; ++m) s += a(m, j);
      return s;
    };
    const S A0 = from_int<S>(M - A.degree());

    S diag = from_int<S>(0);
    for (int n = 1; n < L; ++n) {
      S bracket = from_int<S>(sign_ln * (L - n)) - beta(i);
      for (int m = n; m < L; ++m) bracket += alpha(m);
      for (int m = 1; m <= n; ++m) bracket += a(m, i);
      diag -= a(n, i) * bracket;
    }
    S pole = A0 * (col_sum(i) - beta(i)) + a(1, i) * (from_int<S>(M) - gamma);
    for (int j = 1; j <= N; ++j) {
      for (int n = 1; n < L; ++n) pole -= a(n, i) * a(n, j);
    }
    diag += pole / (zi - one);
    for (int j = 1; j <= N; ++j) {
      if (j == i) continue;
      S s = from_int<S>(0);
      for (int n = 1; n < L; ++n) s += a(n, i) * (col_sum(j) + a(n, j) - beta(j)) - beta(i) * a(n, j);
      diag += zz(j) / (zi - zz(j)) * s;
    }
    as.add(row, A, {}, diag);

    for (int n = 1; n < L; ++n) {
      S level = from_int<S>(0);
      for (int j = 1; j <= N; ++j) level += a(n, j);
      if (n == 1) level += gamma - from_int<S>(M);
      as.add(row, A, {{n, i, -1}}, -(A0 + one) / (zi - one) * level);
      as.add(row, A, {{n, i, +1}}, zi / (zi - one) * (col_sum(i) - beta(i)) * (a(n, i) + one));
      for (int m = 1; m < L; ++m) {
        if (m == n) continue;
        const S w = m < n ? one : zi;
        as.add(row, A, {{m, i, +1}, {n, i, -1}}, -w / (zi - one) * level * (a(m, i) + one));
      }
      for (int j = 1; j <= N; ++j) {
        if (j == i) continue;
        for (int m = 1; m < L; ++m) {
          if (m == n) continue;
          const S w = m < n ? zz(j) : zi;
          as.add(row, A, {{m, j, -1}, {m, i, +1}, {n, i, -1}, {n, j, +1}},
                 (a(n, j) + one) / (zi - zz(j)) * w * (a(m, i) + one));
        }
        as.add(row, A, {{n, j, -1}, {n, i, +1}}, zi / (zi - zz(j)) * (beta(i) - col_sum(i)) * (a(n, i) + one));
        as.add(row, A, {{n, i, -1}, {n, j, +1}}, zz(j) / (zi - zz(j)) * (beta(j) - col_sum(j)) * (a(n, j) + one));
      }
    }
  }
  DenseMatrix<S> out = as.take();
  out *= one / zi;
  return out;
}

template <Scalar S>
CohomologyComparison<S> compare_with_operator(const Parameters<S>& params, std::span<const S> z, int M, int i,
                                              DisplayVariant variant) {
  const PfaffianSystem<S> system(params, Space::level(M));
  CohomologyComparison<S> r;
  r.discrepancy = pfaffian_from_cohomology(params, z, M, i, variant) - system.matrix_at(i, z);
  const std::size_t D = r.discrepancy.rows();
  r.max_off_diagonal = Magnitude<S>{0};
  for (std::size_t p = 0; p < D; ++p) {
    for (std::size_t q = 0; q < D; ++q) {
      if (p == q) continue;
      const auto v = magnitude(r.discrepancy(p, q));
      if (v > r.max_off_diagonal) r.max_off_diagonal = v;
    }
  }
  // Exact zero for rationals; 1e-10 relative to the largest entry for floats.
  const double tol = 1e-10 * (1.0 + to_double_mag(r.discrepancy.max_abs()));
  auto vanishes = [&](const S& x) {
    if constexpr (is_exact_v<S>) {
      return is_zero(x);
    } else {
      return std::abs(x) <= tol;
    }
  };
  r.lambda = r.discrepancy(0, 0);
  bool constant_diagonal = true;
  for (std::size_t p = 1; p < D; ++p) constant_diagonal = constant_diagonal && vanishes(r.discrepancy(p, p) - r.lambda);
  bool off_zero = true;
  for (std::size_t p = 0; p < D; ++p) {
    for (std::size_t q = 0; q < D; ++q) off_zero = off_zero && (p == q || vanishes(r.discrepancy(p, q)));
  }
  r.exact = off_zero && constant_diagonal && vanishes(r.lambda);
  r.scalar_shift = off_zero && constant_diagonal && !r.exact;
  return r;
}

#define QIMS_INSTANTIATE(S)                                                                                       \
  template DenseMatrix<S> pfaffian_from_cohomology<S>(const Parameters<S>&, std::span<const S>, int, int,        \
                                                      DisplayVariant);                                            \
  template CohomologyComparison<S> compare_with_operator<S>(const Parameters<S>&, std::span<const S>, int, int, \
                                                            DisplayVariant);
QIMS_INSTANTIATE(Rational)
QIMS_INSTANTIATE(Complex)
#undef QIMS_INSTANTIATE

}  // namespace qims
