#include "qims/pfaffian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qims/parallel.hpp"

namespace qims {

std::vector<MultiIndex> Space::basis(int L, int N) const {
  return kind == Kind::Level ? enumerate_basis(L, N, M) : enumerate_basis_ft(L, N, T);
}

bool Space::contains(const MultiIndex& a) const {
  if (kind == Kind::Level) return a.degree() <= M;
  for (std::size_t m = 0; m < T.size(); ++m) {
    if (a.level_degree(static_cast<int>(m) + 1) > T[m]) return false;
  }
  return true;
}

std::string Space::describe() const {
  if (kind == Kind::Level) return "V(" + std::to_string(M) + ")";
  std::string s = "F(";
  for (std::size_t m = 0; m < T.size(); ++m) s += (m ? "," : "") + std::to_string(T[m]);
  return s + ")";
}

SubspaceOverflowError::SubspaceOverflowError(const MultiIndex& source, const MultiIndex& target,
                                             const std::string& space)
    : StructureError("H q^{" + source.to_string() + "} has a nonzero coefficient on q^{" + target.to_string() +
                     "} outside " + space + " (resonance condition violated)"),
      source_(source),
      target_(target) {}

namespace {

void check_space(const Shape& shape, const Space& space) {
  if (space.kind == Space::Kind::Box && static_cast<int>(space.T.size()) != shape.rows()) {
    throw ParameterError("F(T) needs L-1 = " + std::to_string(shape.rows()) + " entries in T");
  }
}

/// Column-by-column matrix of op. Every Hamiltonian part has its own
/// z-independent weight, so an identically vanishing overflow of H_i means
/// each part is overflow-free and the check can be done part by part.
template <Scalar S>
DenseMatrix<S> matrix_of(const OperatorExpr<S>& op, const Parameters<S>& params, const Space& space,
                         const std::vector<MultiIndex>& basis,
                         const std::map<MultiIndex, std::size_t, GradedLexLess>& index) {
  const std::size_t D = basis.size();
  std::vector<Polynomial<S>> images(D, Polynomial<S>(params.shape()));
  parallel_for(D, [&](std::size_t b) { images[b] = apply(op, Polynomial<S>::monomial(basis[b]), params); });
  DenseMatrix<S> out(D, D);
  for (std::size_t b = 0; b < D; ++b) {
    // Floating parameters meet the resonance condition only to rounding, so
    // overflow at that level is dropped.
    double floor = 0;
    if constexpr (!is_exact_v<S>) floor = 1e-12 * std::max(1.0, double(images[b].max_abs_coefficient()));
    for (const auto& [a, coeff] : images[b]) {
      auto it = index.find(a);
      if (it != index.end()) {
        out(it->second, b) = coeff;
      } else {
        if constexpr (!is_exact_v<S>) {
          if (std::abs(coeff) <= floor) continue;
        }
        throw SubspaceOverflowError(basis[b], a, space.describe());
      }
    }
  }
  return out;
}

template <Scalar S>
std::map<MultiIndex, std::size_t, GradedLexLess> make_index(const std::vector<MultiIndex>& basis) {
  std::map<MultiIndex, std::size_t, GradedLexLess> idx;
  for (std::size_t k = 0; k < basis.size(); ++k) idx.emplace(basis[k], k);
  return idx;
}

}  // namespace

template <Scalar S>
DenseMatrix<S> restrict_hamiltonian(const Parameters<S>& params, std::span<const S> z, const Space& space, int i) {
  params.validate();
  check_space(params.shape(), space);
  const auto basis = space.basis(params.L, params.N);
  const auto index = make_index<S>(basis);
  const OperatorExpr<S> h = hamiltonian(i, params, z);
  return matrix_of<S>(h, params, space, basis, index);
}

template <Scalar S>
PfaffianSystem<S>::PfaffianSystem(Parameters<S> params, Space space)
    : params_(std::move(params)), space_(std::move(space)) {
  params_.validate();
  check_space(params_.shape(), space_);
  basis_ = space_.basis(params_.L, params_.N);
  index_ = make_index<S>(basis_);
  for (int i = 1; i <= params_.N; ++i) {
    const HamiltonianParts<S> hp = hamiltonian_parts(i, params_);
    Parts parts;
    parts.base = matrix_of<S>(hp.base, params_, space_, basis_, index_);
    parts.pole = matrix_of<S>(hp.pole, params_, space_, basis_, index_);
    for (const auto& ex : hp.exchange) parts.exchange.push_back(matrix_of<S>(ex, params_, space_, basis_, index_));
    parts_.push_back(std::move(parts));
  }
}

template <Scalar S>
template <Scalar From>
  requires(!std::is_same_v<From, S>)
PfaffianSystem<S>::PfaffianSystem(const PfaffianSystem<From>& exact) {
  static_assert(std::is_same_v<From, Rational> && std::is_same_v<S, Complex>, "only exact -> float conversion");
  params_ = convert_parameters<Complex>(exact.params_);
  space_ = exact.space_;
  basis_ = exact.basis_;
  index_ = exact.index_;
  for (const auto& p : exact.parts_) {
    Parts q;
    q.base = to_complex(p.base);
    q.pole = to_complex(p.pole);
    for (const auto& e : p.exchange) q.exchange.push_back(to_complex(e));
    parts_.push_back(std::move(q));
  }
}

template <Scalar S>
std::size_t PfaffianSystem<S>::index_of(const MultiIndex& a) const {
  auto it = index_.find(a);
  if (it == index_.end()) throw StructureError("q^{" + a.to_string() + "} is not in " + space_.describe());
  return it->second;
}

template <Scalar S>
DenseMatrix<S> PfaffianSystem<S>::matrix_at(int i, std::span<const S> z) const {
  if (i < 1 || i > params_.N) throw StructureError("time index out of range");
  check_admissible(z, params_.N);
  const HamiltonianWeights<S> w = hamiltonian_weights(i, z);
  const Parts& p = parts_[i - 1];
  DenseMatrix<S> m = p.base;
  m += p.pole * w.pole;
  for (int j = 1; j <= params_.N; ++j) {
    if (j != i) m += p.exchange[j - 1] * w.exchange[j - 1];
  }
  m *= w.overall;
  return m;
}

namespace {

double max_abs_double(const DenseMatrix<Complex>& m) { return m.max_abs(); }

}  // namespace

template <Scalar S>
FlatnessResidual flatness_residual(const PfaffianSystem<S>& system, std::span<const S> z, int i, int j, double h) {
  FlatnessResidual out;
  if (i == j) {
    out.commutator_exact = is_exact_v<S>;
    return out;
  }
  const auto mi = system.matrix_at(i, z);
  const auto mj = system.matrix_at(j, z);
  out.commutator = to_double(commutator(mi, mj).max_abs());
  out.commutator_exact = is_exact_v<S>;

  CVector zc;
  for (const auto& v : z) {
    if constexpr (is_exact_v<S>) {
      zc.push_back(from_rational<Complex>(v));
    } else {
      zc.push_back(v);
    }
  }
  auto float_matrix = [&](int k, const CVector& at) {
    if constexpr (is_exact_v<S>) {
      std::vector<Rational> zr;
      for (const auto& v : at) zr.push_back(Rational(v.real()));
      return to_complex(system.matrix_at(k, zr));
    } else {
      return system.matrix_at(k, at);
    }
  };
  auto derivative = [&](int which, int along) {
    CVector plus = zc, minus = zc;
    plus[along - 1] += h;
    minus[along - 1] -= h;
    DenseMatrix<Complex> d = float_matrix(which, plus) - float_matrix(which, minus);
    d *= Complex(1.0 / (2.0 * h), 0.0);
    return d;
  };
  const auto di_mj = derivative(j, i);
  const auto dj_mi = derivative(i, j);
  out.cross_derivative = max_abs_double(di_mj - dj_mi);
  const double scale = std::max(max_abs_double(di_mj), max_abs_double(dj_mi));
  out.cross_derivative_relative = scale > 0 ? out.cross_derivative / scale : out.cross_derivative;
  return out;
}

// ---- paths and transport ----

namespace {

double segment_distance(Complex u, Complex v) {
  // min over s in [0, 1] of |u + s v|
  const double vv = std::norm(v);
  double s = vv > 0 ? -std::real(std::conj(v) * u) / vv : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(u + s * v);
}

std::string point_string(const CVector& z) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < z.size(); ++k) os << (k ? ", " : "") << to_string(z[k]);
  os << ")";
  return os.str();
}

}  // namespace

bool ZPath::closed() const { return !waypoints.empty() && waypoints.front() == waypoints.back(); }

void ZPath::validate(int N, double guard) const {
  if (waypoints.empty()) throw ParameterError("path has no waypoints");
  for (const auto& w : waypoints) check_admissible<Complex>(w, N);
  for (std::size_t k = 0; k + 1 < waypoints.size(); ++k) {
    const CVector& a = waypoints[k];
    const CVector& b = waypoints[k + 1];
    double len = 0.0;
    for (int i = 0; i < N; ++i) len += std::norm(b[i] - a[i]);
    len = std::sqrt(len);
    if (len == 0.0) continue;
    const double bound = guard * len;
    auto fail = [&](const std::string& what) {
      throw SingularityError("segment " + point_string(a) + " -> " + point_string(b) + " passes within " +
                             std::to_string(bound) + " of " + what);
    };
    for (int i = 0; i < N; ++i) {
      const Complex d = b[i] - a[i];
      if (segment_distance(a[i], d) < bound) fail("z_" + std::to_string(i + 1) + " = 0");
      if (segment_distance(a[i] - 1.0, d) < bound) fail("z_" + std::to_string(i + 1) + " = 1");
      for (int j = i + 1; j < N; ++j) {
        const Complex dj = b[j] - a[j];
        if (segment_distance(a[i] - a[j], d - dj) / std::sqrt(2.0) < bound) {
          fail("z_" + std::to_string(i + 1) + " = z_" + std::to_string(j + 1));
        }
      }
    }
  }
}

PropagationResult propagate(const PfaffianSystem<Complex>& system, const ZPath& path, CVector c0,
                            const OdeOptions& opts) {
  const int N = system.params().N;
  if (c0.size() != system.dimension()) throw ParameterError("initial vector has the wrong dimension");
  path.validate(N);
  const Complex planck = system.params().planck;
  if (std::abs(planck) == 0.0) throw ParameterError("planck constant must be nonzero");
  PropagationResult out{std::move(c0), {}};
  const std::size_t D = system.dimension();
  for (std::size_t k = 0; k + 1 < path.waypoints.size(); ++k) {
    const CVector& a = path.waypoints[k];
    const CVector& b = path.waypoints[k + 1];
    CVector d(N);
    bool moving = false;
    for (int i = 0; i < N; ++i) {
      d[i] = b[i] - a[i];
      moving = moving || d[i] != Complex(0.0);
    }
    if (!moving) continue;
    auto rhs = [&](double s, const CVector& c, CVector& dc) {
      CVector z(N);
      for (int i = 0; i < N; ++i) z[i] = a[i] + s * d[i];
      DenseMatrix<Complex> A(D, D);
      for (int i = 1; i <= N; ++i) {
        if (d[i - 1] == Complex(0.0)) continue;
        A += system.matrix_at(i, z) * (d[i - 1] / planck);
      }
      dc = A.apply(c);
    };
    try {
      out.c = integrate_dopri5(rhs, 0.0, 1.0, std::move(out.c), opts, out.stats);
    } catch (const PropagationError& e) {
      throw PropagationError(std::string(e.what()) + " on segment " + point_string(a) + " -> " + point_string(b));
    }
  }
  return out;
}

PropagationResult monodromy_like_transport(const PfaffianSystem<Complex>& system, const ZPath& loop, CVector c0,
                                           const OdeOptions& opts) {
  if (!loop.closed()) throw ParameterError("transport loop must start and end at the same point");
  return propagate(system, loop, std::move(c0), opts);
}

template DenseMatrix<Rational> restrict_hamiltonian<Rational>(const Parameters<Rational>&, std::span<const Rational>,
                                                              const Space&, int);
template DenseMatrix<Complex> restrict_hamiltonian<Complex>(const Parameters<Complex>&, std::span<const Complex>,
                                                            const Space&, int);
template class PfaffianSystem<Rational>;
template class PfaffianSystem<Complex>;
template PfaffianSystem<Complex>::PfaffianSystem(const PfaffianSystem<Rational>&);
template FlatnessResidual flatness_residual<Rational>(const PfaffianSystem<Rational>&, std::span<const Rational>, int,
                                                      int, double);
template FlatnessResidual flatness_residual<Complex>(const PfaffianSystem<Complex>&, std::span<const Complex>, int,
                                                     int, double);

}  // namespace qims
