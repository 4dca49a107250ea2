#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qims/matrix.hpp"
#include "qims/multi_index.hpp"
#include "qims/ode.hpp"
#include "qims/scalar.hpp"

namespace qims::cli {

using nlohmann::json;

/// Numbers carry their provenance: {"value": "p/q", "provenance": "exact"}.
json exact(const Rational& x);
/// {"value": x, "provenance": "float", "tolerance": tol}
json approx(double x, double tolerance);
json approx(const Complex& x, double tolerance);

/// Lists and matrices share one provenance field for all their entries.
json exact_list(const std::vector<Rational>& v);
json approx_list(const std::vector<double>& v, double tolerance);
json approx_list(const CVector& v, double tolerance);
json exact_matrix(const DenseMatrix<Rational>& m);
json approx_matrix(const DenseMatrix<Complex>& m, double tolerance);

json basis_json(const std::vector<MultiIndex>& basis);

/// Row-major CSV with a header row of basis indices.
std::string matrix_csv(const DenseMatrix<Rational>& m, const std::vector<MultiIndex>& basis);

}  // namespace qims::cli
