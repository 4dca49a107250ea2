#include "qims/report.hpp"

#include <sstream>

namespace qims::cli {

namespace {

json complex_pair(const Complex& x) { return json::array({x.real(), x.imag()}); }

std::string csv_field(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

json exact(const Rational& x) { return {{"value", to_string(x)}, {"provenance", "exact"}}; }

json approx(double x, double tolerance) {
  return {{"value", x}, {"provenance", "float"}, {"tolerance", tolerance}};
}

json approx(const Complex& x, double tolerance) {
  return {{"value", complex_pair(x)}, {"provenance", "float"}, {"tolerance", tolerance}};
}

json exact_list(const std::vector<Rational>& v) {
  json values = json::array();
  for (const auto& x : v) values.push_back(to_string(x));
  return {{"values", values}, {"provenance", "exact"}};
}

json approx_list(const std::vector<double>& v, double tolerance) {
  return {{"values", v}, {"provenance", "float"}, {"tolerance", tolerance}};
}

json approx_list(const CVector& v, double tolerance) {
  json values = json::array();
  for (const auto& x : v) values.push_back(complex_pair(x));
  return {{"values", values}, {"provenance", "float"}, {"tolerance", tolerance}};
}

json exact_matrix(const DenseMatrix<Rational>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(row);
  }
  return {{"entries", rows}, {"provenance", "exact"}};
}

json approx_matrix(const DenseMatrix<Complex>& m, double tolerance) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_pair(m(r, c)));
    rows.push_back(row);
  }
  return {{"entries", rows}, {"provenance", "float"}, {"tolerance", tolerance}};
}

json basis_json(const std::vector<MultiIndex>& basis) {
  json out = json::array();
  for (const auto& a : basis) out.push_back(a.to_string());
  return out;
}

std::string matrix_csv(const DenseMatrix<Rational>& m, const std::vector<MultiIndex>& basis) {
  std::ostringstream os;
  for (std::size_t c = 0; c < basis.size(); ++c) os << (c ? "," : "") << csv_field(basis[c].to_string());
  os << "\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? "," : "") << to_string(m(r, c));
    os << "\n";
  }
  return os.str();
}

}  // namespace qims::cli
