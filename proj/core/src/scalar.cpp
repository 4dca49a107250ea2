#include "qims/scalar.hpp"

#include <cctype>
#include <cstdio>

#include "qims/errors.hpp"

namespace qims {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational parse_integer(std::string_view s, std::string_view full) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) body.remove_prefix(1);
  if (!all_digits(body)) throw ParameterError("malformed rational '" + std::string(full) + "'");
  mpz_class z(std::string(s.front() == '+' ? s.substr(1) : s), 10);
  return Rational(z);
}

Rational parse_decimal(std::string_view s, std::string_view full) {
  // mantissa[e|E exponent]
  std::string_view mantissa = s;
  long exponent = 0;
  if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    mantissa = s.substr(0, epos);
    std::string_view ex = s.substr(epos + 1);
    Rational e = parse_integer(ex, full);
    exponent = e.get_num().get_si();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '+' || mantissa.front() == '-')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mantissa.substr(0, dot);
    std::string_view fp = mantissa.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty())) {
      throw ParameterError("malformed number '" + std::string(full) + "'");
    }
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(mantissa)) throw ParameterError("malformed number '" + std::string(full) + "'");
    digits = std::string(mantissa);
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - frac_len;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational out = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
  out.canonicalize();
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw ParameterError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_integer(text.substr(0, slash), text);
    Rational den = parse_integer(text.substr(slash + 1), text);
    if (sgn(den) == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
    Rational out = num / den;
    out.canonicalize();
    return out;
  }
  if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text, text);
  return parse_integer(text, text);
}

std::string to_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string to_string(const Complex& x) {
  char buf[64];
  if (x.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", x.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", x.real(), x.imag());
  }
  return buf;
}

}  // namespace qims
