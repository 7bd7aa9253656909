#include "mix/rational.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <system_error>

#include "mix/error.hpp"

namespace mix {
namespace {

BigInt pow10(long exponent) {
  BigInt result = 1;
  for (long k = 0; k < exponent; ++k) result *= 10;
  return result;
}

Rational parse_decimal(std::string_view text) {
  const std::string original(text);
  if (text.empty()) throw InvalidInput("empty number");
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  BigInt digits = 0;
  long scale = 0;
  bool seen_digit = false;
  bool seen_point = false;
  std::size_t pos = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_point) ++scale;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw InvalidInput("not a number: '" + original + "'");
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw InvalidInput("not a number: '" + original + "'");
    const std::string_view exp_text = text.substr(pos + 1);
    const char* first = exp_text.data();
    const char* last = first + exp_text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc{} || ptr != last) throw InvalidInput("bad exponent in '" + original + "'");
    if (exponent > 4000 || exponent < -4000) throw InvalidInput("exponent out of range in '" + original + "'");
  }
  const long net = exponent - scale;
  Rational value = net >= 0 ? Rational(digits * pow10(net)) : Rational(digits, pow10(-net));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

Rational rational_from_decimal_double(double value) {
  if (!std::isfinite(value)) throw InvalidInput("non-finite number");
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw InvalidInput("cannot format number");
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InvalidInput("non-finite number");
  return Rational(value);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::vector<double> to_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

BigInt common_denominator(const std::vector<Rational>& values) {
  BigInt lcm = 1;
  for (const auto& v : values) {
    const BigInt d = denominator(v);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  return lcm;
}

}  // namespace mix
