#include "conelap/parse.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace conelap::cli {
namespace {

struct Rational {
  long long num = 0;
  long long den = 1;
};

Rational reduce(Rational r) {
  const long long g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

// Sum with overflow detection; nullopt means the exact track is abandoned.
std::optional<Rational> add(const Rational& a, const Rational& b) {
  const __int128 num =
      static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
  const __int128 den = static_cast<__int128>(a.den) * b.den;
  constexpr __int128 limit = 1000000000000000000LL;
  if (num > limit || den > limit) return std::nullopt;
  return reduce({static_cast<long long>(num), static_cast<long long>(den)});
}

double rational_pi_value(const Rational& r) {
  const double pi = std::numbers::pi;
  if (r.den == 1) return static_cast<double>(r.num) * pi;
  return static_cast<double>(r.num) * pi / static_cast<double>(r.den);
}

bool parse_ll(std::string_view s, long long& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  // from_chars<double> is available with gcc 11; fall back on full-string stod
  // semantics via strtod.
  if (s.empty()) return false;
  std::string buf(s);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && std::isfinite(out);
}

struct Token {
  double value = 0;
  std::optional<Rational> exact;  // multiple of pi
};

// value := [coef] "pi" ["/" den] | decimal
Token parse_value_token(std::string_view tok) {
  const auto pos = tok.find("pi");
  if (pos == std::string_view::npos) {
    Token t;
    if (!parse_double(tok, t.value))
      throw std::invalid_argument("bad angle token '" + std::string(tok) + "'");
    return t;
  }
  const std::string_view coef = tok.substr(0, pos);
  std::string_view rest = tok.substr(pos + 2);
  long long den = 1;
  if (!rest.empty()) {
    if (rest.front() != '/' || !parse_ll(rest.substr(1), den) || den <= 0)
      throw std::invalid_argument("bad angle token '" + std::string(tok) + "'");
  }
  long long num = 1;
  if (!coef.empty() && parse_ll(coef, num)) {
    if (num <= 0)
      throw std::invalid_argument("bad angle token '" + std::string(tok) + "'");
    Token t;
    t.exact = reduce({num, den});
    t.value = rational_pi_value(*t.exact);
    return t;
  }
  if (coef.empty()) {
    Token t;
    t.exact = reduce({1, den});
    t.value = rational_pi_value(*t.exact);
    return t;
  }
  // Decimal coefficient: inexact multiple of pi.
  double c = 0;
  if (!parse_double(coef, c))
    throw std::invalid_argument("bad angle token '" + std::string(tok) + "'");
  Token t;
  t.value = c * std::numbers::pi / static_cast<double>(den);
  return t;
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\n') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double compensated_sum(const std::vector<double>& v) {
  double sum = 0, carry = 0;
  for (double x : v) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

AngleList parse_angle_list(const std::string& text) {
  std::vector<double> values;
  std::vector<Token> tokens;
  bool exact = true;
  std::optional<Rational> total = Rational{0, 1};

  for (const std::string& raw : split_tokens(text)) {
    if (raw.size() >= 2 && raw.front() == 'x') {
      long long reps = 0;
      if (!parse_ll(std::string_view(raw).substr(1), reps) || reps < 1)
        throw std::invalid_argument("bad repetition token '" + raw + "'");
      if (tokens.empty())
        throw std::invalid_argument("repetition token with no preceding angle");
      const Token last = tokens.back();
      for (long long r = 1; r < reps; ++r) tokens.push_back(last);
      continue;
    }
    tokens.push_back(parse_value_token(raw));
  }
  if (tokens.empty()) throw std::invalid_argument("empty angle list");

  for (const Token& t : tokens) {
    values.push_back(t.value);
    if (!t.exact) {
      exact = false;
    } else if (total) {
      total = add(*total, *t.exact);
      if (!total) exact = false;
    }
  }

  AngleList list;
  list.values = Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
  list.exact = exact && total.has_value();
  list.total = list.exact ? rational_pi_value(*total) : compensated_sum(values);
  return list;
}

Eigen::VectorXd parse_real_list(const std::string& text) {
  std::vector<double> values;
  for (const std::string& raw : split_tokens(text)) {
    double v = 0;
    if (!parse_double(raw, v))
      throw std::invalid_argument("bad numeric token '" + raw + "'");
    values.push_back(v);
  }
  if (values.empty()) throw std::invalid_argument("empty numeric list");
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

AngleVector<double> make_angle_vector(const AngleList& list, Mode mode) {
  if (list.exact)
    return AngleVector<double>(list.values, mode, list.total);
  return AngleVector<double>(list.values, mode);
}

}  // namespace conelap::cli
