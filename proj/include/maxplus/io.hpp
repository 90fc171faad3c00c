#pragma once

/// @file io.hpp
/// Matrix files and number formatting.
///
/// Plain format: the size n, then n·n whitespace-separated entries in row
/// order. An entry is a decimal number (optionally with exponent), a ratio
/// p/q, or `-inf` / `*` for −∞. `#` starts a comment running to end of line.
/// JSON format: {"n": n, "rows": [[…], …]} with null for −∞.
/// In max-times mode 0 maps to −∞ and x > 0 to ln x.

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "maxplus/error.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/scalar.hpp"

namespace maxplus {

enum class Semiring { maxplus, maxtimes };
enum class FileFormat { automatic, plain, json };

namespace detail {

struct Token {
  std::string text;
  int line = 1;
  int column = 1;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t k = 0;
  auto advance = [&] {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    ++k;
  };
  while (k < text.size()) {
    const char ch = text[k];
    if (ch == '#') {
      while (k < text.size() && text[k] != '\n') advance();
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      advance();
    } else {
      Token tok{{}, line, column};
      while (k < text.size() && !std::isspace(static_cast<unsigned char>(text[k])) && text[k] != '#') {
        tok.text.push_back(text[k]);
        advance();
      }
      out.push_back(std::move(tok));
    }
  }
  return out;
}

inline Error parse_error(int line, int column, const std::string& what) {
  return Error(Errc::parse, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                ": " + what);
}

/// Exact decimal: [sign] digits [. digits] [(e|E) [sign] digits].
struct Decimal {
  bool negative = false;
  std::string digits;  // integer and fraction digits concatenated
  long long exponent = 0;  // value = digits · 10^exponent
};

inline std::optional<Decimal> parse_decimal(std::string_view s) {
  Decimal d;
  std::size_t k = 0;
  if (k < s.size() && (s[k] == '+' || s[k] == '-')) d.negative = s[k++] == '-';
  bool any = false;
  while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
    d.digits.push_back(s[k++]);
    any = true;
  }
  if (k < s.size() && s[k] == '.') {
    ++k;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
      d.digits.push_back(s[k++]);
      --d.exponent;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  if (k < s.size() && (s[k] == 'e' || s[k] == 'E')) {
    ++k;
    bool neg = false;
    if (k < s.size() && (s[k] == '+' || s[k] == '-')) neg = s[k++] == '-';
    if (k >= s.size()) return std::nullopt;
    long long e = 0;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
      e = e * 10 + (s[k++] - '0');
      if (e > 30) return std::nullopt;
    }
    d.exponent += neg ? -e : e;
  }
  if (k != s.size()) return std::nullopt;
  return d;
}

inline std::optional<Rational> decimal_to_rational(const Decimal& d) {
  std::size_t first = d.digits.find_first_not_of('0');
  std::string digits = first == std::string::npos ? "0" : d.digits.substr(first);
  long long exponent = d.exponent;
  // Drop trailing zeros into the exponent before building the ratio.
  while (digits.size() > 1 && digits.back() == '0') {
    digits.pop_back();
    ++exponent;
  }
  if (digits.size() > 17 || exponent > 17 || exponent < -17) return std::nullopt;
  long long mantissa = std::stoll(digits);
  long long scale = 1;
  for (long long e = 0; e < (exponent < 0 ? -exponent : exponent); ++e) scale *= 10;
  if (exponent >= 0) {
    if (mantissa != 0 && scale > (1LL << 62) / mantissa) return std::nullopt;
    Rational r(mantissa * scale);
    return d.negative ? -r : r;
  }
  Rational r(mantissa, scale);
  return d.negative ? -r : r;
}

template <class F>
std::optional<F> parse_number(std::string_view s);

template <>
inline std::optional<double> parse_number<double>(std::string_view s) {
  const auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    auto p = parse_decimal(s.substr(0, slash));
    auto q = parse_decimal(s.substr(slash + 1));
    if (!p || !q || q->negative) return std::nullopt;
    const double den = std::stod(std::string(s.substr(slash + 1)));
    if (den == 0) return std::nullopt;
    return std::stod(std::string(s.substr(0, slash))) / den;
  }
  if (!parse_decimal(s)) return std::nullopt;
  return std::stod(std::string(s));
}

template <>
inline std::optional<Rational> parse_number<Rational>(std::string_view s) {
  const auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    auto p = parse_decimal(s.substr(0, slash));
    auto q = parse_decimal(s.substr(slash + 1));
    if (!p || !q || q->negative) return std::nullopt;
    auto pr = decimal_to_rational(*p);
    auto qr = decimal_to_rational(*q);
    if (!pr || !qr || qr->numerator() == 0) return std::nullopt;
    return *pr / *qr;
  }
  auto d = parse_decimal(s);
  if (!d) return std::nullopt;
  return decimal_to_rational(*d);
}

template <class F>
Tropical<F> entry_from_token(const std::string& text, Semiring semiring, int line, int column) {
  if (text == "-inf" || text == "*") {
    if (semiring == Semiring::maxtimes)
      throw parse_error(line, column, "'" + text + "' is not a max-times entry (use 0)");
    return Tropical<F>::zero();
  }
  auto v = parse_number<F>(text);
  if (!v) throw parse_error(line, column, "bad token '" + text + "'");
  if (semiring == Semiring::maxplus) return Tropical<F>(*v);
  if constexpr (field_traits<F>::exact) {
    throw parse_error(line, column, "max-times input needs the floating-point engine");
  } else {
    if (*v < 0) throw parse_error(line, column, "negative max-times entry '" + text + "'");
    if (*v == 0) return Tropical<F>::zero();
    return Tropical<F>(std::log(*v));
  }
}

inline std::pair<int, int> line_column(std::string_view text, std::size_t offset) {
  int line = 1, column = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline bool looks_like_json(std::string_view text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' || ch == '[';
  }
  return false;
}

template <class F>
Matrix<F> parse_json_matrix(std::string_view text, Semiring semiring) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw parse_error(line, column, "invalid JSON");
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
    throw parse_error(1, 1, "expected an object with \"rows\"");
  const auto& rows = doc["rows"];
  const std::size_t n = rows.size();
  if (doc.contains("n") && (!doc["n"].is_number_integer() || doc["n"].get<long long>() != static_cast<long long>(n)))
    throw Error(Errc::dimension, "\"n\" does not match the number of rows");
  Matrix<F> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n)
      throw Error(Errc::dimension, "row " + std::to_string(i) + " does not have " +
                                       std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& x = rows[i][j];
      const std::string where = "rows[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (x.is_null()) {
        if (semiring == Semiring::maxtimes) throw Error(Errc::parse, where + ": null in max-times input");
        continue;
      }
      if (x.is_string()) {
        m(i, j) = entry_from_token<F>(x.get<std::string>(), semiring, 1, 1);
        continue;
      }
      if (!x.is_number()) throw Error(Errc::parse, where + ": not a number");
      // dump() gives the shortest round-trip form, which parses exactly.
      try {
        m(i, j) = entry_from_token<F>(x.dump(), semiring, 1, 1);
      } catch (const Error& e) {
        throw Error(Errc::parse, where + ": " + e.what());
      }
    }
  }
  return m;
}

template <class F>
Matrix<F> parse_plain_matrix(std::string_view text, Semiring semiring) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw parse_error(1, 1, "empty input");
  const auto& head = tokens.front();
  long long n = -1;
  try {
    std::size_t used = 0;
    n = std::stoll(head.text, &used);
    if (used != head.text.size()) n = -1;
  } catch (const std::exception&) {
    n = -1;
  }
  if (n < 0) throw parse_error(head.line, head.column, "expected the matrix size, got '" + head.text + "'");
  const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (tokens.size() - 1 != count) {
    const auto& at = tokens.size() - 1 > count ? tokens[count + 1] : tokens.back();
    throw Error(Errc::dimension, "line " + std::to_string(at.line) + ", column " +
                                     std::to_string(at.column) + ": expected " +
                                     std::to_string(count) + " entries for n = " +
                                     std::to_string(n) + ", found " +
                                     std::to_string(tokens.size() - 1));
  }
  Matrix<F> m(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < count; ++k) {
    const auto& tok = tokens[k + 1];
    m(k / n, k % n) = entry_from_token<F>(tok.text, semiring, tok.line, tok.column);
  }
  return m;
}

}  // namespace detail

template <class F>
Matrix<F> parse_matrix(std::string_view text, Semiring semiring = Semiring::maxplus,
                       FileFormat format = FileFormat::automatic) {
  if (format == FileFormat::automatic)
    format = detail::looks_like_json(text) ? FileFormat::json : FileFormat::plain;
  return format == FileFormat::json ? detail::parse_json_matrix<F>(text, semiring)
                                    : detail::parse_plain_matrix<F>(text, semiring);
}

/// Vector files: plain "n v1 … vn" or a JSON array with null for −∞.
template <class F>
Vector<F> parse_vector(std::string_view text, Semiring semiring = Semiring::maxplus) {
  if (detail::looks_like_json(text)) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      auto [line, column] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
      throw detail::parse_error(line, column, "invalid JSON");
    }
    if (!doc.is_array()) throw detail::parse_error(1, 1, "expected an array");
    Vector<F> v(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (doc[i].is_null()) continue;
      if (!doc[i].is_number() && !doc[i].is_string())
        throw Error(Errc::parse, "entry " + std::to_string(i) + ": not a number");
      v[i] = detail::entry_from_token<F>(doc[i].is_string() ? doc[i].get<std::string>() : doc[i].dump(),
                                         semiring, 1, 1);
    }
    return v;
  }
  const auto tokens = detail::tokenize(text);
  if (tokens.empty()) throw detail::parse_error(1, 1, "empty input");
  long long n = -1;
  try {
    std::size_t used = 0;
    n = std::stoll(tokens[0].text, &used);
    if (used != tokens[0].text.size()) n = -1;
  } catch (const std::exception&) {
    n = -1;
  }
  if (n < 0) throw detail::parse_error(tokens[0].line, tokens[0].column, "expected the vector length");
  if (tokens.size() - 1 != static_cast<std::size_t>(n))
    throw Error(Errc::dimension, "expected " + std::to_string(n) + " entries, found " +
                                     std::to_string(tokens.size() - 1));
  Vector<F> v(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = detail::entry_from_token<F>(tokens[k + 1].text, semiring, tokens[k + 1].line,
                                       tokens[k + 1].column);
  return v;
}

/// Integers without a decimal point, everything else with up to 12
/// significant digits.
inline std::string format_number(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  if (x == std::floor(x) && std::fabs(x) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(x));
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

template <class F>
std::string format_entry(const Tropical<F>& x) {
  if (x.is_zero()) return "-inf";
  if constexpr (field_traits<F>::exact) {
    const auto& v = x.value();
    if (v.denominator() == 1) return std::to_string(v.numerator());
    return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
  } else {
    return format_number(x.value());
  }
}

/// Plain-format text that parse_matrix reads back to the same matrix
/// (exactly for the exact field).
template <class F>
std::string emit_plain(const Matrix<F>& m) {
  std::ostringstream os;
  os << m.size() << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) os << (j ? " " : "") << format_entry(m(i, j));
    os << '\n';
  }
  return os.str();
}

/// JSON scalar: integer, 12-digit float, or null for −∞.
template <class F>
nlohmann::ordered_json to_json(const Tropical<F>& x) {
  if (x.is_zero()) return nullptr;
  const double d = to_double(x);
  if (d == std::floor(d) && std::fabs(d) < 1e15) return static_cast<long long>(d);
  return std::stod(format_number(d));
}

template <class F>
nlohmann::ordered_json to_json(const Matrix<F>& m) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class F>
nlohmann::ordered_json to_json(const Vector<F>& v) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

template <class F>
std::string emit_json(const Matrix<F>& m) {
  nlohmann::ordered_json doc;
  doc["n"] = m.size();
  doc["rows"] = to_json(m);
  return doc.dump();
}

/// FNV-1a, 64 bit, as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace maxplus
