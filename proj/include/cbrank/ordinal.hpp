#pragma once
// Exact arithmetic and structural queries for ordinals below w^w,
// kept in Cantor normal form: a finite sum  w^e1*c1 + ... + w^ek*ck
// with strictly decreasing exponents and positive coefficients.
// The empty sum is 0.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cbrank {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  std::size_t position;
  ParseError(std::size_t pos, const std::string& what)
      : Error("parse error at position " + std::to_string(pos) + ": " + what),
        position(pos) {}
};

class Ordinal {
 public:
  struct Term {
    std::uint32_t exponent = 0;
    std::uint64_t coefficient = 0;
    friend bool operator==(const Term&, const Term&) = default;
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
      if (auto c = a.exponent <=> b.exponent; c != 0) return c;
      return a.coefficient <=> b.coefficient;
    }
  };

  Ordinal() = default;

  static Ordinal nat(std::uint64_t n) {
    Ordinal a;
    if (n > 0) a.terms_.push_back({0, n});
    return a;
  }

  static Ordinal omega_power(std::uint32_t exponent, std::uint64_t coefficient = 1) {
    if (coefficient == 0)
      throw Error("non_canonical_terms: zero coefficient");
    Ordinal a;
    a.terms_.push_back({exponent, coefficient});
    return a;
  }

  // Rejects term lists that are not already canonical.
  static Ordinal from_terms(std::vector<Term> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].coefficient == 0)
        throw Error("non_canonical_terms: zero coefficient");
      if (i > 0 && terms[i - 1].exponent <= terms[i].exponent)
        throw Error("non_canonical_terms: exponents not strictly decreasing");
    }
    Ordinal a;
    a.terms_ = std::move(terms);
    return a;
  }

  // Explicit normalization entry point: interprets the list as an ordinal
  // sum of its terms, left to right, and returns the canonical form.
  static Ordinal normalize(const std::vector<Term>& terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const Ordinal&, const Ordinal&) = default;

 private:
  std::vector<Term> terms_;
};

// Lexicographic on term lists by (exponent, coefficient), longest prefix
// wins; this is the standard ordinal order on Cantor normal forms.
inline std::strong_ordering compare(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::size_t n = x.size() < y.size() ? x.size() : y.size();
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = x[i] <=> y[i]; c != 0) return c;
  return x.size() <=> y.size();
}

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  return compare(a, b);
}

// Ordinal (non-commutative) addition: terms of a below the leading
// exponent of b are absorbed.
inline Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  std::uint32_t lead = b.terms().front().exponent;
  std::vector<Ordinal::Term> out;
  out.reserve(a.terms().size() + b.terms().size());
  for (const auto& t : a.terms())
    if (t.exponent > lead) out.push_back(t);
  if (!a.terms().empty()) {
    // merge coefficients when a still carries a term at b's leading exponent
    for (const auto& t : a.terms())
      if (t.exponent == lead) {
        std::uint64_t sum = t.coefficient + b.terms().front().coefficient;
        if (sum < t.coefficient) throw Error("coefficient_overflow");
        out.push_back({lead, sum});
        break;
      }
  }
  if (out.empty() || out.back().exponent != lead)
    out.push_back(b.terms().front());
  for (std::size_t i = 1; i < b.terms().size(); ++i) out.push_back(b.terms()[i]);
  return Ordinal::from_terms(std::move(out));
}

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }

inline Ordinal Ordinal::normalize(const std::vector<Term>& terms) {
  Ordinal acc;
  for (const auto& t : terms) {
    if (t.coefficient == 0) throw Error("non_canonical_terms: zero coefficient");
    acc = add(acc, Ordinal::omega_power(t.exponent, t.coefficient));
  }
  return acc;
}

// Exponent of the last (smallest) CNF term.
inline std::uint32_t trailing_exponent(const Ordinal& a) {
  if (a.is_zero()) throw Error("zero_has_no_trailing_term");
  return a.terms().back().exponent;
}

inline std::uint32_t leading_exponent(const Ordinal& a) {
  if (a.is_zero()) throw Error("zero_has_no_leading_term");
  return a.terms().front().exponent;
}

inline bool is_limit(const Ordinal& a) {
  return !a.is_zero() && a.terms().back().exponent > 0;
}

inline bool is_successor(const Ordinal& a) {
  return !a.is_zero() && a.terms().back().exponent == 0;
}

inline Ordinal successor(const Ordinal& a) { return add(a, Ordinal::nat(1)); }

inline std::string to_string(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += " + ";
    first = false;
    if (t.exponent == 0) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += "w";
    if (t.exponent != 1) out += "^" + std::to_string(t.exponent);
    if (t.coefficient != 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

// Grammar:  sum := term ("+" term)*
//           term := "w" ("^" nat)? ("*" posnat)? | nat
// Whitespace is insignificant; exponents must be strictly decreasing.
inline Ordinal parse_ordinal(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto parse_nat = [&]() -> std::uint64_t {
    std::size_t start = pos;
    std::uint64_t value = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      std::uint64_t digit = static_cast<std::uint64_t>(text[pos] - '0');
      if (value > (UINT64_MAX - digit) / 10)
        throw ParseError(start, "number out of range");
      value = value * 10 + digit;
      ++pos;
    }
    if (pos == start) throw ParseError(pos, "expected a number");
    return value;
  };

  std::vector<Ordinal::Term> terms;
  bool saw_literal_zero = false;
  while (true) {
    skip_ws();
    if (pos >= text.size()) throw ParseError(pos, "expected a term");
    std::size_t term_start = pos;
    Ordinal::Term t;
    if (text[pos] == 'w') {
      ++pos;
      t.exponent = 1;
      t.coefficient = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip_ws();
        std::uint64_t e = parse_nat();
        if (e > UINT32_MAX) throw ParseError(term_start, "exponent out of range");
        t.exponent = static_cast<std::uint32_t>(e);
      }
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
        t.coefficient = parse_nat();
        if (t.coefficient == 0)
          throw ParseError(term_start, "coefficient must be positive");
      }
    } else if (text[pos] >= '0' && text[pos] <= '9') {
      t.exponent = 0;
      t.coefficient = parse_nat();
      if (t.coefficient == 0) {
        if (!terms.empty()) throw ParseError(term_start, "zero is not a valid term");
        saw_literal_zero = true;
      }
    } else {
      throw ParseError(pos, std::string("unexpected character '") + text[pos] + "'");
    }
    if (!saw_literal_zero) {
      if (!terms.empty() && terms.back().exponent <= t.exponent)
        throw ParseError(term_start, "exponents must be strictly decreasing");
      terms.push_back(t);
    }
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] != '+')
      throw ParseError(pos, std::string("unexpected character '") + text[pos] + "'");
    if (saw_literal_zero) throw ParseError(pos, "zero is not a valid term");
    ++pos;
  }
  return Ordinal::from_terms(std::move(terms));
}

}  // namespace cbrank
