#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "ybre/scalar.hpp"

namespace ybre {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

constexpr const char* kVarNames[kNumVars] = {"q", "z", "x", "y", "w"};

// Exponent in half-units -> display string ("2", "-1", "1/2", "-3/2").
inline std::string exp_str(int e2) {
  if (e2 % 2 == 0) return std::to_string(e2 / 2);
  return std::to_string(e2) + "/2";
}

inline std::string mono_str(const Exps& e) {
  std::string s;
  for (int v = 0; v < kNumVars; ++v) {
    if (e[v] == 0) continue;
    if (!s.empty()) s += " ";
    s += kVarNames[v];
    if (e[v] != 2) s += "^(" + exp_str(e[v]) + ")";
  }
  return s;
}

// A single term. Mixed-part Gaussian coefficients are parenthesized so the
// printed form stays an unambiguous expression.
inline std::string term_str(const GaussianRational& c, const Exps& e) {
  std::string m = mono_str(e);
  if (m.empty()) {
    if (c.re != 0 && c.im != 0) return "(" + to_string(c) + ")";
    return to_string(c);
  }
  if (c.is_one()) return m;
  if ((-c).is_one()) return "-" + m;
  if (c.re != 0 && c.im != 0) return "(" + to_string(c) + ") " + m;
  return to_string(c) + " " + m;
}

// Terms in descending lex order, joined with explicit signs.
inline std::string poly_str(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  const auto& ts = p.terms();
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    std::string t = term_str(it->c, it->e);
    if (s.empty()) {
      s = t;
    } else if (t[0] == '-') {
      s += " - " + t.substr(1);
    } else {
      s += " + " + t;
    }
  }
  return s;
}

inline std::string poch_str(const PochSymbol& s) {
  std::string step = "q";
  if (s.g2 != 2) step += "^(" + exp_str(s.g2) + ")";
  std::string r = "(" + term_str(s.coef, s.arg) + " ; " + step + ")_inf";
  if (s.mult != 1) r += "^(" + std::to_string(s.mult) + ")";
  return r;
}

}  // namespace detail

// Canonical text form: "num", or "(num) / (den)", with infinite-product
// factors appended as "* (arg ; step)_inf^(mult)".  Parses back exactly.
inline std::string to_string(const ExactScalar& s) {
  std::string r;
  if (s.den().is_one()) {
    r = detail::poly_str(s.num());
  } else {
    r = "(" + detail::poly_str(s.num()) + ") / (" + detail::poly_str(s.den()) + ")";
  }
  for (const auto& p : s.symbols()) r += " * " + detail::poch_str(p);
  return r;
}

namespace detail {

// Recursive-descent parser over a small expression grammar covering (a
// superset of) the printer's output: +, -, *, /, ^ with parenthesized
// exponents, integers, i, the five variable names, and
// "(argument ; step)_inf" for infinite products.
class ScalarParser {
 public:
  explicit ScalarParser(const std::string& src) : s_(src) {}

  ExactScalar parse() {
    ExactScalar v = sum();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("parse error at offset " + std::to_string(pos_) + ": " + why);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool eat_word(const char* w) {
    skip_ws();
    size_t n = std::string(w).size();
    if (s_.compare(pos_, n, w) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  long integer() {
    skip_ws();
    bool neg = eat('-');
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      fail("expected integer");
    }
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
    }
    return neg ? -v : v;
  }

  // "(n)" or "(n/d)"; result in half-units.
  int exponent_half_units() {
    if (!eat('(')) fail("expected ( before exponent");
    long n = integer();
    long d = 1;
    if (eat('/')) d = integer();
    if (!eat(')')) fail("expected ) after exponent");
    if (d == 0 || (2 * n) % d != 0) fail("exponent must be a half-integer");
    return static_cast<int>(2 * n / d);
  }

  ExactScalar sum() {
    ExactScalar v = eat('-') ? -product() : product();
    while (true) {
      if (eat('+')) {
        v += product();
      } else if (eat('-')) {
        v -= product();
      } else {
        return v;
      }
    }
  }

  ExactScalar product() {
    ExactScalar v = power();
    while (true) {
      if (eat('*')) {
        v *= power();
      } else if (eat('/')) {
        v /= power();
      } else {
        char c = peek();
        // Juxtaposition: "2 q^(2) z" multiplies.
        if (c == '(' || c == 'i' || std::isalnum(static_cast<unsigned char>(c))) {
          v *= power();
        } else {
          return v;
        }
      }
    }
  }

  ExactScalar power() {
    ExactScalar v = primary();
    if (eat('^')) {
      int e2 = exponent_half_units();
      if (e2 % 2 == 0) return v.pow(e2 / 2);
      // Fractional powers are only meaningful on bare variables.
      auto m = v.as_monomial();
      if (!m || !m->first.is_one()) fail("fractional power of a non-monomial");
      Exps e = m->second;
      for (int var = 0; var < kNumVars; ++var) {
        if (e[var] % 2 != 0 && e2 % 2 != 0) fail("nested fractional power");
      }
      // (prod v^{e_v/2...}) ^ (e2/2): exponents multiply; e is half-units,
      // so the product e*e2 carries 1/4 units unless one factor is even.
      Exps r;
      for (int var = 0; var < kNumVars; ++var) {
        long t = static_cast<long>(e[var]) * e2;
        if (t % 2 != 0) fail("quarter powers are not representable");
        r[var] = static_cast<int>(t / 2);
      }
      return ExactScalar::monomial(GaussianRational(1), r);
    }
    return v;
  }

  ExactScalar primary() {
    skip_ws();
    if (eat('(')) {
      ExactScalar v = sum();
      if (eat(';')) {
        return poch_tail(v);
      }
      if (!eat(')')) fail("expected )");
      return v;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::string digits;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        digits += s_[pos_++];
      }
      return ExactScalar(GaussianRational(mpq_class(digits)));
    }
    // Identifier: i or a variable name.
    skip_ws();
    if (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == 'i') {
        ++pos_;
        return ExactScalar(GaussianRational::unit_i());
      }
      for (int v = 0; v < kNumVars; ++v) {
        if (c == kVarNames[v][0]) {
          ++pos_;
          return ExactScalar::variable(static_cast<Var>(v));
        }
      }
    }
    fail("expected value");
  }

  // Already consumed "(arg ;".  Remaining: "step)_inf[^(mult)]".
  ExactScalar poch_tail(const ExactScalar& arg) {
    skip_ws();
    if (peek() != 'q') fail("infinite-product step must be a power of q");
    ++pos_;
    int g2 = 2;
    if (eat('^')) g2 = exponent_half_units();
    if (g2 <= 0 || g2 % 2 != 0) fail("infinite-product step must be a positive power of q");
    if (!eat(')')) fail("expected ) after step");
    if (!eat_word("_inf")) fail("expected _inf");
    int mult = 1;
    if (eat('^')) {
      if (!eat('(')) fail("expected ( before multiplicity");
      mult = static_cast<int>(integer());
      if (!eat(')')) fail("expected ) after multiplicity");
    }
    auto m = arg.as_monomial();
    if (!m) fail("infinite-product argument must be a monomial");
    return ExactScalar::qpoch_inf(m->first, m->second, g2 / 2, mult);
  }
};

}  // namespace detail

inline ExactScalar parse_scalar(const std::string& text) {
  return detail::ScalarParser(text).parse();
}

}  // namespace ybre
