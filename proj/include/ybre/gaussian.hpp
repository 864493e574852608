#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace ybre {

struct DivisionByZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Element of Q(i), the Gaussian rationals.  Both parts are arbitrary
// precision via GMP; mpq_class keeps itself in lowest terms.
struct GaussianRational {
  mpq_class re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long r) : re(r), im(0) {}
  GaussianRational(const mpq_class& r) : re(r), im(0) {}
  GaussianRational(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational unit_i() { return GaussianRational(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }
  bool is_real() const { return im == 0; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }

  GaussianRational operator-() const { return {-re, -im}; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }

  GaussianRational conj() const { return {re, -im}; }
  mpq_class norm() const { return re * re + im * im; }

  GaussianRational inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero Gaussian rational");
    mpq_class n = norm();
    return {re / n, -im / n};
  }

  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
  }

  GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
  GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

  GaussianRational pow(long e) const {
    GaussianRational base = *this;
    if (e < 0) {
      base = base.inverse();
      e = -e;
    }
    GaussianRational acc(1);
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }
};

namespace detail {

inline std::string rat_str(const mpq_class& v) { return v.get_str(); }

// Magnitude part of an imaginary coefficient: 1 prints as bare "i".
inline std::string imag_str(const mpq_class& v) {
  mpq_class a = abs(v);
  std::string s = (a == 1) ? "i" : rat_str(a) + "i";
  return (v < 0) ? "-" + s : s;
}

}  // namespace detail

// Canonical text form.  Pure real: "3", "-2/5".  Pure imaginary: "i",
// "-2/3i".  Mixed parts are joined with an explicit sign: "1+2i", "1-i".
// Mixed values get wrapped in parentheses by the polynomial printer, not
// here.
inline std::string to_string(const GaussianRational& v) {
  if (v.im == 0) return detail::rat_str(v.re);
  if (v.re == 0) return detail::imag_str(v.im);
  std::string s = detail::rat_str(v.re);
  if (v.im > 0) s += "+";
  return s + detail::imag_str(v.im);
}

}  // namespace ybre
