#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "mapu/error.hpp"

namespace mapu {

// Exact signed rational number, always in lowest terms with a positive
// denominator. Thin wrapper around mpq_class.
class Rational {
 public:
  Rational() = default;

  template <std::integral T>
  Rational(T value) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) {
      value_ = mpz_class(static_cast<long>(value));
    } else {
      value_ = mpz_class(static_cast<unsigned long>(value));
    }
  }

  explicit Rational(const mpz_class& integer) : value_(integer) {}

  Rational(const mpz_class& numerator, const mpz_class& denominator) {
    if (denominator == 0) throw InputError("rational with zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }

  explicit Rational(const mpq_class& value) : value_(value) {
    value_.canonicalize();
  }

  // Accepts "12", "-3", "0.9", "-1.25e-3", "9/10", "+4/6". Throws InputError
  // on anything else.
  static Rational parse(std::string_view text);

  const mpq_class& raw() const noexcept { return value_; }
  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }

  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  // "p/q", or "p" when the denominator is one.
  std::string str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  // Fixed-point rendering rounded half away from zero. Approximate by nature.
  std::string decimal(int places = 6) const;

  Rational& operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.sign() == 0) throw InvariantViolation("rational division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    return Rational(mpq_class(-a.value_));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  mpq_class value_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (ch < '0' || ch > '9') return false;
  }
  return true;
}

inline std::string_view strip_sign(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  return s;
}

inline mpz_class pow10(unsigned long exponent) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, exponent);
  return r;
}

inline mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  s = strip_sign(s, negative);
  if (!all_digits(s)) {
    throw InputError("invalid number '" + std::string(whole) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const std::string_view whole = text;
  if (text.empty()) throw InputError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const mpz_class num = detail::parse_integer(text.substr(0, slash), whole);
    if (!detail::all_digits(text.substr(slash + 1))) {
      throw InputError("denominator must be unsigned digits in '" +
                       std::string(whole) + "'");
    }
    const mpz_class den = detail::parse_integer(text.substr(slash + 1), whole);
    if (den == 0) {
      throw InputError("zero denominator in '" + std::string(whole) + "'");
    }
    return Rational(num, den);
  }

  bool negative = false;
  std::string_view body = detail::strip_sign(text, negative);
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    const mpz_class exp_value = detail::parse_integer(body.substr(e + 1), whole);
    if (!exp_value.fits_slong_p() || abs(exp_value) > 4096) {
      throw InputError("exponent out of range in '" + std::string(whole) + "'");
    }
    exponent = exp_value.get_si();
    body = body.substr(0, e);
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = body.substr(0, dot);
    const std::string_view frac_part = body.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) ||
        (!int_part.empty() && !detail::all_digits(int_part)) ||
        (!frac_part.empty() && !detail::all_digits(frac_part))) {
      throw InputError("invalid number '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!detail::all_digits(body)) {
      throw InputError("invalid number '" + std::string(whole) + "'");
    }
    digits = std::string(body);
  }
  mpz_class num(digits, 10);
  if (negative) num = -num;
  if (exponent >= 0) {
    return Rational(mpz_class(num * detail::pow10(exponent)));
  }
  return Rational(num, detail::pow10(static_cast<unsigned long>(-exponent)));
}

inline std::string Rational::decimal(int places) const {
  if (places < 0) places = 0;
  const mpz_class scale = detail::pow10(static_cast<unsigned long>(places));
  const mpz_class num = abs(value_.get_num()) * scale;
  const mpz_class& den = value_.get_den();
  mpz_class q = num / den;
  const mpz_class rem = num - q * den;
  if (2 * rem >= den) q += 1;
  std::string digits = q.get_str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(),
                    '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  const bool negative = sign() < 0 && q != 0;
  return negative ? "-" + digits : digits;
}

}  // namespace mapu
