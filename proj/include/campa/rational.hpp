/*
 * Copyright (c) 2026, the campa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef CAMPA_RATIONAL_HPP_
#define CAMPA_RATIONAL_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace campa {

/// Exact rational number. All cost and size arithmetic in the library is
/// exact; floating point appears only when rendering output.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors int literals
  Rat(long n, long d) : v_(n, d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  static Rat from_string(const std::string& s);
  static Rat from_decimal(const std::string& s);

  const mpq_class& raw() const { return v_; }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.v_ == 0) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  /// "3", "-1/2", ... with no spaces; stable across platforms.
  std::string str() const { return v_.get_str(); }
  double to_double() const { return v_.get_d(); }

 private:
  mpq_class v_;
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// Parses "n", "n/d", or a decimal like "0.25"/"1e3".
inline Rat Rat::from_string(const std::string& s) {
  if (s.find_first_of(".eE") != std::string::npos) return from_decimal(s);
  mpq_class v;
  if (v.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational: '" + s + "'");
  v.canonicalize();
  return Rat(v);
}

/// Exact conversion of a decimal string (optional exponent) to a rational.
inline Rat Rat::from_decimal(const std::string& s) {
  std::string digits;
  long exp10 = 0;
  bool neg = false;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  bool seen_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("malformed decimal: " + s);
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) --exp10;
    } else if (c == 'e' || c == 'E') {
      exp10 += std::stol(s.substr(i + 1));
      break;
    } else {
      throw std::invalid_argument("malformed decimal: " + s);
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed decimal: " + s);
  mpz_class num(digits.empty() ? "0" : digits);
  mpq_class v(num);
  mpz_class ten10;
  mpz_ui_pow_ui(ten10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0)
    v /= mpq_class(ten10);
  else
    v *= mpq_class(ten10);
  if (neg) v = -v;
  v.canonicalize();
  return Rat(v);
}

}  // namespace campa

#endif  // CAMPA_RATIONAL_HPP_
