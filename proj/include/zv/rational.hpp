#pragma once

// Exact rational scalar on top of GMP.  Values are always canonical
// (denominator > 0, gcd(num, den) = 1); arithmetic never rounds.

#include <zv/errors.hpp>

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace zv {

class Rational {
public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long n) : v_(static_cast<signed long>(n)) {}
  Rational(long long n) { v_ = make_mpz(n); }
  Rational(long long num, long long den) {
    if (den == 0) throw input_error("Rational: zero denominator");
    v_ = mpq_class(make_mpz(num), make_mpz(den));
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rational(const mpz_class& z) : v_(z) {}

  // Accepts "p", "p/q", and an optional leading '-'; no whitespace.
  static Rational parse(std::string_view s) {
    if (s.empty()) throw input_error("Rational: empty string");
    std::size_t slash = s.find('/');
    std::string_view num = s.substr(0, slash == std::string_view::npos ? s.size() : slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-')
      throw input_error("Rational: malformed value '" + std::string(s) + "'");
    mpq_class q(std::string(num) + "/" + std::string(den));
    if (q.get_den() == 0) throw input_error("Rational: zero denominator in '" + std::string(s) + "'");
    q.canonicalize();
    Rational r;
    r.v_ = q;
    return r;
  }

  // "p/q", with "/q" omitted when q = 1.
  std::string str() const { return v_.get_str(); }

  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }
  const mpz_class num() const { return v_.get_num(); }
  const mpz_class den() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational abs() const { Rational r; r.v_ = ::abs(v_); return r; }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw input_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.v_ = -a.v_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  // Exact n-th power, n >= 0.
  Rational pow(unsigned n) const {
    mpq_class out;
    mpz_pow_ui(out.get_num_mpz_t(), v_.get_num_mpz_t(), n);
    mpz_pow_ui(out.get_den_mpz_t(), v_.get_den_mpz_t(), n);
    Rational r;
    r.v_ = out;
    return r;
  }

  // Largest integer <= value, as a Rational.
  Rational floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return Rational(q);
  }

  std::size_t hash() const {
    std::hash<std::string> h;
    return h(v_.get_str());
  }

private:
  static bool valid_int(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = s.front() == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  }

  static mpz_class make_mpz(long long n) {
    mpz_class z;
    if (n >= 0) {
      mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
    } else {
      unsigned long long m = ~static_cast<unsigned long long>(n) + 1ULL;
      mpz_import(z.get_mpz_t(), 1, 1, sizeof(m), 0, 0, &m);
      z = -z;
    }
    return z;
  }

  mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

} // namespace zv

template <>
struct std::hash<zv::Rational> {
  std::size_t operator()(const zv::Rational& r) const { return r.hash(); }
};
