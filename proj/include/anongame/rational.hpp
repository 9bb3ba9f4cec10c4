#pragma once

// Exact rational arithmetic. Thin value wrapper over GMP's mpq_class that
// pins down the behaviours the rest of the library relies on: canonical
// form after every operation, "p/q" string serialization, exact comparisons,
// and integer powers. Nothing here is ever rounded implicitly.

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace anongame {

class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(long n, long d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  Rational(const mpz_class& n, const mpz_class& d) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  // Parses "p/q" or a bare integer "p". Rejects anything else.
  static Rational from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(mpz_class(s), mpz_class(1));
      return Rational(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    }
  }

  // 2^e for any integer e (exact).
  static Rational pow2(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(mpz_class(1), p) : Rational(p, mpz_class(1));
  }

  // Always emits "p/q", including "0/1" and "3/1"; keeps serialization canonical.
  std::string str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }

  double to_double() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

// r^e for integer e; e < 0 inverts (r must be nonzero then).
inline Rational pow(const Rational& r, long e) {
  if (e < 0) {
    if (r.is_zero()) throw std::domain_error("Rational: 0 to a negative power");
    return Rational(1) / pow(r, -e);
  }
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), r.num().get_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), r.den().get_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

// Largest multiple of 2^-bits that is <= r. Used by the iteration guards to
// keep denominators from growing without bound.
inline Rational floor_dyadic(const Rational& r, unsigned long bits) {
  mpz_class scaled_num = r.num() << bits;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), r.den().get_mpz_t());
  mpz_class one(1);
  return Rational(q, one << bits);
}

// Number of bits in max(|num|, den); a cheap size measure for budget checks.
inline std::size_t bit_size(const Rational& r) {
  std::size_t nb = mpz_sizeinbase(r.num().get_mpz_t(), 2);
  std::size_t db = mpz_sizeinbase(r.den().get_mpz_t(), 2);
  return nb > db ? nb : db;
}

}  // namespace anongame
