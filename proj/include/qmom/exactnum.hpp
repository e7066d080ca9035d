#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <string>
#include <utility>

#include "qmom/config.hpp"

namespace qmom {

// Gaussian rationals.
class QI {
 public:
  QI() : re_(0), im_(0) {}
  QI(long v) : re_(v), im_(0) {}  // NOLINT
  QI(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) { canon(); }  // NOLINT

  static QI i() { return QI(0, 1); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  QI conj() const { return QI(re_, -im_); }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  QI inv() const;
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::string str() const;

  QI& operator+=(const QI& o) { re_ += o.re_; im_ += o.im_; return *this; }
  QI& operator-=(const QI& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
  QI& operator*=(const QI& o);
  QI& operator/=(const QI& o) { return *this *= o.inv(); }

  friend QI operator+(QI a, const QI& b) { return a += b; }
  friend QI operator-(QI a, const QI& b) { return a -= b; }
  friend QI operator*(QI a, const QI& b) { return a *= b; }
  friend QI operator/(QI a, const QI& b) { return a /= b; }
  friend QI operator-(const QI& a) { return QI(-a.re_, -a.im_); }
  friend bool operator==(const QI& a, const QI& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const QI& a, const QI& b) { return !(a == b); }

 private:
  void canon() { re_.canonicalize(); im_.canonicalize(); }
  mpq_class re_, im_;
};

inline bool is_zero(const QI& x) { return x.is_zero(); }

// Element of K = Q(i)(t), t^4 = q, stored as sum_{k<4} c_k t^k. A value
// built with q = 0 is a plain element of Q(i) and mixes with any q.
class KNum {
 public:
  KNum() = default;
  explicit KNum(long q) : q_(q) {}
  KNum(long q, const QI& c0) : q_(q) { c_[0] = c0; }
  KNum(long q, std::array<QI, 4> c) : q_(q), c_(std::move(c)) {}

  static KNum from_int(long q, long v) { return KNum(q, QI(v)); }
  static KNum from_rational(long q, const mpq_class& v) { return KNum(q, QI(v)); }
  static KNum t(long q);
  // i^k
  static KNum zeta(long q, int k);

  long q() const { return q_; }
  const QI& coeff(int k) const { return c_[k]; }
  bool is_zero() const;
  bool in_qi() const { return c_[1].is_zero() && c_[2].is_zero() && c_[3].is_zero(); }
  KNum inv() const;
  // Complex conjugation on Q(i), fixing t.
  KNum conj_i() const;
  // Image under t -> i^branch q^(1/4), evaluated at high precision.
  std::complex<double> embed(int branch = 0) const;
  std::complex<long double> embed_ld(int branch = 0) const;
  std::string str() const;

  KNum& operator+=(const KNum& o);
  KNum& operator-=(const KNum& o);
  KNum& operator*=(const KNum& o) { return *this = *this * o; }
  KNum& operator/=(const KNum& o) { return *this = *this * o.inv(); }

  friend KNum operator+(KNum a, const KNum& b) { return a += b; }
  friend KNum operator-(KNum a, const KNum& b) { return a -= b; }
  friend KNum operator*(const KNum& a, const KNum& b);
  friend KNum operator/(const KNum& a, const KNum& b) { return a * b.inv(); }
  friend KNum operator-(const KNum& a);
  friend bool operator==(const KNum& a, const KNum& b);
  friend bool operator!=(const KNum& a, const KNum& b) { return !(a == b); }

 private:
  long q_ = 0;
  std::array<QI, 4> c_{};
};

inline bool is_zero(const KNum& x) { return x.is_zero(); }

KNum pow(const KNum& x, long e);

// (a, b) with x = a + b sqrt(q); DomainError if x is outside Q(sqrt q).
std::pair<mpq_class, mpq_class> qsqrt_pair(const KNum& x);

// t^4 - q irreducible over Q(i): holds iff q is not a square in Q(i).
bool t4_minus_q_irreducible(long q);

// High-precision a + b sqrt(q) rounded to double.
double qsqrt_to_double(const mpq_class& a, const mpq_class& b, long q);

}  // namespace qmom
