#include "qmom/exactnum.hpp"

#include <sstream>

namespace qmom {

QI& QI::operator*=(const QI& o) {
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

QI QI::inv() const {
  mpq_class n = norm();
  if (sgn(n) == 0) throw DomainError("division by zero in Q(i)");
  return QI(re_ / n, -im_ / n);
}

std::string QI::str() const {
  std::ostringstream os;
  if (sgn(im_) == 0) {
    os << re_;
  } else if (sgn(re_) == 0) {
    os << im_ << "i";
  } else {
    os << "(" << re_ << (sgn(im_) > 0 ? "+" : "") << im_ << "i)";
  }
  return os.str();
}

static long merge_q(long a, long b) {
  if (a && b && a != b) throw DomainError("mixing elements of different fields K_q");
  return a ? a : b;
}

KNum KNum::t(long q) {
  KNum r(q);
  r.c_[1] = QI(1);
  return r;
}

KNum KNum::zeta(long q, int k) {
  k = ((k % 4) + 4) % 4;
  static const QI vals[4] = {QI(1), QI(0, 1), QI(-1), QI(0, -1)};
  return KNum(q, vals[k]);
}

bool KNum::is_zero() const {
  for (const auto& c : c_)
    if (!c.is_zero()) return false;
  return true;
}

KNum& KNum::operator+=(const KNum& o) {
  q_ = merge_q(q_, o.q_);
  for (int k = 0; k < 4; ++k) c_[k] += o.c_[k];
  return *this;
}

KNum& KNum::operator-=(const KNum& o) {
  q_ = merge_q(q_, o.q_);
  for (int k = 0; k < 4; ++k) c_[k] -= o.c_[k];
  return *this;
}

KNum operator-(const KNum& a) {
  KNum r(a.q_);
  for (int k = 0; k < 4; ++k) r.c_[k] = -a.c_[k];
  return r;
}

bool operator==(const KNum& a, const KNum& b) {
  merge_q(a.q_, b.q_);
  return a.c_ == b.c_;
}

KNum operator*(const KNum& a, const KNum& b) {
  long q = merge_q(a.q_, b.q_);
  KNum r(q);
  if (a.in_qi()) {
    for (int k = 0; k < 4; ++k)
      if (!b.c_[k].is_zero()) r.c_[k] = a.c_[0] * b.c_[k];
    return r;
  }
  if (b.in_qi()) {
    for (int k = 0; k < 4; ++k)
      if (!a.c_[k].is_zero()) r.c_[k] = a.c_[k] * b.c_[0];
    return r;
  }
  std::array<QI, 7> w{};
  for (int i = 0; i < 4; ++i) {
    if (a.c_[i].is_zero()) continue;
    for (int j = 0; j < 4; ++j)
      if (!b.c_[j].is_zero()) w[i + j] += a.c_[i] * b.c_[j];
  }
  QI qq(q);
  for (int k = 0; k < 4; ++k) r.c_[k] = w[k];
  for (int k = 4; k < 7; ++k)
    if (!w[k].is_zero()) r.c_[k - 4] += qq * w[k];
  return r;
}

namespace {

// c + d s in Q(i)(s), s^2 = q.
struct Quad {
  QI c, d;
};

Quad qmul(const Quad& x, const Quad& y, const QI& q) { return {x.c * y.c + q * x.d * y.d, x.c * y.d + x.d * y.c}; }

Quad qinv(const Quad& x, const QI& q) {
  QI n = x.c * x.c - q * x.d * x.d;
  if (n.is_zero()) throw DomainError("division by zero in K");
  QI ni = n.inv();
  return {x.c * ni, -x.d * ni};
}

}  // namespace

KNum KNum::inv() const {
  if (is_zero()) throw DomainError("division by zero in K");
  if (in_qi()) return KNum(q_, c_[0].inv());
  if (q_ == 0) throw DomainError("element with t-part but no q");
  QI q(q_);
  Quad A{c_[0], c_[2]}, B{c_[1], c_[3]};
  // (A + B t)(A - B t) = A^2 - s B^2
  Quad A2 = qmul(A, A, q), B2 = qmul(B, B, q);
  Quad sB2{q * B2.d, B2.c};
  Quad N{A2.c - sB2.c, A2.d - sB2.d};
  Quad Ni = qinv(N, q);
  Quad X = qmul(A, Ni, q), Y = qmul(B, Ni, q);
  // (A - B t) Ni = X - Y t
  KNum r(q_);
  r.c_[0] = X.c;
  r.c_[2] = X.d;
  r.c_[1] = -Y.c;
  r.c_[3] = -Y.d;
  return r;
}

KNum KNum::conj_i() const {
  KNum r(q_);
  for (int k = 0; k < 4; ++k) r.c_[k] = c_[k].conj();
  return r;
}

KNum pow(const KNum& x, long e) {
  if (e < 0) return pow(x.inv(), -e);
  KNum r = KNum::from_int(x.q(), 1), b = x;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

static constexpr int kEmbedBits = 256;

std::complex<long double> KNum::embed_ld(int branch) const {
  mpf_class re(0, kEmbedBits), im(0, kEmbedBits);
  mpf_class t(q_, kEmbedBits);
  t = sqrt(t);
  t = sqrt(t);
  int b = ((branch % 4) + 4) % 4;
  mpf_class tp(1, kEmbedBits);
  for (int k = 0; k < 4; ++k) {
    // c_k (i^b t)^k = c_k t^k i^{bk}
    mpf_class cr(c_[k].re(), kEmbedBits), ci(c_[k].im(), kEmbedBits);
    mpf_class xr = cr * tp, xi = ci * tp;
    switch ((b * k) % 4) {
      case 0: re += xr; im += xi; break;
      case 1: re -= xi; im += xr; break;
      case 2: re -= xr; im -= xi; break;
      case 3: re += xi; im -= xr; break;
    }
    tp *= t;
  }
  auto to_ld = [](const mpf_class& v) {
    double hi = v.get_d();
    mpf_class rest = v - mpf_class(hi, kEmbedBits);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
  };
  return {to_ld(re), to_ld(im)};
}

std::complex<double> KNum::embed(int branch) const {
  auto z = embed_ld(branch);
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

std::string KNum::str() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k < 4; ++k) {
    if (c_[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[k].str();
    if (k == 1) os << "*t";
    if (k > 1) os << "*t^" << k;
  }
  if (first) os << "0";
  return os.str();
}

std::pair<mpq_class, mpq_class> qsqrt_pair(const KNum& x) {
  for (int k = 0; k < 4; ++k)
    if (sgn(x.coeff(k).im()) != 0) throw DomainError("element not in Q(sqrt q): imaginary part");
  if (sgn(x.coeff(1).re()) != 0 || sgn(x.coeff(3).re()) != 0)
    throw DomainError("element not in Q(sqrt q): odd powers of q^(1/4)");
  return {x.coeff(0).re(), x.coeff(2).re()};
}

bool t4_minus_q_irreducible(long q) {
  // A positive integer is a square in Q(i) iff it is a perfect square.
  if (q <= 0) throw DomainError("q must be positive");
  mpz_class z(q), s;
  mpz_sqrt(s.get_mpz_t(), z.get_mpz_t());
  return s * s != z;
}

double qsqrt_to_double(const mpq_class& a, const mpq_class& b, long q) {
  mpf_class s(q, kEmbedBits);
  s = sqrt(s);
  mpf_class v = mpf_class(a, kEmbedBits) + mpf_class(b, kEmbedBits) * s;
  return v.get_d();
}

}  // namespace qmom
