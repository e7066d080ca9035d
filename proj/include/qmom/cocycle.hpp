#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "qmom/config.hpp"
#include "qmom/exactnum.hpp"
#include "qmom/kacmoody.hpp"

namespace qmom {

struct SingularPoint : DomainError {
  int letter;
  SingularPoint(const std::string& what, int letter_) : DomainError(what), letter(letter_) {}
};

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<KNum> {
  static KNum from_int(const KNum& one, long n) { return KNum::from_int(one.q(), n); }
  static bool zero(const KNum& x) { return x.is_zero(); }
};

template <>
struct FieldTraits<QI> {
  static QI from_int(const QI&, long n) { return QI(n); }
  static bool zero(const QI& x) { return x.is_zero(); }
};

template <class T>
struct FieldTraits<std::complex<T>> {
  static std::complex<T> from_int(const std::complex<T>&, long n) { return std::complex<T>(static_cast<T>(n), 0); }
  static bool zero(const std::complex<T>& x) { return x == std::complex<T>(0); }
};

// Constants attached to a value of q: 1, q, q^(1/2), q^(1/4).
template <class F>
struct Scalars {
  F one, q, sq, q4;

  F num(long n) const { return FieldTraits<F>::from_int(one, n); }
  F half() const { return one / num(2); }
  // Same constants for 1/q.
  Scalars inverted() const { return {one, one / q, one / sq, one / q4}; }
  // Constants for q^k.
  Scalars power(int k) const {
    Scalars r{one, one, one, one};
    for (int i = 0; i < k; ++i) {
      r.q = r.q * q;
      r.sq = r.sq * sq;
      r.q4 = r.q4 * q4;
    }
    return r;
  }
};

inline Scalars<KNum> k_scalars(long q) {
  KNum t = KNum::t(q);
  return {KNum::from_int(q, 1), KNum::from_int(q, q), t * t, t};
}

template <class T = double>
Scalars<std::complex<T>> c_scalars(T q) {
  using C = std::complex<T>;
  return {C(1), C(q), C(std::sqrt(q)), C(std::sqrt(std::sqrt(q)))};
}

// Q(i) with q = t^4 for a rational t: identities in t can be checked at
// many rational points.
inline Scalars<QI> qi_scalars(const mpq_class& t) {
  QI tt(t);
  return {QI(1), tt * tt * tt * tt, tt * tt, tt};
}

template <class F>
using Mat3 = std::array<std::array<F, 3>, 3>;

template <class F>
Mat3<F> mat_diag(const F& a, const F& b, const F& c, const Scalars<F>& s) {
  F z = s.num(0);
  return {{{a, z, z}, {z, b, z}, {z, z, c}}};
}

template <class F>
Mat3<F> mat_identity(const Scalars<F>& s) {
  return mat_diag(s.one, s.one, s.one, s);
}

template <class F>
Mat3<F> mat_mul(const Mat3<F>& a, const Mat3<F>& b) {
  Mat3<F> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      F acc = a[i][0] * b[0][j];
      acc = acc + a[i][1] * b[1][j];
      acc = acc + a[i][2] * b[2][j];
      c[i][j] = acc;
    }
  return c;
}

template <class F>
F mat_det(const Mat3<F>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class F>
Mat3<F> mat_inv(const Mat3<F>& m) {
  F det = mat_det(m);
  if (FieldTraits<F>::zero(det)) throw DomainError("singular 3x3 matrix");
  Mat3<F> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      r[i][j] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]) / det;
    }
  return r;
}

template <class F>
std::array<F, 3> row_times(const std::array<F, 3>& v, const Mat3<F>& m) {
  std::array<F, 3> out;
  for (int j = 0; j < 3; ++j) out[j] = v[0] * m[0][j] + v[1] * m[1][j] + v[2] * m[2][j];
  return out;
}

template <class F>
F dot(const std::array<F, 3>& a, const std::array<F, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class F>
Mat3<F> U_matrix(const Scalars<F>& s) {
  F h = s.half(), z = s.num(0), o = s.one;
  return {{{h, o, h}, {h, z, z - h}, {h, z - o, h}}};
}

template <class F>
Mat3<F> B_matrix(const Scalars<F>& s) {
  F h = s.half(), z = s.num(0), o = s.one;
  return {{{h, h, z}, {h, z - h, z}, {z - h, h, o}}};
}

template <class F>
Mat3<F> B_inverse(const Scalars<F>& s) {
  F z = s.num(0), o = s.one;
  return {{{o, o, z}, {o, z - o, z}, {z, o, o}}};
}

template <class F>
Mat3<F> C_matrix(const Scalars<F>& s) {
  F z = s.num(0), o = s.one;
  return {{{z, o, o}, {o, z, z}, {z, z - o, o}}};
}

// M(u, q) = diag(-(1 - qu)/(qu(1 - u)), 1/(sqrt(q) u), (1 + qu)/(qu(1 + u)))
template <class F>
Mat3<F> base_matrix(const F& u, const Scalars<F>& s, int letter = 0) {
  const F& o = s.one;
  F qu = s.q * u;
  F den1 = qu * (o - u), den3 = qu * (o + u), den2 = s.sq * u;
  if (FieldTraits<F>::zero(den1) || FieldTraits<F>::zero(den3) || FieldTraits<F>::zero(den2))
    throw SingularPoint("local matrix singular at letter " + std::to_string(letter), letter);
  return mat_diag((qu - o) / den1, o / den2, (o + qu) / den3, s);
}

template <class F>
Mat3<F> letter_matrix(int i, const std::vector<F>& z, const Scalars<F>& s) {
  int r = static_cast<int>(z.size()) - 1;
  if (i < 1 || i > r + 1) throw DomainError("letter out of range");
  if (i <= r) return base_matrix(z[i - 1], s, i);
  Mat3<F> U = U_matrix(s);
  return mat_mul(mat_mul(U, base_matrix(z[r], s, i)), U);
}

template <class F>
std::vector<F> act_letter(int i, const std::vector<F>& z, const Scalars<F>& s) {
  int r = static_cast<int>(z.size()) - 1;
  if (i < 1 || i > r + 1) throw DomainError("letter out of range");
  if (FieldTraits<F>::zero(z[i - 1])) throw SingularPoint("action singular at letter " + std::to_string(i), i);
  std::vector<F> out = z;
  out[i - 1] = s.one / (s.q * z[i - 1]);
  if (i <= r) {
    out[r] = s.sq * z[i - 1] * z[r];
  } else {
    for (int j = 0; j < r; ++j) out[j] = s.sq * z[r] * z[j];
  }
  return out;
}

// Group action of w = w_{letters[0]} w_{letters[1]} ...; rightmost first.
template <class F>
std::vector<F> act_word(const std::vector<int>& word, std::vector<F> z, const Scalars<F>& s) {
  for (size_t m = word.size(); m-- > 0;) z = act_letter(word[m], z, s);
  return z;
}

// M_w(z; q) from M_{w w'}(z) = M_{w'}(z) M_w(w' z).
template <class F>
Mat3<F> cocycle(const std::vector<int>& word, const std::vector<F>& z, const Scalars<F>& s) {
  Mat3<F> M = mat_identity(s);
  std::vector<F> cur = z;
  for (size_t m = word.size(); m-- > 0;) {
    M = mat_mul(M, letter_matrix(word[m], cur, s));
    cur = act_letter(word[m], cur, s);
  }
  return M;
}

// M_w(q z; 1/q)
template <class F>
Mat3<F> cocycle_bar(const std::vector<int>& word, const std::vector<F>& z, const Scalars<F>& s) {
  std::vector<F> qz = z;
  for (auto& v : qz) v = s.q * v;
  return cocycle(word, qz, s.inverted());
}

// q^{-(n+1)/(2n)} for the supported levels n = 1, 2.
template <class F>
F residue_power(int n, const Scalars<F>& s) {
  if (n == 1) return s.one / s.q;
  if (n == 2) return s.one / (s.q4 * s.q4 * s.q4);
  throw DomainError("substitution point for level " + std::to_string(n) + " lies outside K");
}

// Point z_k = q^{-1/2} (k <= r), z_{r+1} = zeta^{-1} q^{-(n+1)/(2n)}.
template <class F>
std::vector<F> gamma_point(int r, int n, const F& zeta, const Scalars<F>& s) {
  std::vector<F> z(r + 1, s.one / s.sq);
  z[r] = residue_power(n, s) / zeta;
  return z;
}

// Gamma_w(a2, a; zeta), signs given as +-1.
template <class F>
F gamma_w_at(const std::vector<int>& word, const std::vector<F>& z, int sgn_a2, int sgn_a, const Scalars<F>& s) {
  F h = s.half();
  F ep2 = s.num(1 + sgn_a2) * h, em2 = s.num(1 - sgn_a2) * h;
  F ep = s.num(1 + sgn_a) * h, em = s.num(1 - sgn_a) * h;
  Mat3<F> Mb = cocycle_bar(word, z, s);
  Mat3<F> X = mat_mul(mat_mul(B_inverse(s), Mb), B_matrix(s));
  std::array<F, 3> left = row_times<F>({ep2, em2, s.num(0)}, X);
  F val = dot<F>(left, {ep, em, ep});
  long two_l = 1L << word.size();
  return s.num(two_l) * val;
}

template <class F>
F gamma_w(const std::vector<int>& word, const Root& alpha, int sgn_a2, int sgn_a, const F& zeta, const Scalars<F>& s) {
  int r = root_rank(alpha);
  return gamma_w_at(word, gamma_point(r, level(alpha), zeta, s), sgn_a2, sgn_a, s);
}

// (1,1,0) Mbar_{w1 w2 w3 w4}(q^{-1/2}, q^{-1/2}, q^{-1/2}, q^{-3/4} zeta^{-1}; q) t(1, sgn, 1)
template <class F>
F gamma_table_value(const F& zeta, int sgn, const Scalars<F>& s) {
  std::vector<F> z = gamma_point(3, 2, zeta, s);
  Mat3<F> Mb = cocycle_bar<F>({1, 2, 3, 4}, z, s);
  std::array<F, 3> left = row_times<F>({s.one, s.one, s.num(0)}, Mb);
  return dot<F>(left, {s.one, s.num(sgn), s.one});
}

// (L1, L2, L3) = (1/2, chi, 1/2) M_w(z)^{-1} C
template <class F>
std::array<F, 3> local_lwp(const std::vector<int>& word, const std::vector<F>& z, const F& chi, const Scalars<F>& s) {
  Mat3<F> Minv = mat_inv(cocycle(word, z, s));
  std::array<F, 3> v = row_times<F>({s.half(), chi, s.half()}, Minv);
  return row_times<F>(v, C_matrix(s));
}

// S_p^w for the point z = (|p|^{-s_1}, ..., |p|^{-s_{r+1}}), s for q = |p|.
template <class F>
F s_p_w(const std::vector<int>& word, const std::vector<F>& z, const F& chi, const Scalars<F>& s) {
  int r = static_cast<int>(z.size()) - 1;
  std::array<F, 3> L = local_lwp(word, z, chi, s);
  F pm = s.one, pp = s.one;
  for (int k = 0; k < r; ++k) {
    pm = pm * (s.one - z[k]);
    pp = pp * (s.one + z[k]);
  }
  F two = s.num(2);
  return (s.one - s.one / s.q) * (L[0] * z[r] + (L[1] + L[2]) / (two * pm) + (L[2] - L[1]) / (two * pp));
}

// Point z_k = xi_k^2 / sqrt(q), z_{r+1} = 1/(q^{3/4} zeta xi_1 xi_2 xi_3 prod_J xi_j^2).
template <class F>
std::vector<F> phi2_point(const std::vector<F>& xi, const F& zeta, const std::vector<int>& J, const Scalars<F>& s) {
  int r = static_cast<int>(xi.size());
  std::vector<F> z(r + 1);
  for (int k = 0; k < r; ++k) z[k] = xi[k] * xi[k] / s.sq;
  F den = s.q4 * s.q4 * s.q4 * zeta * xi[0] * xi[1] * xi[2];
  for (int j : J) den = den * xi[j - 1] * xi[j - 1];
  z[r] = s.one / den;
  return z;
}

// Closed forms for the Phi_2 root alpha' = alpha_1+alpha_2+alpha_3+2alpha_{r+1}
// at z_k = q^{-1/2} xi_k^2, z_{r+1} = 1/(q^{3/4} zeta xi_1 xi_2 xi_3).
namespace closed {

template <class F>
std::array<F, 3> d_coeffs(const F& x1, const F& x2, const F& x3, const F& zeta, const Scalars<F>& s) {
  const F& o = s.one;
  F q34 = s.q4 * s.q4 * s.q4;
  F a1 = x1 / (zeta * q34 * x2 * x3), a2 = x2 / (zeta * q34 * x1 * x3), a3 = x3 / (zeta * q34 * x1 * x2);
  F b1 = zeta * x2 * x3 / (s.q4 * x1), b2 = zeta * x1 * x3 / (s.q4 * x2), b3 = zeta * x1 * x2 / (s.q4 * x3);
  F d1 = (o - a1) * (o - a2) * (o - a3) / ((o - b1) * (o - b2) * (o - b3));
  F d3 = (o + a1) * (o + a2) * (o + a3) / ((o + b1) * (o + b2) * (o + b3));
  F d2 = zeta / (q34 * x1 * x2 * x3);
  return {d1, d2, d3};
}

template <class F>
std::array<F, 3> e_coeffs(const F& x1, const F& x2, const F& x3, const F& zeta, const Scalars<F>& s) {
  const F& o = s.one;
  F q34 = s.q4 * s.q4 * s.q4;
  F p = x1 * x2 * x3;
  F u = o / (zeta * q34 * p), v = zeta * p / s.q4;
  return {(o - u) / (o - v), o / (zeta * s.q4 * p), (o + u) / (o + v)};
}

template <class F>
std::array<F, 3> lwp(const F& x1, const F& x2, const F& x3, const F& zeta, const F& chi, const Scalars<F>& s) {
  auto d = d_coeffs(x1, x2, x3, zeta, s);
  auto e = e_coeffs(x1, x2, x3, zeta, s);
  F two = s.num(2);
  F cp = d[0] + d[2] + two * chi * d[1], cm = d[0] + d[2] - two * chi * d[1];
  F q4 = s.num(4), q8 = s.num(8);
  F L1 = e[0] * cp / q4 - e[2] * cm / q4;
  F plus = e[0] * cp / q8 + e[2] * cm / q8 + e[1] * (d[0] - d[2]) / q4;   // (L2 + L3)/2
  F minus = e[0] * cp / q8 + e[2] * cm / q8 - e[1] * (d[0] - d[2]) / q4;  // (L3 - L2)/2
  return {L1, plus - minus, plus + minus};
}

// S_p^{w_alpha'} with xi of length r.
template <class F>
F s_p_wprime(const std::vector<F>& xi, const F& zeta, const F& chi, const Scalars<F>& s) {
  const F& o = s.one;
  auto L = lwp(xi[0], xi[1], xi[2], zeta, chi, s);
  F pm = o, pp = o;
  for (const F& x : xi) {
    F zk = x * x / s.sq;
    pm = pm * (o - zk);
    pp = pp * (o + zk);
  }
  F two = s.num(2);
  F z_last = o / (s.q4 * s.q4 * s.q4 * zeta * xi[0] * xi[1] * xi[2]);
  return (o - o / s.q) * (L[0] * z_last + (L[1] + L[2]) / (two * pm) + (L[2] - L[1]) / (two * pp));
}

template <class F>
F phi(const F& z1, const F& z2, const F& z3, const F& z4, const Scalars<F>& s) {
  const F& o = s.one;
  F q32 = s.q * s.sq;
  F num = (o - s.sq * z1 * z4) * (o - s.sq * z2 * z4) * (o - s.sq * z3 * z4) * (o - s.q * z4 * z4);
  F den = (o - q32 * z1 * z4) * (o - q32 * z2 * z4) * (o - q32 * z3 * z4) * (o - s.q * s.q * z4 * z4);
  return num / den;
}

template <class F>
F psi(const F& z1, const F& z2, const F& z3, const F& z4, const Scalars<F>& s) {
  F q32 = s.q * s.sq;
  return (s.num(0) - (s.one - q32 * z4)) * phi(z1, z2, z3, z4, s) / (s.sq - s.q * z4);
}

// Mbar_{w_1 w_2 w_3 w_{r+1}}(z1, z2, z3, z4; q)
template <class F>
Mat3<F> mbar_wprime(const F& z1, const F& z2, const F& z3, const F& z4, const Scalars<F>& s) {
  const F& o = s.one;
  F zero = s.num(0);
  F q32 = s.q * s.sq;
  F pre = o / (s.num(2) * q32 * z1 * z2 * z3 * z4 * z4 * z4 * z4);
  F side = zero - s.num(2) / q32 * (o - s.q * z4 * z4) / (o - s.q * s.q * z4 * z4);
  F mid = zero - s.num(2) * z4 / q32 * (s.q - o) / (o - s.q * s.q * z4 * z4);
  F n1 = zero - z1, n2 = zero - z2, n3 = zero - z3, n4 = zero - z4;
  Mat3<F> m = {{{psi(z1, z2, z3, z4, s), side, psi(z1, z2, z3, n4, s)},
                {phi(z1, z2, z3, z4, s), mid, zero - phi(n1, n2, n3, z4, s)},
                {zero - psi(n1, n2, n3, n4, s), side, zero - psi(n1, n2, n3, z4, s)}}};
  for (auto& row : m)
    for (auto& v : row) v = pre * v;
  return m;
}

}  // namespace closed

// The Gamma-table value for zeta = i^zeta_power (sgn = zeta^2) is a
// polynomial in t = q^{1/4}; its coefficients t^0..t^8 are recovered by
// exact interpolation over Q(i) at rational t, with extra points checked.
std::array<QI, 9> gamma_table_polynomial(int zeta_power);

// Exact K-valued Gamma-table entry for zeta = i^zeta_power.
KNum gamma_table_exact(long q, int zeta_power);

}  // namespace qmom
