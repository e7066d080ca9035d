#include "qmom/lfunc.hpp"

#include <algorithm>
#include <cmath>

namespace qmom {

LEngine::LEngine(int q, int D, bool use_fe) : q_(q), D_(D), use_fe_(use_fe) {
  require_admissible_q(q);
  if (D < 1) throw DomainError("LEngine needs positive degree");
  F_ = &prime_field(q);
  if (use_fe_)
    sieve_deg_ = (D % 2) ? (D - 1) / 2 : (D - 2) / 2;
  else
    sieve_deg_ = D - 1;
  sieve_ = shared_sieve(q, std::max(sieve_deg_, 1));
  chi_.assign(sieve_->offset(sieve_deg_ + 1), 0);
  abuf_.assign(D + 2, 0);
  bbuf_.assign(D + 2, 0);
}

void LEngine::fill_chi(const int* d, int max_deg) {
  const FactorSieve& S = *sieve_;
  chi_[0] = 1;
  std::uint32_t end = S.offset(max_deg + 1);
  for (int n = 1; n <= max_deg; ++n) {
    std::uint32_t lo = S.offset(n), hi = (n == max_deg) ? end : S.offset(n + 1);
    for (std::uint32_t id = lo; id < hi; ++id) {
      std::uint32_t sm = S.smallest_factor(id);
      if (sm != id) {
        chi_[id] = static_cast<signed char>(chi_[sm] * chi_[S.cofactor(id)]);
        continue;
      }
      std::copy(d, d + D_ + 1, abuf_.begin());
      std::uint32_t idx = id - lo;
      for (int i = 0; i < n; ++i) {
        bbuf_[i] = static_cast<int>(idx % q_);
        idx /= q_;
      }
      bbuf_[n] = 1;
      chi_[id] = static_cast<signed char>(symbol_kernel(*F_, abuf_.data(), D_, bbuf_.data(), n));
    }
  }
}

void LEngine::coeffs(const int* d, std::int64_t* out) {
  const FactorSieve& S = *sieve_;
  int g = sieve_deg_;
  fill_chi(d, g);
  std::vector<std::int64_t> low(g + 1, 0);
  for (int n = 0; n <= g; ++n) {
    std::int64_t s = 0;
    std::uint32_t lo = S.offset(n), hi = S.offset(n + 1);
    for (std::uint32_t id = lo; id < hi; ++id) s += chi_[id];
    low[n] = s;
  }
  if (!use_fe_) {
    for (int n = 0; n < D_; ++n) out[n] = low[n];
    return;
  }
  if (D_ % 2) {
    // degree 2g, a_{2g-n} = q^{g-n} a_n
    std::int64_t qp = 1;
    for (int n = g; n >= 0; --n) {
      out[n] = low[n];
      out[2 * g - n] = qp * low[n];
      qp *= q_;
    }
    return;
  }
  // L = (1 - u) P, P of degree 2g with the same symmetry, P_n = sum_{k<=n} a_k
  std::vector<std::int64_t> P(2 * g + 1);
  std::int64_t acc = 0, qp = 1;
  for (int n = 0; n <= g; ++n) {
    acc += low[n];
    P[n] = acc;
  }
  for (int n = g; n >= 0; --n) {
    P[2 * g - n] = qp * P[n];
    qp *= q_;
  }
  out[0] = P[0];
  for (int n = 1; n <= 2 * g; ++n) out[n] = P[n] - P[n - 1];
  out[2 * g + 1] = -P[2 * g];
}

std::vector<std::int64_t> l_polynomial(const FqPoly& d) {
  if (d.is_zero() || d.deg() < 1) throw DomainError("l_polynomial needs non-constant d");
  if (!is_squarefree(d)) throw DomainError("l_polynomial needs squarefree d");
  LEngine eng(d.q(), d.deg(), d.is_monic());
  std::vector<std::int64_t> out(d.deg());
  eng.coeffs(d.coeffs().data(), out.data());
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

KNum l_at_half(const FqPoly& d) {
  long q = d.q();
  if (d.is_zero()) throw DomainError("l_at_half of zero");
  if (d.deg() == 0) {
    KNum den = KNum::from_int(q, 1) - KNum::from_int(q, sgn(d)) * KNum::t(q) * KNum::t(q);
    return den.inv();
  }
  auto a = l_polynomial(d);
  // q^{-n/2}: n even -> 1/q^{n/2}; n odd -> t^2 / q^{(n+1)/2}
  mpq_class even = 0, odd = 0;
  for (size_t n = 0; n < a.size(); ++n) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), q, (n + 1) / 2);
    mpq_class term(mpz_class(static_cast<long>(a[n])), den);
    term.canonicalize();
    if (n % 2) odd += term;
    else even += term;
  }
  KNum r(q, QI(even));
  KNum t2 = KNum::t(q) * KNum::t(q);
  return r + KNum(q, QI(odd)) * t2;
}

std::complex<double> l_at(std::complex<double> s, const FqPoly& d) {
  double q = d.q();
  std::complex<double> u = std::exp(-s * std::log(q));
  if (d.deg() == 0) return 1.0 / (1.0 - static_cast<double>(sgn(d)) * q * u);
  auto a = l_polynomial(d);
  std::complex<double> v = 0;
  for (size_t n = a.size(); n-- > 0;) v = v * u + static_cast<double>(a[n]);
  return v;
}

std::complex<double> gamma_factor(std::complex<double> s, const FqPoly& d) {
  double q = d.q();
  double sg = sgn(d);
  bool even = d.deg() % 2 == 0;
  auto qpow = [&](std::complex<double> e) { return std::exp(e * std::log(q)); };
  std::complex<double> g = qpow((even ? 2.0 : 1.0) * (s - 0.5));
  if (even) g *= (1.0 - sg * qpow(-s)) / (1.0 - sg * qpow(s - 1.0));
  return g;
}

std::complex<double> functional_equation_residual(const FqPoly& d, std::complex<double> s) {
  if (d.deg() < 1) throw DomainError("functional_equation_residual needs non-constant d");
  std::complex<double> absd = std::pow(static_cast<double>(d.q()), d.deg());
  return l_at(s, d) - gamma_factor(s, d) * std::pow(absd, 0.5 - s) * l_at(1.0 - s, d);
}

}  // namespace qmom
