#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "qmom/exactnum.hpp"
#include "qmom/ffpoly.hpp"

namespace qmom {

// Computes L(u, chi_d) = sum_m chi_d(m) u^deg(m) for d of a fixed degree D
// using a shared smallest-factor sieve. Reusable across many d; not
// thread-safe (one engine per worker).
class LEngine {
 public:
  // With use_fe, monic d of degree D is handled by computing only the low
  // half of the coefficients and completing by the functional equation.
  LEngine(int q, int D, bool use_fe = true);

  int q() const { return q_; }
  int D() const { return D_; }
  bool uses_functional_equation() const { return use_fe_; }

  // d: D+1 coefficients, d[D] != 0. Writes a_0..a_{D-1}. The functional
  // equation path requires d monic and squarefree.
  void coeffs(const int* d, std::int64_t* out);

 private:
  void fill_chi(const int* d, int max_deg);
  int q_, D_;
  bool use_fe_;
  int sieve_deg_;
  const PrimeField* F_;
  std::shared_ptr<const FactorSieve> sieve_;
  std::vector<signed char> chi_;
  std::vector<int> abuf_, bbuf_;
};

// L(u, chi_d) as its coefficient list (degree < deg d). d must be
// squarefree and non-constant.
std::vector<std::int64_t> l_polynomial(const FqPoly& d);

// L(1/2, chi_d) as an element of K_q, including constant d.
KNum l_at_half(const FqPoly& d);

// L(s, chi_d) for complex s, including constant d.
std::complex<double> l_at(std::complex<double> s, const FqPoly& d);

// gamma_q(s, d): factor with L(s) = gamma |d|^(1/2 - s) L(1 - s).
std::complex<double> gamma_factor(std::complex<double> s, const FqPoly& d);

// L(s) - gamma_q(s, d) |d|^(1/2 - s) L(1 - s); vanishes up to rounding.
std::complex<double> functional_equation_residual(const FqPoly& d, std::complex<double> s);

}  // namespace qmom
