#pragma once

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qmom/ffpoly.hpp"

namespace qmom {

using Cd = std::complex<double>;

enum class LocalKind { A, SReg, SIdentity };

struct EulerProductSpec {
  long q = 5;
  int r = 4;
  int pmax = 6;
  LocalKind kind = LocalKind::A;

  void validate() const;
};

struct QuadratureSpec {
  double rho = 0.1;
  int n = 64;  // points per circle, a power of two
  int threads = 0;

  void validate() const;
};

// A truncated product with an estimate of the neglected factors.
struct EulerValue {
  Cd value;
  double tail = 0;
};

// Number of monic irreducibles of degree k as a double.
double irreducible_count(long q, int k);

// A_p with xi_k, for an irreducible p (deg p >= 1).
Cd a_p_factor(const FqPoly& p, const std::vector<Cd>& xi);
// A_p depends on p only through its degree k.
Cd a_p_factor_deg(long q, int k, const std::vector<Cd>& xi);

// G = prod_{i<=j} (1 - xi_i xi_j)^{-1} prod_{deg p <= pmax} A_p.
EulerValue big_g(long q, const std::vector<Cd>& xi, int pmax);

// prod_{deg p <= pmax} S_p computed from the identity-word local factor, with
// |p|^{-s_k} = |p|^{-1/2} xi_k^{deg p} and |p|^{-s_{r+1}} = 1/|p|.
Cd s_p_identity_product(long q, const std::vector<Cd>& xi, int pmax);

// R^{(3)}(z) = (1 - q z1^2 z2^2 z3^2)^{-1} prod_{i<=j<=3} (1 - z_i z_j)^{-1}.
Cd r_p_3(const Cd& z1, const Cd& z2, const Cd& z3, double q);

// S_p^reg for deg p = k with chi_a(p) = sgn(a)^k, sgn(a) = zeta^2.
Cd s_p_reg_deg(long q, int k, const std::vector<Cd>& xi, const Cd& zeta);
Cd s_p_reg(const FqPoly& p, const std::vector<Cd>& xi, const Cd& zeta);

// prod_{deg p <= pmax} S_p^reg.
EulerValue s_reg_product(long q, const std::vector<Cd>& xi, const Cd& zeta, int pmax);

// G_1 (part 1) or G_2 (part 2) of the n = 2 residue at xi (length r >= 3).
Cd big_g_part(long q, const std::vector<Cd>& xi, const Cd& zeta, int part);

// P(x, y) for r = 3.
Cd p_xy(const Cd& x, const Cd& y);
// Exact coefficients of P(1, y) in y, and of the displayed factorization.
std::vector<mpq_class> p_one_y_expanded();
std::vector<mpq_class> p_one_y_factored();

// P_r(t) as an exact series up to t^order, and its value.
std::vector<mpq_class> p_r_series(int r, int order);
double p_r_value(int r, double t);

struct PredictResult {
  std::vector<int> D;
  std::vector<Cd> value;
  std::vector<double> delta;  // |V(N) - V(N/2)| per D
  double euler_tail = 0;
  bool outside_range = false;
  std::string note;
};

// Q_1(D, q) for each D; the n = 1 term is Q_1 q^D.
PredictResult q1_coefficients(long q, int r, const std::vector<int>& Ds, int pmax, const QuadratureSpec& quad);

struct Q2Result : PredictResult {
  // U[z][d]: the zeta = i^z contribution without zeta^D, a polynomial in D.
  std::array<std::vector<Cd>, 4> per_zeta;
  std::array<std::vector<double>, 4> per_zeta_delta;
  double conj_asymmetry = 0;  // max |Q2 - conj(Q2)| / |Q2| contribution
};

// Q_2(D, q) for each D (r >= 4); the n = 2 term is Q_2 q^{3D/4}.
Q2Result q2_coefficients(long q, int r, const std::vector<int>& Ds, int pmax, const QuadratureSpec& quad);

struct LeadingCoefficient {
  int degree = 0;                 // (r-3)(r+10)/2
  std::array<Cd, 4> per_zeta;     // coefficient of D^degree in U[z]
  double euler_tail = 0;
  Cd at(int D) const;             // sum_z (i^z)^D per_zeta[z]
};

LeadingCoefficient q2_leading_coefficient(long q, int r, int pmax);

// Randomized checks of the sum-to-integral identities; returns the largest
// relative discrepancy seen.
struct IdentityReport {
  int instances = 0;
  double max_rel_error = 0;
};
IdentityReport lemma71_check(int instances, std::uint64_t seed);
IdentityReport mlemma_check(int instances, std::uint64_t seed);

// Coefficient of (x1 x2 x3)^4 in (x1+2)(x2+2)(x3+2) prod_{i<j} (x_i-x_j)^2 (x_i x_j + x_i + x_j)^2.
long triple_integral_exact();
Cd triple_integral_quadrature(double rho, int n);

// det(binom(2r + 1 - 2j, i - 1))_{1 <= i, j <= r-3}.
mpz_class binomial_determinant(int r);

// Least-squares polynomial fit; returns coefficients c_0..c_deg in powers of D
// and the max relative residual over the sample.
struct PolyFit {
  std::vector<Cd> coeffs;
  double rel_residual = 0;
};
PolyFit fit_polynomial(const std::vector<int>& D, const std::vector<Cd>& v, int degree);

}  // namespace qmom
