#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qmom/config.hpp"

namespace qmom {

// Arithmetic tables for F_q, q prime = 1 mod 4.
class PrimeField {
 public:
  explicit PrimeField(int q);

  int q() const { return q_; }
  int add(int a, int b) const { int s = a + b; return s >= q_ ? s - q_ : s; }
  int sub(int a, int b) const { int s = a - b; return s < 0 ? s + q_ : s; }
  int neg(int a) const { return a ? q_ - a : 0; }
  int mul(int a, int b) const {
    return mul_.empty() ? static_cast<int>(static_cast<long long>(a) * b % q_) : mul_[a * q_ + b];
  }
  int inv(int a) const { return inv_[a]; }
  // Legendre symbol of a mod q (0 for a = 0).
  int legendre(int a) const { return chi_[a]; }
  // Smallest quadratic non-residue.
  int theta0() const { return theta0_; }
  int reduce(long long a) const { long long r = a % q_; return static_cast<int>(r < 0 ? r + q_ : r); }

 private:
  int q_;
  int theta0_;
  std::vector<std::uint16_t> mul_;  // only for small q
  std::vector<int> inv_;
  std::vector<signed char> chi_;
};

// Cached, validated field tables.
const PrimeField& prime_field(int q);

// Polynomial over F_q, coefficients little-endian, no trailing zeros.
class FqPoly {
 public:
  FqPoly() = default;
  FqPoly(int q, std::vector<int> coeffs);

  static FqPoly constant(int q, int c);
  static FqPoly x(int q);
  // Monic polynomial of degree deg whose lower coefficients are the base-q
  // digits of idx.
  static FqPoly monic_from_index(int q, int deg, std::uint64_t idx);

  int q() const { return q_; }
  int deg() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  int lead() const { return c_.empty() ? 0 : c_.back(); }
  int operator[](int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : 0; }
  const std::vector<int>& coeffs() const { return c_; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  std::uint64_t monic_index() const;
  FqPoly monic() const;
  FqPoly derivative() const;
  int eval(int x) const;
  std::string str() const;

  friend bool operator==(const FqPoly& a, const FqPoly& b) { return a.q_ == b.q_ && a.c_ == b.c_; }
  friend FqPoly operator+(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator-(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator*(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator%(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator/(const FqPoly& a, const FqPoly& b);

 private:
  void trim();
  int q_ = 0;
  std::vector<int> c_;
};

void divmod(const FqPoly& a, const FqPoly& b, FqPoly& quot, FqPoly& rem);
FqPoly gcd(FqPoly a, FqPoly b);  // monic, or zero if both are zero
FqPoly powmod(const FqPoly& base, std::uint64_t e, const FqPoly& mod);

// Leading coefficient's Legendre symbol.
int sgn(const FqPoly& d);
// Jacobi symbol (d/m) for m monic, computed by reciprocity.
int quadratic_symbol(const FqPoly& d, const FqPoly& m);
int moebius(const FqPoly& h);
bool is_squarefree(const FqPoly& h);
bool is_irreducible(const FqPoly& h);

// Symbol kernel on raw buffers. b must be monic (b[db] == 1). Both buffers
// are clobbered.
int symbol_kernel(const PrimeField& F, int* a, int da, int* b, int db);

// gcd(d, d') == 1 on a raw coefficient buffer of degree deg >= 1.
bool squarefree_kernel(const PrimeField& F, const int* d, int deg);

enum class MonicFilter { All, Squarefree, Irreducible };

// Lexicographic order on the coefficient vector read from the constant term
// upward (equivalently increasing monic index).
std::vector<FqPoly> enumerate_monic(int q, int deg, MonicFilter f);
void for_each_monic(int q, int deg, const std::function<void(const FqPoly&)>& fn);

// Smallest-factor sieve over all monic polynomials of degree <= max_deg.
// An id encodes (deg, idx) as offset(deg) + idx.
class FactorSieve {
 public:
  FactorSieve(int q, int max_deg, std::uint64_t memory_budget = 1ULL << 31);

  int q() const { return q_; }
  int max_deg() const { return max_deg_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(small_.size()); }
  std::uint32_t offset(int deg) const { return offset_[deg]; }
  int deg_of(std::uint32_t id) const;
  std::uint32_t smallest_factor(std::uint32_t id) const { return small_[id]; }
  std::uint32_t cofactor(std::uint32_t id) const { return cof_[id]; }
  bool is_irreducible(std::uint32_t id) const { return id != 0 && small_[id] == id; }
  const std::vector<std::uint32_t>& irreducibles() const { return irred_; }
  std::uint64_t count_irreducible(int deg) const { return irred_count_[deg]; }
  FqPoly poly(std::uint32_t id) const;
  std::uint32_t id_of(const FqPoly& m) const;
  std::vector<FqPoly> factor(std::uint32_t id) const;

 private:
  int q_, max_deg_;
  std::vector<std::uint32_t> offset_;
  std::vector<std::uint32_t> small_, cof_;
  std::vector<std::uint32_t> irred_;
  std::vector<std::uint64_t> irred_count_;
};

// Shared sieve cache keyed by (q, max_deg); a larger cached sieve is reused.
std::shared_ptr<const FactorSieve> shared_sieve(int q, int max_deg);

// Number of monic irreducibles of degree k over F_q by the Moebius formula.
std::uint64_t count_irreducible_formula(long q, int k);

std::uint64_t ipow_u64(std::uint64_t b, int e);

}  // namespace qmom
