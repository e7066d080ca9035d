#include "qmom/ffpoly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace qmom {

PrimeField::PrimeField(int q) : q_(q) {
  require_admissible_q(q);
  if (q <= 2048) {
    mul_.resize(static_cast<size_t>(q) * q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) mul_[a * q + b] = static_cast<std::uint16_t>(a * b % q);
  }
  inv_.assign(q, 0);
  for (int a = 1; a < q; ++a) {
    // Fermat: a^(q-2)
    long long r = 1, b = a;
    for (int e = q - 2; e; e >>= 1, b = b * b % q)
      if (e & 1) r = r * b % q;
    inv_[a] = static_cast<int>(r);
  }
  chi_.assign(q, -1);
  chi_[0] = 0;
  for (long long a = 1; a < q; ++a) chi_[a * a % q] = 1;
  theta0_ = 0;
  for (int a = 2; a < q; ++a)
    if (chi_[a] == -1) { theta0_ = a; break; }
}

const PrimeField& prime_field(int q) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PrimeField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, std::make_unique<PrimeField>(q)).first;
  return *it->second;
}

std::uint64_t ipow_u64(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

FqPoly::FqPoly(int q, std::vector<int> coeffs) : q_(q), c_(std::move(coeffs)) {
  for (int& v : c_) v = static_cast<int>(((v % q) + q) % q);
  trim();
}

void FqPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FqPoly FqPoly::constant(int q, int c) { return FqPoly(q, {c}); }
FqPoly FqPoly::x(int q) { return FqPoly(q, {0, 1}); }

FqPoly FqPoly::monic_from_index(int q, int deg, std::uint64_t idx) {
  std::vector<int> c(deg + 1);
  for (int i = 0; i < deg; ++i) {
    c[i] = static_cast<int>(idx % q);
    idx /= q;
  }
  c[deg] = 1;
  return FqPoly(q, std::move(c));
}

std::uint64_t FqPoly::monic_index() const {
  std::uint64_t idx = 0;
  for (int i = deg() - 1; i >= 0; --i) idx = idx * q_ + c_[i];
  return idx;
}

FqPoly FqPoly::monic() const {
  if (is_zero()) return *this;
  const PrimeField& F = prime_field(q_);
  int li = F.inv(lead());
  FqPoly r = *this;
  for (int& v : r.c_) v = F.mul(v, li);
  return r;
}

FqPoly FqPoly::derivative() const {
  std::vector<int> d;
  for (int i = 1; i <= deg(); ++i) d.push_back(static_cast<int>(static_cast<long long>(i) * c_[i] % q_));
  return FqPoly(q_, std::move(d));
}

int FqPoly::eval(int x) const {
  long long r = 0;
  for (int i = deg(); i >= 0; --i) r = (r * x + c_[i]) % q_;
  return static_cast<int>(r);
}

std::string FqPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = deg(); i >= 0; --i) {
    if (!c_[i]) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0 || c_[i] != 1) os << c_[i];
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

static void require_same_field(const FqPoly& a, const FqPoly& b) {
  if (a.q() != b.q() && a.q() && b.q()) throw DomainError("polynomials over different fields");
}

FqPoly operator+(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  int q = a.q() ? a.q() : b.q();
  std::vector<int> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a[i] + b[i]) % q;
  return FqPoly(q, std::move(c));
}

FqPoly operator-(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  int q = a.q() ? a.q() : b.q();
  std::vector<int> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a[i] - b[i] + q) % q;
  return FqPoly(q, std::move(c));
}

FqPoly operator*(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  int q = a.q() ? a.q() : b.q();
  if (a.is_zero() || b.is_zero()) return FqPoly(q, {});
  std::vector<long long> c(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] = (c[i + j] + static_cast<long long>(a.c_[i]) * b.c_[j]) % q;
  return FqPoly(q, std::vector<int>(c.begin(), c.end()));
}

void divmod(const FqPoly& a, const FqPoly& b, FqPoly& quot, FqPoly& rem) {
  if (b.is_zero()) throw DomainError("division by zero polynomial");
  require_same_field(a, b);
  int q = b.q();
  const PrimeField& F = prime_field(q);
  std::vector<int> r = a.coeffs();
  int db = b.deg();
  int li = F.inv(b.lead());
  std::vector<int> qt(std::max(0, a.deg() - db + 1), 0);
  for (int i = a.deg(); i >= db; --i) {
    int c = F.mul(r[i], li);
    if (!c) continue;
    qt[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(c, b[j]));
  }
  quot = FqPoly(q, std::move(qt));
  r.resize(std::max(0, std::min(static_cast<int>(r.size()), db)));
  rem = FqPoly(q, std::move(r));
}

FqPoly operator%(const FqPoly& a, const FqPoly& b) {
  FqPoly qt, r;
  divmod(a, b, qt, r);
  return r;
}

FqPoly operator/(const FqPoly& a, const FqPoly& b) {
  FqPoly qt, r;
  divmod(a, b, qt, r);
  return qt;
}

FqPoly gcd(FqPoly a, FqPoly b) {
  while (!b.is_zero()) {
    FqPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

FqPoly powmod(const FqPoly& base, std::uint64_t e, const FqPoly& mod) {
  FqPoly result = FqPoly::constant(mod.q(), 1) % mod;
  FqPoly b = base % mod;
  while (e) {
    if (e & 1) result = (result * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return result;
}

int sgn(const FqPoly& d) {
  if (d.is_zero()) throw DomainError("sgn of zero polynomial");
  return prime_field(d.q()).legendre(d.lead());
}

int symbol_kernel(const PrimeField& F, int* a, int da, int* b, int db) {
  int res = 1;
  for (;;) {
    if (db == 0) return res;
    for (int i = da; i >= db; --i) {
      int c = a[i];
      if (!c) continue;
      int s = i - db;
      for (int j = 0; j < db; ++j) a[s + j] = F.sub(a[s + j], F.mul(c, b[j]));
      a[i] = 0;
    }
    if (da >= db) da = db - 1;
    while (da >= 0 && a[da] == 0) --da;
    if (da < 0) return 0;
    int c = a[da];
    if ((db & 1) && F.legendre(c) < 0) res = -res;
    if (da == 0) return res;
    int ci = F.inv(c);
    for (int j = 0; j < da; ++j) a[j] = F.mul(a[j], ci);
    a[da] = 1;
    std::swap(a, b);
    std::swap(da, db);
  }
}

bool squarefree_kernel(const PrimeField& F, const int* d, int deg) {
  int abuf[64], bbuf[64];
  if (deg >= 63) return is_squarefree(FqPoly(F.q(), std::vector<int>(d, d + deg + 1)));
  int* a = abuf;
  int* b = bbuf;
  int da = deg, db = deg - 1;
  for (int i = 0; i <= deg; ++i) a[i] = d[i];
  for (int i = 1; i <= deg; ++i) b[i - 1] = F.mul(F.reduce(i), d[i]);
  for (;;) {
    while (db >= 0 && b[db] == 0) --db;
    if (db < 0) return false;
    if (db == 0) return true;
    int li = F.inv(b[db]);
    for (int j = 0; j <= db; ++j) b[j] = F.mul(b[j], li);
    for (int i = da; i >= db; --i) {
      int c = a[i];
      if (!c) continue;
      int s = i - db;
      for (int j = 0; j < db; ++j) a[s + j] = F.sub(a[s + j], F.mul(c, b[j]));
      a[i] = 0;
    }
    da = db - 1;
    std::swap(a, b);
    std::swap(da, db);
  }
}

int quadratic_symbol(const FqPoly& d, const FqPoly& m) {
  if (!m.is_monic()) throw DomainError("quadratic_symbol: modulus must be monic");
  require_same_field(d, m);
  const PrimeField& F = prime_field(m.q());
  int n = std::max(d.deg(), m.deg()) + 1;
  std::vector<int> a(n, 0), b(n, 0);
  std::copy(d.coeffs().begin(), d.coeffs().end(), a.begin());
  std::copy(m.coeffs().begin(), m.coeffs().end(), b.begin());
  return symbol_kernel(F, a.data(), d.deg(), b.data(), m.deg());
}

bool is_squarefree(const FqPoly& h) {
  if (h.is_zero()) throw DomainError("is_squarefree of zero polynomial");
  if (h.deg() == 0) return true;
  return gcd(h, h.derivative()).deg() == 0;
}

// Distinct-degree factorization of a squarefree monic polynomial; returns the
// number of irreducible factors.
static int ddf_factor_count(FqPoly f) {
  int q = f.q();
  int count = 0;
  FqPoly xq = FqPoly::x(q) % f;
  FqPoly X = FqPoly::x(q);
  for (int k = 1; 2 * k <= f.deg(); ++k) {
    xq = powmod(xq, static_cast<std::uint64_t>(q), f);
    FqPoly g = gcd(xq - X, f);
    if (g.deg() > 0) {
      count += g.deg() / k;
      f = f / g;
      xq = xq % f;
    }
  }
  if (f.deg() > 0) ++count;
  return count;
}

int moebius(const FqPoly& h) {
  if (h.is_zero()) throw DomainError("moebius of zero polynomial");
  if (h.deg() == 0) return 1;
  if (!is_squarefree(h)) return 0;
  return (ddf_factor_count(h.monic()) & 1) ? -1 : 1;
}

bool is_irreducible(const FqPoly& h) {
  if (h.is_zero() || h.deg() < 1) return false;
  if (h.deg() == 1) return true;
  return is_squarefree(h) && ddf_factor_count(h.monic()) == 1;
}

void for_each_monic(int q, int deg, const std::function<void(const FqPoly&)>& fn) {
  require_admissible_q(q);
  std::uint64_t n = ipow_u64(q, deg);
  for (std::uint64_t idx = 0; idx < n; ++idx) fn(FqPoly::monic_from_index(q, deg, idx));
}

std::vector<FqPoly> enumerate_monic(int q, int deg, MonicFilter f) {
  std::vector<FqPoly> out;
  for_each_monic(q, deg, [&](const FqPoly& p) {
    if (f == MonicFilter::Squarefree && !is_squarefree(p)) return;
    if (f == MonicFilter::Irreducible && !is_irreducible(p)) return;
    out.push_back(p);
  });
  return out;
}

std::uint64_t count_irreducible_formula(long q, int k) {
  // (1/k) sum_{d | k} mu(d) q^(k/d)
  long long s = 0;
  for (int d = 1; d <= k; ++d) {
    if (k % d) continue;
    int m = d, mu = 1;
    for (int p = 2; p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      if (m % p == 0) { mu = 0; break; }
      mu = -mu;
    }
    s += mu * static_cast<long long>(ipow_u64(q, k / d));
  }
  return static_cast<std::uint64_t>(s / k);
}

static constexpr std::uint32_t kUnset = 0xFFFFFFFFu;

FactorSieve::FactorSieve(int q, int max_deg, std::uint64_t memory_budget) : q_(q), max_deg_(max_deg) {
  require_admissible_q(q);
  if (max_deg < 0) throw DomainError("sieve degree must be non-negative");
  offset_.assign(max_deg + 2, 0);
  long double total = 0;
  for (int n = 0; n <= max_deg; ++n) total += static_cast<long double>(ipow_u64(q, n));
  if (total * 8 > static_cast<long double>(memory_budget) || total >= 4.0e9L)
    throw BudgetError("factor sieve for q=" + std::to_string(q) + " degree " + std::to_string(max_deg) +
                      " exceeds the memory budget");
  for (int n = 0; n <= max_deg; ++n) offset_[n + 1] = offset_[n] + static_cast<std::uint32_t>(ipow_u64(q, n));
  std::uint32_t N = offset_[max_deg + 1];
  small_.assign(N, kUnset);
  cof_.assign(N, 0);
  small_[0] = 0;
  irred_count_.assign(max_deg + 1, 0);
  const PrimeField& F = prime_field(q);

  std::vector<int> pc, cc, prod;
  for (int n = 1; n <= max_deg; ++n) {
    std::uint64_t cnt = ipow_u64(q, n);
    for (std::uint64_t idx = 0; idx < cnt; ++idx) {
      std::uint32_t id = offset_[n] + static_cast<std::uint32_t>(idx);
      if (small_[id] != kUnset) continue;
      small_[id] = id;
      cof_[id] = 0;
      irred_.push_back(id);
      ++irred_count_[n];
      pc = FqPoly::monic_from_index(q, n, idx).coeffs();
      for (int m = 1; m + n <= max_deg; ++m) {
        std::uint64_t cm = ipow_u64(q, m);
        cc.assign(m + 1, 0);
        cc[m] = 1;
        for (std::uint64_t cidx = 0; cidx < cm; ++cidx) {
          // digits of cidx in cc[0..m-1]
          std::uint64_t t = cidx;
          for (int i = 0; i < m; ++i) { cc[i] = static_cast<int>(t % q); t /= q; }
          prod.assign(n + m + 1, 0);
          for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= m; ++j) prod[i + j] = F.add(prod[i + j], F.mul(pc[i], cc[j]));
          std::uint64_t pidx = 0;
          for (int i = n + m - 1; i >= 0; --i) pidx = pidx * q + prod[i];
          std::uint32_t pid = offset_[n + m] + static_cast<std::uint32_t>(pidx);
          if (small_[pid] == kUnset) {
            small_[pid] = id;
            cof_[pid] = offset_[m] + static_cast<std::uint32_t>(cidx);
          }
        }
      }
    }
  }
}

int FactorSieve::deg_of(std::uint32_t id) const {
  int n = 0;
  while (n < max_deg_ && offset_[n + 1] <= id) ++n;
  return n;
}

FqPoly FactorSieve::poly(std::uint32_t id) const {
  int n = deg_of(id);
  return FqPoly::monic_from_index(q_, n, id - offset_[n]);
}

std::uint32_t FactorSieve::id_of(const FqPoly& m) const {
  if (!m.is_monic() || m.deg() > max_deg_) throw DomainError("polynomial outside sieve range");
  return offset_[m.deg()] + static_cast<std::uint32_t>(m.monic_index());
}

std::vector<FqPoly> FactorSieve::factor(std::uint32_t id) const {
  std::vector<FqPoly> out;
  while (id != 0) {
    out.push_back(poly(small_[id]));
    id = cof_[id];
  }
  return out;
}

std::shared_ptr<const FactorSieve> shared_sieve(int q, int max_deg) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const FactorSieve>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(q);
  if (it != cache.end() && it->second->max_deg() >= max_deg) return it->second;
  auto s = std::make_shared<const FactorSieve>(q, max_deg);
  cache[q] = s;
  return s;
}

}  // namespace qmom
