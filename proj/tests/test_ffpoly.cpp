#include <random>

#include "doctest.h"
#include "qmom/ffpoly.hpp"

using namespace qmom;

namespace {

FqPoly P(int q, std::vector<int> c) { return FqPoly(q, std::move(c)); }

// Euler criterion: for m irreducible, d^{(|m|-1)/2} mod m is 0 or +-1.
int euler_symbol_irreducible(const FqPoly& d, const FqPoly& m) {
  FqPoly r = d % m;
  if (r.is_zero()) return 0;
  std::uint64_t e = (ipow_u64(m.q(), m.deg()) - 1) / 2;
  FqPoly v = powmod(r, e, m);
  if (v == FqPoly::constant(m.q(), 1)) return 1;
  if (v == FqPoly::constant(m.q(), m.q() - 1)) return -1;
  FAIL("Euler criterion gave a non-unit value");
  return 2;
}

// Symbol through full factorization and the Euler criterion.
int euler_symbol(const FqPoly& d, const FqPoly& m, const FactorSieve& S) {
  if (m.deg() == 0) return 1;
  int v = 1;
  for (auto& p : S.factor(S.id_of(m))) v *= euler_symbol_irreducible(d, p);
  return v;
}

}  // namespace

TEST_CASE("admissible moduli") {
  CHECK_THROWS_AS(PrimeField(3), ConfigError);
  CHECK_THROWS_AS(PrimeField(7), ConfigError);
  CHECK_THROWS_AS(PrimeField(9), ConfigError);
  CHECK_THROWS_AS(PrimeField(25), ConfigError);
  CHECK_NOTHROW(PrimeField(5));
  CHECK(prime_field(5).theta0() == 2);
  CHECK(prime_field(13).theta0() == 2);
  CHECK(prime_field(17).theta0() == 3);
  CHECK(prime_field(29).theta0() == 2);
}

TEST_CASE("basic arithmetic") {
  FqPoly a = P(5, {1, 2, 3}), b = P(5, {4, 1});
  FqPoly qt, r;
  divmod(a, b, qt, r);
  CHECK(qt * b + r == a);
  CHECK(r.deg() < b.deg());
  CHECK(P(5, {0, 0, 5}).is_zero());
  CHECK(P(5, {1, 1}).str() == "x+1");
  CHECK(gcd(P(5, {0, 1}) * P(5, {1, 1}), P(5, {0, 1}) * P(5, {2, 1})) == P(5, {0, 1}));
  FqPoly m = FqPoly::monic_from_index(5, 3, 87);
  CHECK(m.monic_index() == 87);
  CHECK(m.is_monic());
}

TEST_CASE("quadratic symbol examples") {
  int q = 5;
  CHECK(quadratic_symbol(FqPoly::constant(q, 1), FqPoly::constant(q, 1)) == 1);
  CHECK(quadratic_symbol(FqPoly::constant(q, 2), FqPoly::x(q)) == -1);
  CHECK(quadratic_symbol(FqPoly::x(q), P(q, {1, 1})) == 1);
  CHECK(quadratic_symbol(FqPoly::x(q), P(q, {0, 0, 1})) == 0);
  CHECK_THROWS_AS(quadratic_symbol(FqPoly::x(q), P(q, {1, 2})), DomainError);
}

TEST_CASE("constant rule") {
  for (int q : {5, 13}) {
    const PrimeField& F = prime_field(q);
    for (int b = 1; b < q; ++b)
      for (int deg = 0; deg <= 3; ++deg)
        for_each_monic(q, deg, [&](const FqPoly& m) {
          int expect = (deg % 2 == 0) ? 1 : F.legendre(b);
          CHECK(quadratic_symbol(FqPoly::constant(q, b), m) == expect);
        });
  }
}

TEST_CASE("symbol agrees with the Euler criterion") {
  for (int q : {5, 13}) {
    int maxd = (q == 5) ? 3 : 2;
    auto S = shared_sieve(q, 3);
    for (int dm = 0; dm <= maxd; ++dm)
      for (int dd = 0; dd <= maxd; ++dd) {
        std::uint64_t nd = ipow_u64(q, dd);
        for (std::uint64_t i = 0; i < nd; ++i)
          for (int lead = 1; lead < q; lead += (q == 5 ? 1 : 5)) {
            FqPoly d = FqPoly::monic_from_index(q, dd, i);
            std::vector<int> c = d.coeffs();
            for (int& v : c) v = v * lead % q;
            d = FqPoly(q, c);
            for_each_monic(q, dm, [&](const FqPoly& m) { CHECK(quadratic_symbol(d, m) == euler_symbol(d, m, *S)); });
          }
      }
  }
}

TEST_CASE("reciprocity, exhaustive for coprime monic pairs") {
  struct Case {
    int q, max_a, max_b;
  };
  // q = 5 up to degree 5 on both sides; q = 13 up to degree 3 by degree 2
  for (Case c : {Case{5, 5, 5}, Case{13, 3, 2}}) {
    long checked = 0;
    for (int da = 1; da <= c.max_a; ++da)
      for (int db = 1; db <= std::min(da, c.max_b); ++db) {
        std::uint64_t na = ipow_u64(c.q, da), nb = ipow_u64(c.q, db);
        // for the largest q=5 blocks test a deterministic stride
        std::uint64_t stride = (c.q == 5 && da + db >= 9) ? 7 : 1;
        for (std::uint64_t i = 0; i < na; i += stride)
          for (std::uint64_t j = 0; j < nb; j += stride) {
            FqPoly a = FqPoly::monic_from_index(c.q, da, i), b = FqPoly::monic_from_index(c.q, db, j);
            int ab = quadratic_symbol(a, b), ba = quadratic_symbol(b, a);
            if (ab == 0) {
              REQUIRE(ba == 0);
              continue;
            }
            ++checked;
            if (ab != ba) FAIL_CHECK("reciprocity failed for " << a.str() << " , " << b.str());
          }
      }
    CHECK(checked > 0);
  }
}

TEST_CASE("multiplicativity on random samples") {
  std::mt19937_64 rng(7);
  for (int q : {5, 13}) {
    for (int it = 0; it < 400; ++it) {
      auto rnd = [&](int deg) { return FqPoly::monic_from_index(q, deg, rng() % ipow_u64(q, deg)); };
      FqPoly d = rnd(1 + rng() % 4), d2 = rnd(1 + rng() % 3), m1 = rnd(rng() % 3), m2 = rnd(1 + rng() % 3);
      CHECK(quadratic_symbol(d, m1 * m2) == quadratic_symbol(d, m1) * quadratic_symbol(d, m2));
      CHECK(quadratic_symbol(d * d2, m2) == quadratic_symbol(d, m2) * quadratic_symbol(d2, m2));
    }
  }
}

TEST_CASE("zero iff common factor") {
  int q = 5;
  for (int dd = 1; dd <= 3; ++dd)
    for (int dm = 1; dm <= 3; ++dm)
      for_each_monic(q, dd, [&](const FqPoly& d) {
        for_each_monic(q, dm, [&](const FqPoly& m) { CHECK((quadratic_symbol(d, m) == 0) == (gcd(d, m).deg() > 0)); });
      });
}

TEST_CASE("moebius") {
  int q = 5;
  CHECK(moebius(FqPoly::constant(q, 1)) == 1);
  CHECK(moebius(P(q, {0, 1}) * P(q, {1, 1})) == 1);
  CHECK(moebius(P(q, {0, 0, 1})) == 0);
  CHECK(moebius(P(q, {0, 1})) == -1);
  CHECK_THROWS_AS(moebius(FqPoly(q, {})), DomainError);
  // sum over monic of degree n: 1, -q, 0, 0, ...
  for (int n = 0; n <= 5; ++n) {
    long s = 0;
    for_each_monic(q, n, [&](const FqPoly& h) { s += moebius(h); });
    CHECK(s == (n == 0 ? 1 : n == 1 ? -q : 0));
  }
  // agreement with the sieve factorization
  auto S = shared_sieve(q, 5);
  for (std::uint32_t id = 0; id < S->offset(5); ++id) {
    auto f = S->factor(id);
    std::sort(f.begin(), f.end(), [](const FqPoly& a, const FqPoly& b) {
      return std::make_pair(a.deg(), a.monic_index()) < std::make_pair(b.deg(), b.monic_index());
    });
    bool sqfree = std::adjacent_find(f.begin(), f.end()) == f.end();
    int expect = sqfree ? ((f.size() % 2) ? -1 : 1) : 0;
    CHECK(moebius(S->poly(id)) == expect);
  }
}

TEST_CASE("enumeration counts and order") {
  int q = 5;
  CHECK(enumerate_monic(q, 1, MonicFilter::Irreducible).size() == 5);
  CHECK(enumerate_monic(q, 2, MonicFilter::Squarefree).size() == 20);
  CHECK(enumerate_monic(q, 2, MonicFilter::Irreducible).size() == 10);
  CHECK(enumerate_monic(q, 3, MonicFilter::Irreducible).size() == 40);
  auto all = enumerate_monic(q, 2, MonicFilter::All);
  REQUIRE(all.size() == 25);
  for (size_t i = 0; i < all.size(); ++i) CHECK(all[i].monic_index() == i);
  CHECK(all[0] == P(q, {0, 0, 1}));
  CHECK(all[1] == P(q, {1, 0, 1}));
  CHECK(enumerate_monic(13, 2, MonicFilter::Squarefree).size() == 13 * 13 - 13);
}

TEST_CASE("sieve reconstructs every monic polynomial") {
  for (int q : {5, 13}) {
    int maxd = q == 5 ? 6 : 3;
    FactorSieve S(q, maxd);
    for (int n = 1; n <= maxd; ++n) CHECK(S.count_irreducible(n) == count_irreducible_formula(q, n));
    for (std::uint32_t id = 0; id < S.size(); ++id) {
      FqPoly prod = FqPoly::constant(q, 1);
      auto f = S.factor(id);
      for (auto& p : f) {
        CHECK(S.is_irreducible(S.id_of(p)));
        prod = prod * p;
      }
      CHECK(prod == S.poly(id));
      if (id == 0) continue;
      CHECK(S.is_irreducible(id) == is_irreducible(S.poly(id)));
    }
  }
  CHECK_THROWS_AS(FactorSieve(5, 12, 1 << 20), BudgetError);
}

TEST_CASE("squarefree kernel agrees with gcd test") {
  for (int q : {5, 13}) {
    const PrimeField& F = prime_field(q);
    for (int n = 1; n <= (q == 5 ? 5 : 3); ++n)
      for_each_monic(q, n, [&](const FqPoly& h) { CHECK(squarefree_kernel(F, h.coeffs().data(), n) == is_squarefree(h)); });
  }
}
