#include <random>

#include "doctest.h"
#include "qmom/lfunc.hpp"

using namespace qmom;

namespace {

// Direct character sum a_n over monic m of degree n.
std::vector<std::int64_t> brute_coeffs(const FqPoly& d) {
  std::vector<std::int64_t> a;
  for (int n = 0; n < d.deg(); ++n) {
    std::int64_t s = 0;
    for_each_monic(d.q(), n, [&](const FqPoly& m) { s += quadratic_symbol(d, m); });
    a.push_back(s);
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

}  // namespace

TEST_CASE("linear d gives L = 1") {
  int q = 5;
  CHECK(l_polynomial(FqPoly::x(q)) == std::vector<std::int64_t>{1});
  for_each_monic(q, 1, [&](const FqPoly& d) { CHECK(l_at_half(d) == KNum::from_int(q, 1)); });
  CHECK(l_at_half(FqPoly::x(q)) == KNum::from_int(q, 1));
}

TEST_CASE("x^2 + 2 at q = 5") {
  int q = 5;
  FqPoly d(q, {2, 0, 1});
  auto a = l_polynomial(d);
  long s = 0;
  for (int c = 0; c < q; ++c) s += quadratic_symbol(d, FqPoly(q, {c, 1}));
  REQUIRE(a.size() == 2);
  CHECK(a[0] == 1);
  CHECK(a[1] == s);
  CHECK(a[1] == -1);  // Legendre(c^2 + 2) summed over c in F_5
  CHECK(std::abs(functional_equation_residual(d, 0.5)) <= 1e-10);
}

TEST_CASE("constant d closed forms") {
  int q = 5;
  std::complex<double> s(0.3, 0.7);
  FqPoly one = FqPoly::constant(q, 1), two = FqPoly::constant(q, 2);
  CHECK(std::abs(l_at(s, one) - 1.0 / (1.0 - std::pow(5.0, 1.0 - s))) < 1e-12);
  CHECK(std::abs(l_at(s, two) - 1.0 / (1.0 + std::pow(5.0, 1.0 - s))) < 1e-12);
  KNum t2 = KNum::t(q) * KNum::t(q);
  CHECK(l_at_half(one) == (KNum::from_int(q, 1) - t2).inv());
  CHECK(l_at_half(two) == (KNum::from_int(q, 1) + t2).inv());
  CHECK_THROWS_AS(l_polynomial(one), DomainError);
}

TEST_CASE("functional equation examples") {
  CHECK(std::abs(functional_equation_residual(FqPoly::x(5), {0.3, 0.7})) <= 1e-10);
  std::mt19937_64 rng(3);
  int q = 13;
  FqPoly d;
  do {
    d = FqPoly::monic_from_index(q, 3, rng() % 2197);
  } while (!is_squarefree(d));
  CHECK(std::abs(functional_equation_residual(d, 0.9)) <= 1e-10);
  // odd degree: gamma collapses to q^{s - 1/2}
  std::complex<double> s(0.2, 1.3);
  CHECK(std::abs(gamma_factor(s, d) - std::pow(13.0, s - 0.5)) < 1e-12);
}

TEST_CASE("functional equation exhaustive over q = 5, deg <= 4") {
  int q = 5;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2, 2);
  long n = 0;
  for (int D = 1; D <= 4; ++D)
    for (auto& d : enumerate_monic(q, D, MonicFilter::Squarefree)) {
      for (int k = 0; k < 10; ++k) {
        std::complex<double> s(U(rng), U(rng));
        double res = std::abs(functional_equation_residual(d, s));
        double scale = 1 + std::abs(l_at(s, d));
        if (res > 1e-10 * scale) FAIL_CHECK("residual " << res << " for " << d.str());
      }
      ++n;
    }
  CHECK(n == 5 + 20 + 100 + 500);
}

TEST_CASE("coefficients: brute force, both engine paths, trivial bound") {
  for (int q : {5, 13}) {
    int maxD = q == 5 ? 5 : 3;
    for (int D = 1; D <= maxD; ++D) {
      LEngine fe(q, D, true), full(q, D, false);
      std::vector<std::int64_t> a1(D), a2(D);
      for (auto& d : enumerate_monic(q, D, MonicFilter::Squarefree)) {
        std::vector<int> c = d.coeffs();
        fe.coeffs(c.data(), a1.data());
        c = d.coeffs();
        full.coeffs(c.data(), a2.data());
        REQUIRE(a1 == a2);
        CHECK(a1[0] == 1);
        for (int k = 0; k < D; ++k) CHECK(std::llabs(a1[k]) <= static_cast<std::int64_t>(ipow_u64(q, k)));
        if (D <= 3 || (q == 5 && d.monic_index() % 37 == 0)) {
          auto b = brute_coeffs(d);
          auto l = l_polynomial(d);
          CHECK(l == b);
        }
      }
    }
  }
}

TEST_CASE("non-monic d") {
  int q = 5;
  FqPoly d(q, {1, 3, 0, 2});  // 2x^3 + 3x + 1
  REQUIRE(is_squarefree(d));
  CHECK(l_polynomial(d) == brute_coeffs(d));
  CHECK(std::abs(functional_equation_residual(d, {0.1, 0.4})) < 1e-10);
  FqPoly e(q, {2, 1, 3});  // 3x^2 + x + 2, sgn = -1
  REQUIRE(is_squarefree(e));
  CHECK(sgn(e) == -1);
  CHECK(l_polynomial(e) == brute_coeffs(e));
  CHECK(std::abs(functional_equation_residual(e, {0.1, 0.4})) < 1e-10);
}

TEST_CASE("l_at_half matches the complex evaluation") {
  int q = 5;
  for (auto& d : enumerate_monic(q, 4, MonicFilter::Squarefree)) {
    auto ex = l_at_half(d).embed();
    CHECK(std::abs(ex - l_at(0.5, d)) < 1e-12);
  }
  CHECK_THROWS_AS(l_polynomial(FqPoly(q, {0, 0, 1})), DomainError);
}
