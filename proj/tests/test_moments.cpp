#include "doctest.h"
#include "qmom/lfunc.hpp"
#include "qmom/moments.hpp"

using namespace qmom;

namespace {

MomentOptions threads(int n) {
  MomentOptions o;
  o.threads = n;
  return o;
}

}  // namespace

TEST_CASE("D = 1 moments") {
  for (int r : {1, 2, 4, 7}) {
    auto row = moment(5, r, 1);
    CHECK(row.a == 5);
    CHECK(row.b == 0);
    CHECK(row.count == 5);
  }
}

TEST_CASE("sieve oracle agrees with the naive oracle") {
  for (int D = 0; D <= 4; ++D)
    for (int r = 1; r <= 4; ++r) {
      auto fast = moment(5, r, D), slow = moment_naive(5, r, D);
      CAPTURE(D);
      CAPTURE(r);
      CHECK(fast.a == slow.a);
      CHECK(fast.b == slow.b);
      CHECK(fast.count == slow.count);
    }
  for (int D = 1; D <= 3; ++D) {
    auto fast = moment(13, 4, D), slow = moment_naive(13, 4, D);
    CHECK(fast.a == slow.a);
    CHECK(fast.b == slow.b);
  }
}

TEST_CASE("fast paths agree with each other") {
  for (int D = 2; D <= 5; ++D) {
    MomentOptions plain;
    plain.use_translation = false;
    plain.use_functional_equation = false;
    auto ref = moment(5, 4, D, plain);
    for (bool tr : {false, true})
      for (bool fe : {false, true}) {
        MomentOptions o;
        o.use_translation = tr;
        o.use_functional_equation = fe;
        auto row = moment(5, 4, D, o);
        CHECK(row.a == ref.a);
        CHECK(row.b == ref.b);
        CHECK(row.count == ref.count);
      }
  }
}

TEST_CASE("thread-count invariance") {
  for (int D : {3, 5}) {
    auto a = moment(5, 4, D, threads(1));
    for (int n : {2, 8}) {
      auto b = moment(5, 4, D, threads(n));
      CHECK(a.a == b.a);
      CHECK(a.b == b.b);
      CHECK(a.count == b.count);
      CHECK(a.value == b.value);
    }
  }
}

TEST_CASE("squarefree counts and float value") {
  for (int D = 1; D <= 6; ++D) {
    auto row = moment(5, 4, D);
    CHECK(row.count == squarefree_count(5, D));
    CHECK(row.value == doctest::Approx(row.as_knum().embed().real()).epsilon(1e-12));
  }
  CHECK(squarefree_count(5, 2) == 20);
  CHECK(squarefree_count(13, 3) == 13 * 13 * 12);
}

TEST_CASE("GMP backend agrees with int128") {
  // r large enough to force the arbitrary-precision accumulator
  auto big = moment(5, 40, 3);
  CHECK(big.backend == "gmp");
  auto naive = moment_naive(5, 40, 3);
  CHECK(big.a == naive.a);
  CHECK(big.b == naive.b);
  CHECK(moment(5, 4, 3).backend == "int128");
}

TEST_CASE("D = 0 and budget guard") {
  auto row = moment(5, 3, 0);
  KNum t2 = KNum::t(5) * KNum::t(5);
  CHECK(row.as_knum() == pow((KNum::from_int(5, 1) - t2).inv(), 3));
  MomentOptions o;
  o.op_budget = 1000;
  CHECK_THROWS_AS(moment(5, 4, 5, o), BudgetError);
  o.allow_large = true;
  CHECK_NOTHROW(moment(5, 4, 5, o));
  CHECK_THROWS_AS(moment(7, 4, 2), ConfigError);
  CHECK_THROWS_AS(moment(5, 0, 2), DomainError);
}

TEST_CASE("generating series and residual table") {
  auto coeffs = generating_series(5, 4, 3);
  REQUIRE(coeffs.size() == 4);
  CHECK(coeffs[1] == KNum::from_int(5, 5));
  std::complex<double> xi(0.01, 0.02);
  std::complex<double> expect = 0, xp = 1;
  for (auto& c : coeffs) {
    expect += c.embed() * xp;
    xp *= xi;
  }
  CHECK(std::abs(generating_series_value(5, 4, 3, xi) - expect) < 1e-12);

  std::vector<MomentRow> rows;
  for (int D = 3; D <= 5; ++D) rows.push_back(moment(5, 4, D));
  auto tab = residual_table(rows, std::vector<std::vector<std::complex<double>>>(rows.size()), 0.45);
  for (auto& t : tab) {
    CHECK(t.residual == t.moment.value);
    CHECK(t.normalized == doctest::Approx(t.moment.value / std::pow(5.0, t.moment.D * 1.45 / 2)));
  }
  CHECK_THROWS_AS(residual_table(rows, {}, 0.45), DomainError);
  CHECK(moments_csv_header() == "q,r,D,moment_a,moment_b,moment_float,count,seconds");
  CHECK(moments_csv_row(rows[0]).rfind("5,4,3,", 0) == 0);
  CHECK(residual_csv_header(2).find("Q2_re") != std::string::npos);
}
