#include <random>

#include "doctest.h"
#include "qmom/exactnum.hpp"

using namespace qmom;

namespace {

KNum random_knum(std::mt19937_64& rng, long q) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  std::array<QI, 4> c;
  for (auto& x : c) x = QI(mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
  return KNum(q, c);
}

}  // namespace

TEST_CASE("field examples at q = 5") {
  long q = 5;
  KNum t = KNum::t(q), t2 = t * t;
  CHECK(t2 * t2 == KNum::from_int(q, 5));
  KNum x = (KNum::from_int(q, 1) - t2).inv();
  CHECK(x.coeff(0) == QI(mpq_class(-1, 4)));
  CHECK(x.coeff(1).is_zero());
  CHECK(x.coeff(2) == QI(mpq_class(-1, 4)));
  CHECK(x.coeff(3).is_zero());
  CHECK(t.embed().real() == doctest::Approx(1.49534878).epsilon(1e-9));
  CHECK(std::abs(t.embed().imag()) < 1e-15);
  CHECK_THROWS_AS(KNum(q).inv(), DomainError);
}

TEST_CASE("qsqrt_pair") {
  long q = 5;
  KNum t = KNum::t(q);
  auto ab = qsqrt_pair(KNum::from_int(q, 3) + KNum::from_int(q, 2) * t * t);
  CHECK(ab.first == 3);
  CHECK(ab.second == 2);
  CHECK_THROWS_AS(qsqrt_pair(t), DomainError);
  CHECK_THROWS_AS(qsqrt_pair(KNum(q, QI::i())), DomainError);
  ab = qsqrt_pair(KNum::from_int(q, q));
  CHECK(ab.first == q);
  CHECK(ab.second == 0);
  CHECK(qsqrt_to_double(mpq_class(1), mpq_class(1), 5) == doctest::Approx(1 + std::sqrt(5.0)));
}

TEST_CASE("t^4 - q irreducible for configured moduli") {
  for (long q : {5, 13, 17, 29}) CHECK(t4_minus_q_irreducible(q));
  CHECK_FALSE(t4_minus_q_irreducible(4));
}

TEST_CASE("x * inv(x) = 1 for random elements") {
  std::mt19937_64 rng(11);
  for (long q : {5, 13}) {
    KNum one = KNum::from_int(q, 1);
    int n = q == 5 ? 10000 : 2000;
    for (int it = 0; it < n; ++it) {
      KNum x = random_knum(rng, q);
      if (x.is_zero()) continue;
      REQUIRE(x * x.inv() == one);
    }
  }
}

TEST_CASE("embed is a ring homomorphism") {
  std::mt19937_64 rng(12);
  long q = 5;
  for (int branch = 0; branch < 4; ++branch)
    for (int it = 0; it < 500; ++it) {
      KNum x = random_knum(rng, q), y = random_knum(rng, q);
      auto exy = (x * y).embed(branch), ex = x.embed(branch), ey = y.embed(branch);
      double scale = std::abs(ex) * std::abs(ey) + 1e-300;
      CHECK(std::abs(exy - ex * ey) <= 1e-12 * std::max(scale, std::abs(exy)));
      CHECK(std::abs((x + y).embed(branch) - ex - ey) <= 1e-12 * (std::abs(ex) + std::abs(ey)));
    }
}

TEST_CASE("conjugation and roots of unity") {
  long q = 13;
  KNum i = KNum::zeta(q, 1);
  CHECK(i * i == KNum::from_int(q, -1));
  CHECK(KNum::zeta(q, 4) == KNum::from_int(q, 1));
  CHECK(i.conj_i() == KNum::zeta(q, 3));
  KNum t = KNum::t(q);
  CHECK((t * i).conj_i() == t * KNum::zeta(q, 3));
  CHECK(pow(t, 4) == KNum::from_int(q, q));
  CHECK(pow(t, -4) * KNum::from_int(q, q) == KNum::from_int(q, 1));
  // q-free values mix with any q
  CHECK(KNum(0, QI(2)) * t == t + t);
  CHECK_THROWS(KNum::t(5) + KNum::t(13));
}

TEST_CASE("QI arithmetic") {
  QI a(mpq_class(1, 2), mpq_class(3)), b(mpq_class(-2), mpq_class(1, 5));
  CHECK(a * a.inv() == QI(1));
  CHECK((a * b).norm() == a.norm() * b.norm());
  CHECK(a.conj().conj() == a);
  CHECK_THROWS_AS(QI().inv(), DomainError);
}
