#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "qmom/config.hpp"
#include "qmom/kacmoody.hpp"

using namespace qmom;

namespace {

Root R(std::vector<int> k) { return k; }

long binom(int n, int k) {
  long b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

}  // namespace

TEST_CASE("Cartan matrix and determinant") {
  CHECK(cartan_entry(4, 1, 1) == 2);
  CHECK(cartan_entry(4, 1, 5) == -1);
  CHECK(cartan_entry(4, 5, 2) == -1);
  CHECK(cartan_entry(4, 1, 2) == 0);
  for (int r = 1; r <= 12; ++r) CHECK(cartan_det(r) == cartan_det_formula(r));
  CHECK(cartan_det(4) == 0);
  CHECK(cartan_det(3) == 4);
  CHECK(cartan_det(5) == -16);
}

TEST_CASE("reflection examples") {
  CHECK(reflect(1, simple_root(4, 5)) == R({1, 0, 0, 0, 1}));
  CHECK(reflect(4, R({1, 1, 1, 2})) == R({1, 1, 1, 1}));
  CHECK(reflect(2, simple_root(4, 2)) == R({0, -1, 0, 0, 0}));
  std::mt19937_64 rng(1);
  for (int it = 0; it < 2000; ++it) {
    int r = 3 + rng() % 4;
    Root a(r + 1);
    for (int& k : a) k = static_cast<int>(rng() % 11) - 5;
    int i = 1 + rng() % (r + 1);
    CHECK(reflect(i, reflect(i, a)) == a);
  }
  CHECK_THROWS_AS(reflect(0, simple_root(4, 1)), DomainError);
  CHECK_THROWS_AS(reflect(6, simple_root(4, 1)), DomainError);
}

TEST_CASE("Phi_1 and Phi_2 match their parametrizations") {
  auto phi1 = enumerate_phi(4, 1);
  CHECK(phi1.size() == 16);
  std::set<Root> expect1;
  for (int m = 0; m < 16; ++m) expect1.insert(R({m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1, 1}));
  CHECK(std::set<Root>(phi1.begin(), phi1.end()) == expect1);

  auto phi2r3 = enumerate_phi(3, 2);
  REQUIRE(phi2r3.size() == 1);
  CHECK(phi2r3[0] == R({1, 1, 1, 2}));

  for (int r = 3; r <= 7; ++r) {
    auto phi2 = enumerate_phi(r, 2);
    long expect = binom(r, 3) * (1L << (r - 3));
    CHECK(static_cast<long>(phi2.size()) == expect);
    for (auto& a : phi2) {
      std::vector<int> tr, J;
      CHECK(phi2_parameters(a, tr, J));
    }
    CHECK(static_cast<long>(enumerate_phi(r, 1).size()) == (1L << r));
  }
  CHECK(enumerate_phi(4, 2).size() == 8);
  CHECK_THROWS_AS(enumerate_phi(4, 0), DomainError);
}

TEST_CASE("height bound contains all of Phi_n") {
  // A generous bound must not reveal roots missed by the default one.
  for (int r = 3; r <= 6; ++r)
    for (int n = 1; n <= 3; ++n) {
      auto a = enumerate_phi(r, n);
      auto b = enumerate_phi(r, n, (r + 1) * n + 6);
      CHECK(a == b);
      for (auto& x : a) CHECK(height(x) <= (r + 1) * n);
    }
}

TEST_CASE("weyl words") {
  CHECK(weyl_word(simple_root(4, 5)).letters.empty());
  CHECK(weyl_word(R({1, 0, 0, 0, 1})).letters == std::vector<int>{1});
  auto w = weyl_word(R({1, 1, 1, 2}));
  CHECK(w.letters == std::vector<int>{1, 2, 3, 4});
  CHECK(w.certified_reduced);
  CHECK(weyl_word(simple_root(4, 2)).letters == std::vector<int>{2, 5});
  CHECK_THROWS_AS(weyl_word(R({1, 0, 0, 0, -1})), DomainError);
  CHECK_THROWS_AS(weyl_word(R({1, 1, 0, 0, 0})), DomainError);  // positive but not real
}

TEST_CASE("words send roots to the central simple root and are reduced") {
  for (int r = 3; r <= 6; ++r) {
    Root target = simple_root(r, r + 1);
    for (int n = 1; n <= 3; ++n)
      for (auto& a : enumerate_phi(r, n)) {
        auto w = weyl_word(a);
        CHECK(apply_word(w.letters, a) == target);
        CHECK(w.certified_reduced);
        auto inv = inversion_set(w.letters, r);
        CHECK(static_cast<int>(inv.size()) == w.length());
        CHECK(std::set<Root>(inv.begin(), inv.end()).size() == inv.size());
        if (n == 2) {
          std::vector<int> tr, J;
          REQUIRE(phi2_parameters(a, tr, J));
          CHECK(w.length() == 4 + static_cast<int>(J.size()));
          auto pw = phi2_word(tr, J, r);
          CHECK(apply_word(pw.letters, a) == target);
          CHECK(pw.certified_reduced);
        }
      }
  }
}

TEST_CASE("root lemmas") {
  for (int r = 3; r <= 6; ++r) {
    auto rep = root_lemma_check(r, 4 * r);
    CHECK(rep.bound_ok);
    CHECK(rep.implication_ok);
    CHECK(rep.roots_checked > 0);
  }
  // every root reached from the simple roots is also in W alpha_{r+1}
  for (auto& a : positive_real_roots(5, 14)) {
    auto w = weyl_word(a);
    CHECK(apply_word(w.letters, a) == simple_root(5, 6));
  }
}

TEST_CASE("w* sign pattern") {
  CHECK(wstar_word(4).size() == 15);
  for (int r : {4, 5}) {
    auto rep = wstar_inequality_check(r, r == 4 ? 12 : 10);
    CHECK(rep.negative_class_ok);
    CHECK(rep.positive_class_ok);
    CHECK(rep.inversions == 11);
    auto has = [&](Root a) { return std::find(rep.negative_class.begin(), rep.negative_class.end(), a) != rep.negative_class.end(); };
    CHECK(has(simple_root(r, 1)));
    Root b(r + 1, 0);
    b[0] = b[1] = b[2] = 1;
    b[r] = 2;
    CHECK(has(b));
  }
  auto rep8 = wstar_inequality_check(4, 8);
  CHECK(rep8.negative_class_ok);
  CHECK(rep8.positive_class_ok);
  CHECK_THROWS_AS(wstar_inequality_check(3, 8), DomainError);
}
