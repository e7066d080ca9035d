#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace qmom {

// Coordinates (k_1, ..., k_{r+1}) in the simple-root basis. Letters are
// 1-based: 1..r are the outer nodes, r+1 the central node.
using Root = std::vector<int>;

int root_rank(const Root& a);  // r
int height(const Root& a);
int level(const Root& a);      // k_{r+1}
bool is_positive(const Root& a);
bool is_negative(const Root& a);
Root simple_root(int r, int i);
std::string root_str(const Root& a);

// Generalized Cartan matrix of the star graph: 2 on the diagonal, -1 between
// the centre and each outer node.
int cartan_entry(int r, int i, int j);
// Exact determinant by fraction-free elimination.
mpz_class cartan_det(int r);
// Closed form -2^{r-1} (r - 4).
mpz_class cartan_det_formula(int r);

Root reflect(int i, const Root& a);

// All positive real roots of height <= bound, by closure of the simple roots
// under height-bounded reflections. Sorted by (height, coordinates).
std::vector<Root> positive_real_roots(int r, int height_bound);

// Phi_n: positive real roots of level n. height_bound = 0 selects a bound
// large enough to contain all of Phi_n.
std::vector<Root> enumerate_phi(int r, int n, int height_bound = 0);
int phi_height_bound(int r, int n);

struct WeylWord {
  std::vector<int> letters;  // w = w_{letters[0]} w_{letters[1]} ...
  bool certified_reduced = true;

  int length() const { return static_cast<int>(letters.size()); }
  std::string str() const;
};

// Word w with w(alpha) = alpha_{r+1}, from a greedy height descent; runs of
// commuting outer letters are sorted ascending. certified_reduced is set from
// the positivity of the inversion roots.
WeylWord weyl_word(const Root& a);
// w(alpha), rightmost letter acting first.
Root apply_word(const std::vector<int>& letters, Root a);
// {w_{i_k} ... w_{i_{m+1}}(alpha_{i_m}) : m = 1..k}.
std::vector<Root> inversion_set(const std::vector<int>& letters, int r);

// Phi_2 members alpha_{j1}+alpha_{j2}+alpha_{j3}+2alpha_{r+1}+2sum_J alpha_j:
// returns (j1, j2, j3) and J, or false.
bool phi2_parameters(const Root& a, std::vector<int>& triple, std::vector<int>& J);
// w_{j1} w_{j2} w_{j3} w_{r+1} prod_{j in J} w_j.
WeylWord phi2_word(const std::vector<int>& triple, const std::vector<int>& J, int r);

struct WstarReport {
  bool negative_class_ok = false;
  bool positive_class_ok = false;
  int inversions = 0;
  int length = 0;
  int roots_checked = 0;
  std::vector<Root> negative_class;
};

// Checks the sign pattern of w* = w_12 w_13 w_23, w_ij = w_i w_j w_{r+1} w_i w_j,
// on all positive real roots up to the height bound.
WstarReport wstar_inequality_check(int r, int height_bound);
std::vector<int> wstar_word(int r);

struct LemmaReport {
  bool bound_ok = true;       // k_i <= k_{r+1}
  bool implication_ok = true; // (*) implies (**) for non-simple roots
  int roots_checked = 0;
};

// Checks, for all positive real roots up to the height bound with level >= 1:
// k_i <= k_{r+1} for i <= r, and for non-simple roots with
// k_j <= k_{r+1}/2 for all j <= r, that sum_{j<=r} k_j <= 2 k_{r+1} - 1.
LemmaReport root_lemma_check(int r, int height_bound);

}  // namespace qmom
