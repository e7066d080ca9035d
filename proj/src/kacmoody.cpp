#include "qmom/kacmoody.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "qmom/config.hpp"

namespace qmom {

int root_rank(const Root& a) { return static_cast<int>(a.size()) - 1; }

int height(const Root& a) {
  int h = 0;
  for (int k : a) h += k;
  return h;
}

int level(const Root& a) { return a.back(); }

bool is_positive(const Root& a) {
  bool nz = false;
  for (int k : a) {
    if (k < 0) return false;
    nz |= k != 0;
  }
  return nz;
}

bool is_negative(const Root& a) {
  Root b(a.size());
  for (size_t i = 0; i < a.size(); ++i) b[i] = -a[i];
  return is_positive(b);
}

Root simple_root(int r, int i) {
  if (i < 1 || i > r + 1) throw DomainError("simple root index out of range");
  Root a(r + 1, 0);
  a[i - 1] = 1;
  return a;
}

std::string root_str(const Root& a) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ")";
  return os.str();
}

int cartan_entry(int r, int i, int j) {
  if (i == j) return 2;
  if (i == r + 1 || j == r + 1) return -1;
  return 0;
}

mpz_class cartan_det(int r) {
  int n = r + 1;
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = cartan_entry(r, i + 1, j + 1);
  // Bareiss
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

mpz_class cartan_det_formula(int r) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, r - 1);
  return -p * (r - 4);
}

Root reflect(int i, const Root& a) {
  int r = root_rank(a);
  if (i < 1 || i > r + 1) throw DomainError("reflection index out of range");
  Root b = a;
  if (i <= r) {
    b[i - 1] = a[r] - a[i - 1];
  } else {
    int s = 0;
    for (int l = 0; l < r; ++l) s += a[l];
    b[r] = s - a[r];
  }
  return b;
}

static bool root_less(const Root& a, const Root& b) {
  int ha = height(a), hb = height(b);
  if (ha != hb) return ha < hb;
  return a < b;
}

std::vector<Root> positive_real_roots(int r, int height_bound) {
  if (r < 1) throw DomainError("rank must be positive");
  std::set<Root> seen;
  std::deque<Root> queue;
  for (int i = 1; i <= r + 1; ++i) {
    Root s = simple_root(r, i);
    if (height_bound >= 1 && seen.insert(s).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    Root a = queue.front();
    queue.pop_front();
    for (int i = 1; i <= r + 1; ++i) {
      Root b = reflect(i, a);
      if (!is_positive(b) || height(b) > height_bound) continue;
      if (seen.insert(b).second) queue.push_back(b);
    }
  }
  std::vector<Root> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), root_less);
  return out;
}

int phi_height_bound(int r, int n) { return std::max(4 * n + r, (r + 1) * n); }

std::vector<Root> enumerate_phi(int r, int n, int height_bound) {
  if (n <= 0) throw DomainError("level must be positive");
  if (height_bound <= 0) height_bound = phi_height_bound(r, n);
  std::vector<Root> out;
  for (auto& a : positive_real_roots(r, height_bound))
    if (level(a) == n) out.push_back(a);
  return out;
}

std::string WeylWord::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < letters.size(); ++i) os << (i ? "," : "") << letters[i];
  os << ")";
  return os.str();
}

Root apply_word(const std::vector<int>& letters, Root a) {
  for (size_t m = letters.size(); m-- > 0;) a = reflect(letters[m], a);
  return a;
}

std::vector<Root> inversion_set(const std::vector<int>& letters, int r) {
  std::vector<Root> out;
  int k = static_cast<int>(letters.size());
  for (int m = 0; m < k; ++m) {
    Root b = simple_root(r, letters[m]);
    for (int j = m + 1; j < k; ++j) b = reflect(letters[j], b);
    out.push_back(b);
  }
  return out;
}

static bool inversions_positive(const std::vector<int>& letters, int r) {
  for (auto& b : inversion_set(letters, r))
    if (!is_positive(b)) return false;
  return true;
}

WeylWord weyl_word(const Root& a) {
  if (!is_positive(a)) throw DomainError("weyl_word needs a positive root");
  int r = root_rank(a);
  std::vector<int> descent;
  Root cur = a;
  Root target = simple_root(r, r + 1);
  while (cur != target) {
    if (height(cur) == 1) {
      int j = static_cast<int>(std::find(cur.begin(), cur.end(), 1) - cur.begin()) + 1;
      descent.push_back(r + 1);
      descent.push_back(j);
      cur = target;
      break;
    }
    int h = height(cur);
    bool moved = false;
    for (int i = 1; i <= r + 1; ++i) {
      Root b = reflect(i, cur);
      if (height(b) < h) {
        if (!is_positive(b)) throw DomainError("descent left the positive cone: not a real root");
        cur = b;
        descent.push_back(i);
        moved = true;
        break;
      }
    }
    if (!moved) throw DomainError("no height-lowering reflection: " + root_str(a) + " is not a real root");
  }
  WeylWord w;
  w.letters.assign(descent.rbegin(), descent.rend());
  // outer letters commute pairwise; sort each maximal run
  for (size_t i = 0; i < w.letters.size();) {
    size_t j = i;
    while (j < w.letters.size() && w.letters[j] <= r) ++j;
    std::sort(w.letters.begin() + i, w.letters.begin() + j);
    i = j + 1;
  }
  w.certified_reduced = inversions_positive(w.letters, r);
  return w;
}

bool phi2_parameters(const Root& a, std::vector<int>& triple, std::vector<int>& J) {
  int r = root_rank(a);
  triple.clear();
  J.clear();
  if (level(a) != 2) return false;
  for (int i = 0; i < r; ++i) {
    if (a[i] == 1) triple.push_back(i + 1);
    else if (a[i] == 2) J.push_back(i + 1);
    else if (a[i] != 0) return false;
  }
  return triple.size() == 3;
}

WeylWord phi2_word(const std::vector<int>& triple, const std::vector<int>& J, int r) {
  WeylWord w;
  w.letters = triple;
  w.letters.push_back(r + 1);
  for (int j : J) w.letters.push_back(j);
  w.certified_reduced = inversions_positive(w.letters, r);
  return w;
}

std::vector<int> wstar_word(int r) {
  std::vector<int> w;
  auto wij = [&](int i, int j) {
    for (int l : {i, j, r + 1, i, j}) w.push_back(l);
  };
  wij(1, 2);
  wij(1, 3);
  wij(2, 3);
  return w;
}

WstarReport wstar_inequality_check(int r, int height_bound) {
  if (r < 4) throw DomainError("wstar check needs r >= 4");
  WstarReport rep;
  std::vector<int> w = wstar_word(r);
  rep.length = static_cast<int>(w.size());
  std::set<Root> expected;
  for (int i = 1; i <= 3; ++i) expected.insert(simple_root(r, i));
  for (int mask = 1; mask < 8; ++mask) {
    Root b(r + 1, 0);
    for (int k = 0; k < 3; ++k) b[k] = (mask >> k) & 1;
    b[r] = 1;
    expected.insert(b);
  }
  {
    Root b(r + 1, 0);
    b[0] = b[1] = b[2] = 1;
    b[r] = 2;
    expected.insert(b);
  }
  rep.positive_class_ok = true;
  std::set<Root> neg;
  for (auto& a : positive_real_roots(r, height_bound)) {
    ++rep.roots_checked;
    Root img = apply_word(w, a);
    if (is_negative(img)) {
      neg.insert(a);
      continue;
    }
    int lhs = a[0] + a[1] + a[2], rhs = 0;
    for (int k = 3; k < r; ++k) rhs += a[k];
    if (lhs > 6 * rhs) rep.positive_class_ok = false;
  }
  rep.negative_class.assign(neg.begin(), neg.end());
  rep.inversions = static_cast<int>(neg.size());
  rep.negative_class_ok = neg == expected;
  return rep;
}

LemmaReport root_lemma_check(int r, int height_bound) {
  LemmaReport rep;
  for (auto& a : positive_real_roots(r, height_bound)) {
    ++rep.roots_checked;
    int n = level(a);
    if (n < 1) continue;
    bool star = true;
    int s = 0;
    for (int j = 0; j < r; ++j) {
      if (a[j] > n) rep.bound_ok = false;
      if (2 * a[j] > n) star = false;
      s += a[j];
    }
    if (star && height(a) > 1 && s > 2 * n - 1) rep.implication_ok = false;
  }
  return rep;
}

}  // namespace qmom
