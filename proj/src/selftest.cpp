#include "qmom/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "qmom/cocycle.hpp"
#include "qmom/config.hpp"
#include "qmom/ffpoly.hpp"
#include "qmom/kacmoody.hpp"
#include "qmom/lfunc.hpp"
#include "qmom/moments.hpp"
#include "qmom/predictor.hpp"

namespace qmom {

namespace {

using clock_t_ = std::chrono::steady_clock;

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

long binom(int n, int k) {
  long b = 1;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b;
}

KNum rand_k(std::mt19937_64& rng, long q) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  std::array<QI, 4> c;
  for (int k = 0; k < 4; ++k) {
    mpq_class re(num(rng), den(rng)), im(k == 0 ? mpq_class(num(rng), den(rng)) : mpq_class(0));
    c[k] = QI(re, im);
  }
  return KNum(q, c);
}

KNum rand_nonzero(std::mt19937_64& rng, long q) {
  KNum v;
  do v = rand_k(rng, q);
  while (v.is_zero());
  return v;
}

std::vector<KNum> rand_kpoint(std::mt19937_64& rng, long q, int r) {
  std::vector<KNum> z;
  for (int i = 0; i <= r; ++i) z.push_back(rand_nonzero(rng, q));
  return z;
}

// Criterion 1
CriterionResult c_dual_oracle() {
  CriterionResult res;
  res.title = "dual oracle q=5, r<=4, D<=4";
  auto t0 = clock_t_::now();
  int checked = 0, bad = 0;
  for (int r = 1; r <= 4; ++r)
    for (int D = 1; D <= 4; ++D) {
      MomentRow naive = moment_naive(5, r, D);
      for (int variant = 0; variant < 2; ++variant) {
        MomentOptions mo;
        mo.use_functional_equation = variant == 0;
        mo.use_translation = variant == 0;
        MomentRow fast = moment(5, r, D, mo);
        ++checked;
        if (fast.a != naive.a || fast.b != naive.b || fast.count != naive.count) ++bad;
      }
    }
  res.seconds = std::chrono::duration<double>(clock_t_::now() - t0).count();
  res.passed = bad == 0 && res.seconds < 60;
  res.detail = std::to_string(checked) + " comparisons, " + std::to_string(bad) + " mismatches";
  return res;
}

// Criterion 2
CriterionResult c_functional_equation(std::uint64_t seed) {
  CriterionResult res;
  res.title = "functional equation q in {5,13}, deg d <= 4";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-1.5, 2.5), im(-6, 6);
  double worst = 0;
  long n = 0;
  for (int q : {5, 13})
    for (int deg = 1; deg <= 4; ++deg)
      for (const auto& d : enumerate_monic(q, deg, MonicFilter::Squarefree))
        for (int k = 0; k < 10; ++k) {
          std::complex<double> s(re(rng), im(rng));
          double L = std::abs(l_at(s, d));
          double err = std::abs(functional_equation_residual(d, s)) / (1 + L);
          worst = std::max(worst, err);
          ++n;
        }
  res.passed = worst <= 1e-10;
  res.detail = std::to_string(n) + " evaluations, max scaled residual " + fmt(worst);
  return res;
}

// Criterion 3
CriterionResult c_roots() {
  CriterionResult res;
  res.title = "root counts, level-two parametrization, coefficient bound, r=3..7";
  auto t0 = clock_t_::now();
  bool ok = true;
  std::ostringstream det;
  for (int r = 3; r <= 7; ++r) {
    auto phi1 = enumerate_phi(r, 1);
    auto phi2 = enumerate_phi(r, 2);
    bool counts = phi1.size() == (1UL << r) && static_cast<long>(phi2.size()) == binom(r, 3) * (1L << (r - 3));
    bool param = true;
    for (auto& a : phi2) {
      std::vector<int> tr, J;
      if (!phi2_parameters(a, tr, J)) param = false;
    }
    bool bound = true;
    for (const auto* set : {&phi1, &phi2})
      for (auto& a : *set)
        for (int i = 0; i < r; ++i)
          if (a[i] > a[r]) bound = false;
    auto lem = root_lemma_check(r, 3 * (r + 1));
    bound = bound && lem.bound_ok && lem.implication_ok;
    ok = ok && counts && param && bound;
    det << " r=" << r << ":" << phi1.size() << "/" << phi2.size();
  }
  res.seconds = std::chrono::duration<double>(clock_t_::now() - t0).count();
  res.passed = ok && res.seconds < 10;
  res.detail = "|Phi1|/|Phi2|" + det.str();
  return res;
}

// Retries a randomized exact check when a sample hits a singular point.
template <class Fn>
int exact_trials(int want, Fn fn) {
  int done = 0, attempts = 0;
  while (done < want && attempts < 10 * want) {
    ++attempts;
    try {
      fn();
      ++done;
    } catch (const DomainError&) {
    }
  }
  return done;
}

// Criterion 4
CriterionResult c_cocycle(std::uint64_t seed) {
  CriterionResult res;
  res.title = "cocycle braid pairs, inverse law, U^2 = I (exact)";
  std::mt19937_64 rng(seed);
  bool ok = true;
  int relations = 0;
  const int r = 4;
  for (long q : {5L, 13L}) {
    auto s = k_scalars(q);
    auto I = mat_identity(s);
    ok = ok && mat_mul(U_matrix(s), U_matrix(s)) == I;
    // each relation gets its own 20 points
    for (int i = 1; i <= r; ++i) {
      for (int j = i + 1; j <= r; ++j) {
        int got = exact_trials(20, [&] {
          auto z = rand_kpoint(rng, q, r);
          ok = ok && cocycle<KNum>({i, j}, z, s) == cocycle<KNum>({j, i}, z, s);
        });
        ok = ok && got == 20;
        ++relations;
      }
      int got = exact_trials(20, [&] {
        auto z = rand_kpoint(rng, q, r);
        ok = ok && cocycle<KNum>({i, r + 1, i}, z, s) == cocycle<KNum>({r + 1, i, r + 1}, z, s);
      });
      ok = ok && got == 20;
      ++relations;
    }
    for (int i = 1; i <= r + 1; ++i) {
      int got = exact_trials(20, [&] {
        auto z = rand_kpoint(rng, q, r);
        ok = ok && mat_mul(cocycle<KNum>({i}, z, s), cocycle<KNum>({i}, act_word<KNum>({i}, z, s), s)) == I;
      });
      ok = ok && got == 20;
      ++relations;
    }
  }
  res.passed = ok;
  res.detail = std::to_string(relations) + " relations x 20 points, q in {5,13}, r=4";
  return res;
}

// Criterion 5
CriterionResult c_gamma_table() {
  CriterionResult res;
  res.title = "Gamma table polynomials in q^(1/4)";
  const long e1[9] = {1, 1, 10, 7, 20, 7, 10, 1, 1};
  const QI ei[9] = {QI(1), QI(0, -1), QI(-4), QI(0, 7), QI(6), QI(0, -7), QI(-4), QI(0, 1), QI(1)};
  bool ok = true;
  for (int zp = 0; zp < 4; ++zp) {
    auto p = gamma_table_polynomial(zp);
    for (int k = 0; k < 9; ++k) {
      QI want;
      if (zp == 0) want = QI(e1[k]);
      else if (zp == 2) want = QI(k % 2 ? -e1[k] : e1[k]);
      else if (zp == 1) want = ei[k];
      else want = ei[k].conj();
      if (!(p[k] == want)) ok = false;
    }
    // the exact K value at q = 5 is the polynomial at t = 5^(1/4)
    KNum t = KNum::t(5), acc(5), tp = KNum::from_int(5, 1);
    for (int k = 0; k < 9; ++k) {
      acc += KNum(5, p[k]) * tp;
      tp *= t;
    }
    ok = ok && gamma_table_exact(5, zp) == acc;
  }
  res.passed = ok;
  res.detail = "4 cases, 9 coefficients each";
  return res;
}

// Criterion 6
CriterionResult c_closed_forms(std::uint64_t seed) {
  CriterionResult res;
  res.title = "closed forms d/e and Mbar vs generic cocycle (exact)";
  std::mt19937_64 rng(seed);
  const long q = 5;
  auto s = k_scalars(q);
  auto U = U_matrix(s);
  bool ok = true;
  int zp_cycle = 0;
  int de = exact_trials(20, [&] {
    KNum zeta = KNum::zeta(q, zp_cycle++);
    std::vector<KNum> xi = {rand_nonzero(rng, q), rand_nonzero(rng, q), rand_nonzero(rng, q)};
    auto z = phi2_point<KNum>(xi, zeta, {}, s);
    auto d = closed::d_coeffs(xi[0], xi[1], xi[2], zeta, s);
    auto e = closed::e_coeffs(xi[0], xi[1], xi[2], zeta, s);
    auto Md = mat_inv(cocycle<KNum>({1, 2, 3}, act_word<KNum>({4}, z, s), s));
    auto Me = mat_inv(cocycle<KNum>({4}, z, s));
    ok = ok && Md == mat_diag(d[0], d[1], d[2], s);
    ok = ok && Me == mat_mul(mat_mul(U, mat_diag(e[0], e[1], e[2], s)), U);
  });
  int mb = exact_trials(20, [&] {
    auto z = rand_kpoint(rng, q, 3);
    ok = ok && cocycle_bar<KNum>({1, 2, 3, 4}, z, s) == closed::mbar_wprime(z[0], z[1], z[2], z[3], s);
  });
  res.passed = ok && de == 20 && mb == 20;
  res.detail = std::to_string(de) + " d/e points, " + std::to_string(mb) + " Mbar points, q=5";
  return res;
}

// Criterion 7
CriterionResult c_pr_series() {
  CriterionResult res;
  res.title = "P_r series r=4..8 and P(1,y) factorization";
  bool ok = true;
  for (int r = 4; r <= 8; ++r) {
    auto c = p_r_series(r, 4);
    mpq_class c4(-(r * r * r * r + 12 * r * r * r + 59 * r * r - 696 * r + 1164), 12);
    c4.canonicalize();
    std::vector<mpq_class> want = {1, 0, 0, mpq_class(-14 * (r - 2)), c4};
    for (size_t k = 0; k < want.size(); ++k)
      if (k >= c.size() || c[k] != want[k]) ok = false;
  }
  auto ex = p_one_y_expanded(), fa = p_one_y_factored();
  ok = ok && ex.size() == fa.size();
  for (size_t k = 0; ok && k < ex.size(); ++k) ok = ex[k] == fa[k];
  res.passed = ok;
  res.detail = "P(1,y) has degree " + std::to_string(static_cast<int>(ex.size()) - 1);
  return res;
}

// Criterion 8
CriterionResult c_constants() {
  CriterionResult res;
  res.title = "triple integral = -48, binomial determinants r=4..10";
  Cd v = triple_integral_quadrature(0.1, 64);
  double err = std::abs(v - Cd(-48));
  bool dets = true;
  for (int r = 4; r <= 10; ++r) {
    int e = (r - 3) * (r - 4) / 2;
    mpz_class want = 1;
    for (int k = 0; k < e; ++k) want *= -2;
    if (binomial_determinant(r) != want) dets = false;
  }
  res.passed = err <= 1e-6 && dets && triple_integral_exact() == -48;
  res.detail = "|I + 48| = " + fmt(err) + (dets ? ", determinants exact" : ", determinant mismatch");
  return res;
}

// Criterion 9
CriterionResult c_lemmas(std::uint64_t seed) {
  CriterionResult res;
  res.title = "sum-to-integral lemmas, 100 instances each";
  auto t0 = clock_t_::now();
  auto a = lemma71_check(100, seed);
  auto b = mlemma_check(100, seed + 1);
  res.seconds = std::chrono::duration<double>(clock_t_::now() - t0).count();
  res.passed = a.instances == 100 && b.instances == 100 && a.max_rel_error <= 1e-8 && b.max_rel_error <= 1e-8 &&
               res.seconds < 300;
  res.detail = "max rel error " + fmt(a.max_rel_error) + " / " + fmt(b.max_rel_error);
  return res;
}

double rel(Cd a, Cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Criterion 10. Q_2 itself depends on D mod 4 through zeta^D, so the fit is
// done for each per-zeta piece U_zeta(D) separately.
CriterionResult c_q2_structure(const SelftestOptions& o) {
  CriterionResult res;
  res.title = "Q_2 polynomial structure q=5, r=4, D=20..40, N=" + std::to_string(o.quad_n);
  std::vector<int> Ds;
  for (int D = 20; D <= 40; ++D) Ds.push_back(D);
  QuadratureSpec qs;
  qs.rho = 0.1;
  qs.n = o.quad_n;
  qs.threads = o.threads;
  auto q2 = q2_coefficients(5, 4, Ds, o.pmax, qs);
  auto lc = q2_leading_coefficient(5, 4, o.pmax);
  bool ok = lc.degree == 7;
  double worst_fit = 0, worst_lead = 0, worst_d8 = 0;
  for (int z = 0; z < 4; ++z) {
    auto f = fit_polynomial(Ds, q2.per_zeta[z], 7);
    auto f8 = fit_polynomial(Ds, q2.per_zeta[z], 8);
    double d8 = std::abs(f8.coeffs[8]) * std::pow(40.0, 8) / std::abs(q2.per_zeta[z].back());
    worst_fit = std::max(worst_fit, f.rel_residual);
    worst_lead = std::max(worst_lead, rel(f.coeffs[7], lc.per_zeta[z]));
    worst_d8 = std::max(worst_d8, d8);
  }
  ok = ok && worst_fit <= 1e-4 && worst_lead <= 0.01 && worst_d8 <= 1e-6;
  res.passed = ok;
  res.detail = "fit residual " + fmt(worst_fit) + ", leading rel diff " + fmt(worst_lead) + ", D^8 share " +
               fmt(worst_d8) + ", tail " + fmt(lc.euler_tail);
  return res;
}

// Criterion 11, reported only.
CriterionResult c_decay(const SelftestOptions& o) {
  CriterionResult res;
  res.title = "decay of |M_4 - Q_1 q^D| / q^(3D/4), q=5, D=3..7";
  res.gated = false;
  std::vector<int> Ds = {3, 4, 5, 6, 7};
  MomentOptions mo;
  mo.threads = o.threads;
  std::vector<MomentRow> rows;
  for (int D : Ds) rows.push_back(moment(5, 4, D, mo));
  QuadratureSpec qs;
  qs.n = o.quad_n;
  qs.threads = o.threads;
  auto q1 = q1_coefficients(5, 4, Ds, o.pmax, qs);
  std::vector<std::vector<std::complex<double>>> pred;
  for (auto& v : q1.value) pred.push_back({v});
  auto table = residual_table(rows, pred, 0.5);
  bool bounded = true, nonincreasing = true;
  res.table.push_back(residual_csv_header(1));
  for (size_t k = 0; k < table.size(); ++k) {
    res.table.push_back(residual_csv_row(table[k]));
    double a = std::abs(table[k].normalized);
    if (!std::isfinite(a)) bounded = false;
    if (k > 0 && Ds[k] > 5 && a > std::abs(table[k - 1].normalized)) nonincreasing = false;
  }
  res.passed = bounded && nonincreasing;
  res.detail = std::string(bounded ? "bounded" : "unbounded") + (nonincreasing ? ", non-increasing" : ", increasing") +
               " for D >= 5";
  return res;
}

}  // namespace

std::vector<CriterionResult> run_selftest(const SelftestOptions& o, std::ostream& out) {
  std::vector<std::pair<int, std::function<CriterionResult()>>> all = {
      {1, [] { return c_dual_oracle(); }},
      {2, [&] { return c_functional_equation(o.seed); }},
      {3, [] { return c_roots(); }},
      {4, [&] { return c_cocycle(o.seed + 1); }},
      {5, [] { return c_gamma_table(); }},
      {6, [&] { return c_closed_forms(o.seed + 2); }},
      {7, [] { return c_pr_series(); }},
      {8, [] { return c_constants(); }},
      {9, [&] { return c_lemmas(o.seed + 3); }},
      {10, [&] { return c_q2_structure(o); }},
      {11, [&] { return c_decay(o); }},
  };
  std::vector<CriterionResult> results;
  for (auto& [id, fn] : all) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), id) == o.only.end()) continue;
    auto t0 = clock_t_::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = id;
    double el = std::chrono::duration<double>(clock_t_::now() - t0).count();
    if (r.seconds == 0) r.seconds = el;
    std::string verdict = r.passed ? "PASS" : "FAIL";
    if (!r.gated) verdict += " (reported, not gated)";
    out << "criterion " << std::setw(2) << id << ": " << verdict << "  " << r.title << "  [" << r.detail << "; "
        << std::fixed << std::setprecision(1) << r.seconds << " s]" << std::defaultfloat << "\n";
    for (auto& line : r.table) out << "    " << line << "\n";
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

bool selftest_ok(const std::vector<CriterionResult>& results) {
  for (auto& r : results)
    if (r.gated && !r.passed) return false;
  return true;
}

}  // namespace qmom
