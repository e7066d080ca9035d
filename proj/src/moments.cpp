#include "qmom/moments.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "qmom/ffpoly.hpp"
#include "qmom/lfunc.hpp"

namespace qmom {

namespace {

using i128 = __int128;

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? -r : r;
}

// sum_k c_k s^k at s = q^{-1/2} -> (a, b) with value a + b sqrt(q)
void split_sqrt(const std::vector<mpz_class>& c, long q, mpq_class& a, mpq_class& b) {
  a = 0;
  b = 0;
  for (size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), q, (k + 1) / 2);
    mpq_class term(c[k], den);
    term.canonicalize();
    if (k % 2) b += term;
    else a += term;
  }
}

template <class Acc>
struct Slab {
  std::vector<Acc> acc;
  std::uint64_t count = 0;
};

template <class Acc>
void run_slab(long q, int r, int D, std::uint64_t lo, std::uint64_t hi, bool translated, bool use_fe, Slab<Acc>& out) {
  const PrimeField& F = prime_field(static_cast<int>(q));
  LEngine eng(static_cast<int>(q), D, use_fe);
  int L = D - 1;  // L-polynomial degree bound
  std::vector<std::int64_t> a(D);
  std::vector<Acc> pw(r * L + 1), tmp(r * L + 1);
  out.acc.assign(r * L + 1, Acc(0));
  std::vector<int> d(D + 1, 0);
  d[D] = 1;
  int free_digits = translated ? D - 1 : D;
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    std::uint64_t t = idx;
    for (int i = 0; i < free_digits; ++i) {
      d[i] = static_cast<int>(t % q);
      t /= q;
    }
    if (D >= 2 && !squarefree_kernel(F, d.data(), D)) continue;
    ++out.count;
    eng.coeffs(d.data(), a.data());
    // pw = a^r
    int deg = L;
    for (int k = 0; k <= L; ++k) pw[k] = Acc(a[k]);
    for (int e = 1; e < r; ++e) {
      int nd = deg + L;
      for (int k = 0; k <= nd; ++k) tmp[k] = Acc(0);
      for (int i = 0; i <= deg; ++i) {
        if (pw[i] == 0) continue;
        for (int j = 0; j <= L; ++j)
          if (a[j]) tmp[i + j] += pw[i] * Acc(a[j]);
      }
      deg = nd;
      for (int k = 0; k <= deg; ++k) pw[k] = tmp[k];
    }
    for (int k = 0; k <= deg; ++k) out.acc[k] += pw[k];
  }
}

template <class Acc>
std::vector<mpz_class> accumulate(long q, int r, int D, std::uint64_t n_reps, bool translated, bool use_fe, int threads) {
  int T = static_cast<int>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n_reps, 1)));
  std::vector<Slab<Acc>> slabs(T);
  std::vector<std::thread> pool;
  std::uint64_t chunk = (n_reps + T - 1) / T;
  for (int w = 0; w < T; ++w) {
    std::uint64_t lo = std::min(n_reps, w * chunk), hi = std::min(n_reps, lo + chunk);
    if (T == 1) {
      run_slab<Acc>(q, r, D, lo, hi, translated, use_fe, slabs[w]);
    } else {
      pool.emplace_back([=, &slabs] { run_slab<Acc>(q, r, D, lo, hi, translated, use_fe, slabs[w]); });
    }
  }
  for (auto& th : pool) th.join();
  std::vector<mpz_class> total(r * (D - 1) + 1, 0);
  std::uint64_t count = 0;
  for (auto& s : slabs) {
    count += s.count;
    for (size_t k = 0; k < total.size(); ++k) {
      if constexpr (std::is_same_v<Acc, i128>)
        total[k] += to_mpz(s.acc[k]);
      else
        total[k] += s.acc[k];
    }
  }
  total.push_back(mpz_class(static_cast<unsigned long>(count)));  // count rides along at the end
  return total;
}

}  // namespace

KNum MomentRow::as_knum() const {
  KNum t2 = KNum::t(q) * KNum::t(q);
  return KNum(q, QI(a)) + KNum(q, QI(b)) * t2;
}

std::uint64_t squarefree_count(long q, int D) {
  if (D == 0) return 1;
  if (D == 1) return q;
  return ipow_u64(q, D) - ipow_u64(q, D - 1);
}

MomentRow moment(long q, int r, int D, const MomentOptions& opts) {
  require_admissible_q(q);
  if (r < 1) throw DomainError("moment order r must be positive");
  if (D < 0) throw DomainError("degree D must be non-negative");
  auto t0 = std::chrono::steady_clock::now();
  MomentRow row;
  row.q = q;
  row.r = r;
  row.D = D;
  if (D == 0) {
    KNum v = pow(l_at_half(FqPoly::constant(static_cast<int>(q), 1)), r);
    auto ab = qsqrt_pair(v);
    row.a = ab.first;
    row.b = ab.second;
    row.count = 1;
    row.backend = "closed";
  } else {
    long double ops = std::pow(static_cast<long double>(q), 2.0L * D - 1);
    if (!opts.allow_large && ops > static_cast<long double>(opts.op_budget))
      throw BudgetError("moment q=" + std::to_string(q) + " D=" + std::to_string(D) +
                        " exceeds the operation budget; pass allow_large to proceed");
    bool translated = opts.use_translation && (D % q != 0);
    std::uint64_t n_reps = ipow_u64(q, translated ? D - 1 : D);
    std::uint64_t mult = translated ? static_cast<std::uint64_t>(q) : 1;
    int threads = resolve_threads(opts.threads);
    // |a_n| <= q^n gives a rigorous size bound for the int128 path.
    long double sum_bound = 0;
    for (int n = 0; n < D; ++n) sum_bound += std::pow(static_cast<long double>(q), n);
    long double bits = r * std::log2(sum_bound) + std::log2(static_cast<long double>(n_reps) + 1);
    std::vector<mpz_class> total;
    if (bits < 125) {
      total = accumulate<i128>(q, r, D, n_reps, translated, opts.use_functional_equation, threads);
      row.backend = "int128";
    } else {
      total = accumulate<mpz_class>(q, r, D, n_reps, translated, opts.use_functional_equation, threads);
      row.backend = "gmp";
    }
    row.count = total.back().get_ui() * mult;
    total.pop_back();
    for (auto& c : total) c *= static_cast<unsigned long>(mult);
    split_sqrt(total, q, row.a, row.b);
  }
  row.value = qsqrt_to_double(row.a, row.b, q);
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

MomentRow moment_naive(long q, int r, int D) {
  require_admissible_q(q);
  auto t0 = std::chrono::steady_clock::now();
  int qi = static_cast<int>(q);
  MomentRow row;
  row.q = q;
  row.r = r;
  row.D = D;
  row.backend = "naive";
  KNum total(q);
  KNum s = KNum::t(q).inv() * KNum::t(q).inv();  // q^{-1/2}
  for_each_monic(qi, D, [&](const FqPoly& d) {
    if (!is_squarefree(d)) return;
    ++row.count;
    KNum L(q);
    if (D == 0) {
      L = l_at_half(d);
    } else {
      KNum sp = KNum::from_int(q, 1);
      for (int n = 0; n < D; ++n) {
        long an = 0;
        for_each_monic(qi, n, [&](const FqPoly& m) { an += quadratic_symbol(d, m); });
        L += KNum::from_int(q, an) * sp;
        sp *= s;
      }
    }
    total += pow(L, r);
  });
  auto ab = qsqrt_pair(total);
  row.a = ab.first;
  row.b = ab.second;
  row.value = qsqrt_to_double(row.a, row.b, q);
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::vector<KNum> generating_series(long q, int r, int D_max, const MomentOptions& opts) {
  std::vector<KNum> out;
  for (int D = 0; D <= D_max; ++D) out.push_back(moment(q, r, D, opts).as_knum());
  return out;
}

std::complex<double> generating_series_value(long q, int r, int D_max, std::complex<double> xi,
                                             const MomentOptions& opts) {
  std::complex<double> acc = 0, xp = 1;
  for (int D = 0; D <= D_max; ++D) {
    acc += moment(q, r, D, opts).value * xp;
    xp *= xi;
  }
  return acc;
}

std::vector<ResidualRow> residual_table(const std::vector<MomentRow>& moments,
                                        const std::vector<std::vector<std::complex<double>>>& predictions,
                                        double theta) {
  if (predictions.size() != moments.size()) throw DomainError("residual_table: one prediction list per moment row required");
  std::vector<ResidualRow> out;
  for (size_t i = 0; i < moments.size(); ++i) {
    ResidualRow row;
    row.moment = moments[i];
    row.q_n = predictions[i];
    double q = static_cast<double>(row.moment.q);
    int D = row.moment.D;
    std::complex<double> pred = 0;
    for (size_t n = 1; n <= row.q_n.size(); ++n)
      pred += row.q_n[n - 1] * std::pow(q, (0.5 + 0.5 / static_cast<double>(n)) * D);
    row.prediction = pred.real();
    row.residual = row.moment.value - row.prediction;
    row.normalized = row.residual / std::pow(q, D * (1 + theta) / 2);
    out.push_back(row);
  }
  return out;
}

std::string residual_csv_header(int N) {
  std::ostringstream os;
  os << "q,r,D,moment_a,moment_b,moment_float";
  for (int n = 1; n <= N; ++n) os << ",Q" << n << "_re,Q" << n << "_im";
  os << ",prediction,residual,normalized";
  return os.str();
}

std::string residual_csv_row(const ResidualRow& row) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << row.moment.q << "," << row.moment.r << "," << row.moment.D << "," << row.moment.a.get_str() << ","
     << row.moment.b.get_str() << "," << row.moment.value;
  for (auto& v : row.q_n) os << "," << v.real() << "," << v.imag();
  os << "," << row.prediction << "," << row.residual << "," << row.normalized;
  return os.str();
}

std::string moments_csv_header() { return "q,r,D,moment_a,moment_b,moment_float,count,seconds"; }

std::string moments_csv_row(const MomentRow& row) {
  std::ostringstream os;
  os << row.q << "," << row.r << "," << row.D << "," << row.a.get_str() << "," << row.b.get_str() << ","
     << std::setprecision(17) << row.value << "," << row.count << "," << std::setprecision(4) << std::fixed
     << row.seconds;
  return os.str();
}

}  // namespace qmom
