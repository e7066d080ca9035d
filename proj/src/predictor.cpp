#include "qmom/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include "qmom/cocycle.hpp"
#include "qmom/exactnum.hpp"

namespace qmom {

namespace {

using R = long double;
using C = std::complex<R>;

constexpr R kPi = std::numbers::pi_v<R>;

C cl(const Cd& z) { return C(z.real(), z.imag()); }
Cd cd(const C& z) { return Cd(static_cast<double>(z.real()), static_cast<double>(z.imag())); }

template <class T>
std::vector<T> to_t(const std::vector<Cd>& v) {
  std::vector<T> out;
  out.reserve(v.size());
  for (auto& x : v) out.emplace_back(x.real(), x.imag());
  return out;
}

template <class T>
T ipow(T x, int e) {
  T r(1);
  bool neg = e < 0;
  unsigned u = neg ? -e : e;
  while (u) {
    if (u & 1) r *= x;
    x *= x;
    u >>= 1;
  }
  return neg ? T(1) / r : r;
}

template <class T>
T pow_count(const T& x, double n) {
  // x^n for a non-negative integer n; exp(n log x) is exact up to rounding
  if (n <= 64) return ipow(x, static_cast<int>(n));
  using V = typename T::value_type;
  return std::exp(static_cast<V>(n) * std::log(x));
}

template <class T>
Scalars<T> scalars_for(long q) {
  using V = typename T::value_type;
  return c_scalars<V>(static_cast<V>(q));
}

// A_p for deg p = k with Q = q^k and x = xi^k.
template <class T>
T a_local(const Scalars<T>& sk, const std::vector<T>& x) {
  size_t r = x.size();
  T one(1), pre(1), pm(1), pp(1);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i; j < r; ++j) pre *= one - x[i] * x[j] / sk.q;
  for (size_t i = 0; i < r; ++i) {
    T y = x[i] / sk.sq;
    pm *= one - y;
    pp *= one + y;
  }
  return pre * (one + (T(-2) + one / pm + one / pp) / (T(2) * (one + one / sk.q)));
}

template <class T>
T s_reg_local(const Scalars<T>& sk, const std::vector<T>& x, const T& zk, const T& chi) {
  size_t r = x.size();
  T one(1);
  T S = closed::s_p_wprime(x, zk, chi, sk);
  T y1 = zk * x[1] * x[2] / (sk.q4 * x[0]);
  T y2 = zk * x[0] * x[2] / (sk.q4 * x[1]);
  T y3 = zk * x[0] * x[1] / (sk.q4 * x[2]);
  T y[3] = {y1, y2, y3};
  T rinv = one - sk.q * y1 * y1 * y2 * y2 * y3 * y3;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) rinv *= one - y[i] * y[j];
  T blocks(1);
  for (int i = 0; i < 3; ++i)
    for (size_t j = 3; j < r; ++j) {
      T xi2 = x[i] * x[i], xj2 = x[j] * x[j];
      blocks *= (one - xi2 * xj2 / sk.q) * (one - xj2 / (xi2 * sk.q));
    }
  for (size_t k = 3; k < r; ++k)
    for (size_t l = k; l < r; ++l) blocks *= one - x[k] * x[k] * x[l] * x[l] / sk.q;
  return S * rinv * blocks;
}

template <class T>
std::vector<T> powered(const std::vector<T>& xi, int k) {
  std::vector<T> x(xi.size());
  for (size_t i = 0; i < xi.size(); ++i) x[i] = ipow(xi[i], k);
  return x;
}

template <class T>
T s_reg_deg_t(long q, int k, const std::vector<T>& xi, const T& zeta) {
  if (xi.size() < 3) throw DomainError("S_p^reg needs r >= 3");
  Scalars<T> sk = scalars_for<T>(q).power(k);
  T zk = ipow(zeta, k);
  T chi = ipow(zeta * zeta, k);
  return s_reg_local(sk, powered(xi, k), zk, chi);
}

template <class T>
T a_prod(long q, const std::vector<T>& xi, int pmax) {
  Scalars<T> s = scalars_for<T>(q);
  T prod(1);
  for (int k = 1; k <= pmax; ++k) prod *= pow_count(a_local(s.power(k), powered(xi, k)), irreducible_count(q, k));
  return prod;
}

template <class T>
T s_reg_prod(long q, const std::vector<T>& xi, const T& zeta, int pmax) {
  T prod(1);
  for (int k = 1; k <= pmax; ++k) prod *= pow_count(s_reg_deg_t(q, k, xi, zeta), irreducible_count(q, k));
  return prod;
}

// G_1 (part 1) or G_2 (part 2) at xi.
template <class T>
T g_part(long q, const std::vector<T>& xi, const T& zeta, int part, const Mat3<T>& mb) {
  Scalars<T> s = scalars_for<T>(q);
  T one(1), sg = zeta * zeta;
  T x2[3] = {xi[0] * xi[0], xi[1] * xi[1], xi[2] * xi[2]};
  T top = sg * s.sq * x2[0] * x2[1] * x2[2];
  T den = one - top;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) den *= one - top / (x2[i] * x2[j]);
  T num(1);
  if (part == 1) {
    for (auto& x : xi) num *= one - s.sq * x * x;
  } else {
    for (auto& x : xi) num *= x;
  }
  int row = part == 1 ? 0 : 1;
  T v = mb[row][0] + mb[row][1] * sg + mb[row][2];
  return num / den * v;
}

template <class T>
Mat3<T> g_matrix(long q, const std::vector<T>& xi, const T& zeta) {
  Scalars<T> s = scalars_for<T>(q);
  T z4 = T(1) / (s.q4 * s.q4 * s.q4 * zeta * xi[0] * xi[1] * xi[2]);
  return closed::mbar_wprime(xi[0] * xi[0] / s.sq, xi[1] * xi[1] / s.sq, xi[2] * xi[2] / s.sq, z4, s);
}

C zeta_power(int z) {
  static const C tab[4] = {C(1, 0), C(0, 1), C(-1, 0), C(0, -1)};
  return tab[z & 3];
}

R factorial(int n) {
  R f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Symmetric trapezoid driver. Variables are split into groups within which
// the integrand is symmetric; only non-decreasing index tuples per group are
// visited, weighted by their number of distinct rearrangements. fn fills
// `out` with the integrand values (without quadrature weights) at z.
struct SymGrid {
  std::vector<int> groups;
  int n;
  R rho;
  int threads;
};

using Integrand = std::function<void(const std::vector<C>& z, std::vector<C>& out)>;

struct GridSums {
  std::vector<C> full, half;
};

GridSums integrate(const SymGrid& g, size_t m, const Integrand& fn) {
  int dims = 0;
  for (int s : g.groups) dims += s;
  std::vector<C> node(g.n), dz(g.n);
  for (int j = 0; j < g.n; ++j) {
    R th = 2 * kPi * j / g.n;
    C e = std::polar(g.rho, th);
    node[j] = C(1) + e;
    dz[j] = e / static_cast<R>(g.n);
  }
  // per outer index partial sums, reduced in index order
  std::vector<GridSums> part(g.n, GridSums{std::vector<C>(m), std::vector<C>(m)});
  std::vector<R> fact(dims + 1, 1);
  for (int i = 1; i <= dims; ++i) fact[i] = fact[i - 1] * i;
  R half_scale = std::pow(static_cast<R>(2), dims);

  auto work = [&](int first) {
    std::vector<int> idx(dims);
    std::vector<C> z(dims), out(m);
    GridSums& acc = part[first];
    // recursive enumeration over groups
    std::function<void(int, int)> rec = [&](int pos, int lo) {
      if (pos == dims) {
        R mult = 1;
        bool even = true;
        int start = 0;
        for (int s : g.groups) {
          R mg = fact[s];
          int run = 1;
          for (int i = start + 1; i < start + s; ++i) {
            if (idx[i] == idx[i - 1]) {
              ++run;
            } else {
              mg /= fact[run];
              run = 1;
            }
          }
          mg /= fact[run];
          mult *= mg;
          start += s;
        }
        C w = mult;
        for (int i = 0; i < dims; ++i) {
          w *= dz[idx[i]];
          if (idx[i] & 1) even = false;
        }
        fn(z, out);
        for (size_t k = 0; k < m; ++k) {
          C v = w * out[k];
          acc.full[k] += v;
          if (even) acc.half[k] += half_scale * v;
        }
        return;
      }
      // start of the group containing pos
      int gs = 0;
      for (int s : g.groups) {
        if (pos < gs + s) break;
        gs += s;
      }
      int from = pos == gs ? 0 : lo;
      if (pos == 0) {
        idx[0] = first;
        z[0] = node[first];
        rec(1, first);
        return;
      }
      for (int j = from; j < g.n; ++j) {
        idx[pos] = j;
        z[pos] = node[j];
        rec(pos + 1, j);
      }
    };
    rec(0, 0);
  };

  int nt = std::max(1, std::min(resolve_threads(g.threads), g.n));
  if (nt == 1) {
    for (int f = 0; f < g.n; ++f) work(f);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (int f = t; f < g.n; f += nt) work(f);
      });
    for (auto& th : pool) th.join();
  }
  GridSums tot{std::vector<C>(m), std::vector<C>(m)};
  for (int f = 0; f < g.n; ++f)
    for (size_t k = 0; k < m; ++k) {
      tot.full[k] += part[f].full[k];
      tot.half[k] += part[f].half[k];
    }
  return tot;
}

// sum_{k > pmax} pi(k) |f(k) - 1|: a few direct terms, then a geometric
// remainder (direct terms at high degree would be pure roundoff).
double tail_estimate(long q, int pmax, const std::function<R(int)>& dev) {
  double t = 0, prev = 0, last = 0;
  for (int k = pmax + 1; k <= pmax + 4; ++k) {
    prev = last;
    last = irreducible_count(q, k) * static_cast<double>(dev(k));
    t += last;
  }
  double ratio = prev > 0 ? last / prev : 0;
  if (ratio >= 1) return std::numeric_limits<double>::infinity();
  return t + last * ratio / (1 - ratio);
}

double a_tail(long q, const std::vector<C>& x, int pmax) {
  Scalars<C> s = scalars_for<C>(q);
  return tail_estimate(q, pmax, [&](int k) { return std::abs(a_local(s.power(k), powered(x, k)) - C(1)); });
}

double s_reg_tail(long q, const std::vector<C>& x, const C& zeta, int pmax) {
  return tail_estimate(q, pmax, [&](int k) { return std::abs(s_reg_deg_t(q, k, x, zeta) - C(1)); });
}

}  // namespace

void EulerProductSpec::validate() const {
  require_admissible_q(q);
  if (pmax < 1) throw ConfigError("pmax must be at least 1");
  if (r < 1) throw ConfigError("r must be positive");
}

void QuadratureSpec::validate() const {
  if (!(rho > 0 && rho < 0.5)) throw ConfigError("contour radius must lie in (0, 0.5)");
  if (n < 2 || (n & (n - 1))) throw ConfigError("points per circle must be a power of two");
}

double irreducible_count(long q, int k) {
  if (k < 1) throw DomainError("degree must be positive");
  if (k <= 20) return static_cast<double>(count_irreducible_formula(q, k));
  // (1/k) sum_{d | k} mu(d) q^{k/d} in floating point beyond u64 range
  auto mu = [](int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
      }
    return n > 1 ? -m : m;
  };
  long double s = 0;
  for (int d = 1; d <= k; ++d)
    if (k % d == 0) s += mu(d) * std::pow(static_cast<long double>(q), k / d);
  return static_cast<double>(s / k);
}

Cd a_p_factor_deg(long q, int k, const std::vector<Cd>& xi) {
  if (k < 1) throw DomainError("irreducible of degree 0");
  return a_local(scalars_for<Cd>(q).power(k), powered(xi, k));
}

Cd a_p_factor(const FqPoly& p, const std::vector<Cd>& xi) {
  if (!is_irreducible(p)) throw DomainError("A_p needs an irreducible p");
  return a_p_factor_deg(p.q(), p.deg(), xi);
}

EulerValue big_g(long q, const std::vector<Cd>& xi, int pmax) {
  EulerProductSpec{q, static_cast<int>(xi.size()), pmax, LocalKind::A}.validate();
  auto x = to_t<C>(xi);
  C pre(1);
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = i; j < x.size(); ++j) {
      C f = C(1) - x[i] * x[j];
      if (std::abs(f) < 1e-300L) throw DomainError("pole of prod (1 - xi_i xi_j)^{-1}");
      pre /= f;
    }
  EulerValue ev;
  ev.value = cd(pre * a_prod(q, x, pmax));
  ev.tail = a_tail(q, x, pmax) * std::abs(ev.value);
  return ev;
}

Cd s_p_identity_product(long q, const std::vector<Cd>& xi, int pmax) {
  auto x = to_t<C>(xi);
  int r = static_cast<int>(x.size());
  Scalars<C> s = scalars_for<C>(q);
  C prod(1);
  for (int k = 1; k <= pmax; ++k) {
    Scalars<C> sk = s.power(k);
    std::vector<C> z(r + 1);
    for (int i = 0; i < r; ++i) z[i] = ipow(x[i], k) / sk.sq;
    z[r] = C(1) / sk.q;
    prod *= pow_count(s_p_w<C>({}, z, C(1), sk), irreducible_count(q, k));
  }
  return cd(prod);
}

Cd r_p_3(const Cd& z1, const Cd& z2, const Cd& z3, double q) {
  Cd z[3] = {z1, z2, z3};
  Cd den = 1.0 - q * z1 * z1 * z2 * z2 * z3 * z3;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) den *= 1.0 - z[i] * z[j];
  if (std::abs(den) == 0) throw SingularPoint("R^(3) singular", 0);
  return 1.0 / den;
}

Cd s_p_reg_deg(long q, int k, const std::vector<Cd>& xi, const Cd& zeta) {
  if (k < 1) throw DomainError("irreducible of degree 0");
  return cd(s_reg_deg_t(q, k, to_t<C>(xi), cl(zeta)));
}

Cd s_p_reg(const FqPoly& p, const std::vector<Cd>& xi, const Cd& zeta) {
  if (!is_irreducible(p)) throw DomainError("S_p^reg needs an irreducible p");
  return s_p_reg_deg(p.q(), p.deg(), xi, zeta);
}

EulerValue s_reg_product(long q, const std::vector<Cd>& xi, const Cd& zeta, int pmax) {
  EulerProductSpec{q, static_cast<int>(xi.size()), pmax, LocalKind::SReg}.validate();
  auto x = to_t<C>(xi);
  EulerValue ev;
  ev.value = cd(s_reg_prod(q, x, cl(zeta), pmax));
  ev.tail = s_reg_tail(q, x, cl(zeta), pmax) * std::abs(ev.value);
  return ev;
}

Cd p_xy(const Cd& x, const Cd& y) {
  Cd s = x + 1.0 / x, ix = 1.0 / x;
  Cd y2 = y * y, y3 = y2 * y, y4 = y3 * y, y5 = y4 * y, y7 = y5 * y2, y8 = y7 * y, y9 = y8 * y, y10 = y9 * y;
  Cd br = 1.0 + s * y + s * s * y2 - 4.0 * s * y3 - 5.0 * s * s * y4 + s * (3.0 * x + ix) * (x + 3.0 * ix) * y5 -
          s * (7.0 + 3.0 * x * x + 3.0 * ix * ix) * y7 + (8.0 + 5.0 * x * x + 5.0 * ix * ix) * y8 - s * y9 - y10;
  return (1.0 - y2) * (1.0 - x * y) * (1.0 - ix * y) * br;
}

namespace {

using QPoly = std::vector<mpq_class>;

QPoly qmul(const QPoly& a, const QPoly& b) {
  QPoly c(a.size() + b.size() - 1, mpq_class(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

QPoly qtrunc(QPoly a, int order) {
  a.resize(order + 1, mpq_class(0));
  return a;
}

// (1 + c t)^e as a series to t^order, any integer e.
QPoly binom_series(int c, int e, int order) {
  QPoly out(order + 1, mpq_class(0));
  mpq_class coef(1);
  mpq_class cp(1);
  for (int k = 0; k <= order; ++k) {
    out[k] = coef * cp;
    coef = coef * mpq_class(e - k) / mpq_class(k + 1);
    cp *= c;
  }
  return out;
}

}  // namespace

std::vector<mpq_class> p_one_y_expanded() {
  // x = 1: s = 2, (3x+1/x)(x+3/x) = 16, 7+3+3 = 13, 8+5+5 = 18
  QPoly br = {1, 2, 4, -8, -20, 32, 0, -26, 18, -2, -1};
  QPoly pre = qmul(qmul(QPoly{1, 0, -1}, QPoly{1, -1}), QPoly{1, -1});
  return qmul(pre, br);
}

std::vector<mpq_class> p_one_y_factored() {
  QPoly f = {1};
  for (int i = 0; i < 5; ++i) f = qmul(f, QPoly{1, -1});
  f = qmul(f, QPoly{1, 1});
  return qmul(f, QPoly{1, 4, 11, 10, -11, 0, 11, -4, -1});
}

std::vector<mpq_class> p_r_series(int r, int order) {
  if (r < 3) throw DomainError("P_r needs r >= 3");
  int e1 = (r * r + 7 * r - 14) / 2, e2 = (r * r + 7 * r - 28) / 2;
  QPoly pre = qtrunc(qmul(binom_series(-1, e1, order), binom_series(1, e2, order)), order);
  QPoly a = qmul(QPoly{0, 1, 1}, QPoly{0, 1, 6, 1});
  QPoly b = binom_series(1, 4 - r, order);
  QPoly c = qmul(binom_series(-1, -r, order), QPoly{1, 10, 20, 10, 1});
  QPoly br(order + 1, mpq_class(0));
  for (int k = 0; k <= order; ++k) {
    if (k < static_cast<int>(a.size())) br[k] += a[k];
    br[k] += b[k] / 2 + c[k] / 2;
  }
  return qtrunc(qmul(pre, br), order);
}

double p_r_value(int r, double t) {
  double e1 = (r * r + 7 * r - 14) / 2, e2 = (r * r + 7 * r - 28) / 2;
  double br = (t + t * t) * (t + 6 * t * t + t * t * t) + 0.5 * std::pow(1 + t, 4 - r) +
              0.5 * std::pow(1 - t, -r) * (1 + 10 * t + 20 * t * t + 10 * t * t * t + t * t * t * t);
  return std::pow(1 - t, e1) * std::pow(1 + t, e2) * br;
}

PredictResult q1_coefficients(long q, int r, const std::vector<int>& Ds, int pmax, const QuadratureSpec& quad) {
  EulerProductSpec{q, r, pmax, LocalKind::A}.validate();
  quad.validate();
  for (int D : Ds)
    if (D < 1) throw DomainError("D must be at least 1");
  PredictResult res;
  res.D = Ds;
  res.outside_range = r < 4;
  if (res.outside_range) res.note = "outside the r >= 4 range of the prediction";

  Scalars<C> s = scalars_for<C>(q);
  std::vector<Scalars<C>> sk;
  std::vector<double> cnt;
  for (int k = 1; k <= pmax; ++k) {
    sk.push_back(s.power(k));
    cnt.push_back(irreducible_count(q, k));
  }
  R sign = (r * (r + 1) / 2) % 2 ? -1 : 1;
  C pref = (C(1) - C(1) / s.q) * sign / factorial(r);
  C even_pref = ipow(C(1) - s.sq, -r);
  size_t m = Ds.size();

  Integrand fn = [&](const std::vector<C>& z, std::vector<C>& out) {
    C one(1);
    C A(1);
    std::vector<C> x(r);
    for (int k = 1; k <= pmax; ++k) {
      for (int i = 0; i < r; ++i) x[i] = ipow(z[i], k);
      A *= pow_count(a_local(sk[k - 1], x), cnt[k - 1]);
    }
    C ker(1), P(1), lin(1);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        C d = z[j] - z[i];
        ker *= d * d * (one - z[i] * z[j]);
      }
      ker /= ipow(one - z[i], 2 * r) * ipow(z[i], r);
      P *= z[i];
      lin *= one - s.sq * z[i];
    }
    C base = pref * A * ker;
    C ip = one / P;
    for (size_t d = 0; d < m; ++d) {
      int D = Ds[d];
      if (D % 2 == 0)
        out[d] = base * even_pref * lin * ipow(ip, D / 2);
      else
        out[d] = base * ipow(ip, (D - 1) / 2);
    }
  };
  GridSums gs = integrate(SymGrid{{r}, quad.n, static_cast<R>(quad.rho), quad.threads}, m, fn);
  for (size_t d = 0; d < m; ++d) {
    res.value.push_back(cd(gs.full[d]));
    res.delta.push_back(static_cast<double>(std::abs(gs.full[d] - gs.half[d])));
  }
  // relative tail of the A product at the central point
  res.euler_tail = a_tail(q, std::vector<C>(r, C(1)), pmax);
  return res;
}

Q2Result q2_coefficients(long q, int r, const std::vector<int>& Ds, int pmax, const QuadratureSpec& quad) {
  if (r < 4) throw DomainError("Q_2 integral needs r >= 4");
  EulerProductSpec{q, r, pmax, LocalKind::SReg}.validate();
  quad.validate();
  {
    double rho = quad.rho;
    if (!(std::pow(double(q), -2.0) < std::pow(double(q), -0.75) * std::pow(1 - rho, r - 3)))
      throw ConfigError("contour radius too large for the Q_2 integral");
  }
  for (int D : Ds)
    if (D < 1) throw DomainError("D must be at least 1");
  Q2Result res;
  res.D = Ds;
  Scalars<C> s = scalars_for<C>(q);
  R sign = (r * (r + 1) / 2) % 2 ? -1 : 1;
  C pref = sign / (32 * factorial(3) * factorial(r - 3));
  C g1_pref = ipow(C(1) - s.sq, -r);
  size_t m = Ds.size();
  std::vector<double> cnt;
  std::vector<Scalars<C>> sk;
  for (int k = 1; k <= pmax; ++k) {
    cnt.push_back(irreducible_count(q, k));
    sk.push_back(s.power(k));
  }

  Integrand fn = [&](const std::vector<C>& z, std::vector<C>& out) {
    thread_local std::vector<C> powD;
    powD.resize(m);
    C one(1);
    // Euler products for sgn = +1 (zeta = 1) and sgn = -1 (zeta = i); they
    // depend on zeta only through zeta^2.
    C E[2];
    std::vector<C> x(r);
    for (int c = 0; c < 2; ++c) {
      C zeta = zeta_power(c);
      C prod(1);
      for (int k = 1; k <= pmax; ++k) {
        for (int i = 0; i < r; ++i) x[i] = ipow(z[i], k);
        C zk = ipow(zeta, k);
        prod *= pow_count(s_reg_local(sk[k - 1], x, zk, zk * zk), cnt[k - 1]);
      }
      E[c] = prod;
    }
    C num(1), den(1);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) {
        C d = z[i] - z[j];
        num *= (i < 3 && j >= 3 ? d : d * d) * (one - z[i] * z[j]);
      }
      den *= ipow(one - z[i], 2 * r) * ipow(z[i], r);
    }
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) num *= one - z[k] * z[l];
    for (int k = 0; k < 3; ++k)
      for (int l = 3; l < r; ++l) den *= (one + z[k] * z[l]) * (one / z[k] + z[l] / (z[k] * z[k]));
    for (int k = 3; k < r; ++k)
      for (int l = k; l < r; ++l) den *= one + z[k] * z[l];
    C ker = pref * num / den;
    C tail(1);
    for (int k = 3; k < r; ++k) tail *= z[k];
    C it = one / tail;
    for (size_t d = 0; d < m; ++d) powD[d] = ipow(it, Ds[d]);
    for (int zp = 0; zp < 4; ++zp) {
      C zeta = zeta_power(zp);
      Mat3<C> mb = g_matrix(q, z, zeta);
      C g = g1_pref * g_part(q, z, zeta, 1, mb) + g_part(q, z, zeta, 2, mb);
      C base = ker * g * E[zp & 1];
      for (size_t d = 0; d < m; ++d) out[zp * m + d] = base * powD[d];
    }
  };
  GridSums gs = integrate(SymGrid{{3, r - 3}, quad.n, static_cast<R>(quad.rho), quad.threads}, 4 * m, fn);
  double asym = 0;
  for (int zp = 0; zp < 4; ++zp)
    for (size_t d = 0; d < m; ++d) {
      res.per_zeta[zp].push_back(cd(gs.full[zp * m + d]));
      res.per_zeta_delta[zp].push_back(static_cast<double>(std::abs(gs.full[zp * m + d] - gs.half[zp * m + d])));
    }
  for (size_t d = 0; d < m; ++d) {
    C tot(0), tot_half(0);
    for (int zp = 0; zp < 4; ++zp) {
      C zd = ipow(zeta_power(zp), Ds[d]);
      tot += zd * gs.full[zp * m + d];
      tot_half += zd * gs.half[zp * m + d];
    }
    res.value.push_back(cd(tot));
    res.delta.push_back(static_cast<double>(std::abs(tot - tot_half)));
    double mag = static_cast<double>(std::abs(tot));
    if (mag > 0) asym = std::max(asym, static_cast<double>(std::abs(tot.imag())) / mag);
  }
  res.conj_asymmetry = asym;
  std::vector<C> ones(r, C(1));
  res.euler_tail = std::max(s_reg_tail(q, ones, C(1), pmax), s_reg_tail(q, ones, C(0, 1), pmax));
  return res;
}

Cd LeadingCoefficient::at(int D) const {
  Cd tot = 0;
  for (int z = 0; z < 4; ++z) tot += cd(ipow(zeta_power(z), D)) * per_zeta[z];
  return tot;
}

LeadingCoefficient q2_leading_coefficient(long q, int r, int pmax) {
  if (r < 4) throw DomainError("leading coefficient needs r >= 4");
  EulerProductSpec{q, r, pmax, LocalKind::SReg}.validate();
  LeadingCoefficient lc;
  lc.degree = (r - 3) * (r + 10) / 2;
  mpq_class c = 1;
  for (int j = 1; j <= r - 4; ++j) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), j);
    c *= f;
  }
  for (int j = 4; j <= r; ++j) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), 2 * j - 1);
    c /= f;
  }
  int e2 = 19 - 7 * r;
  mpz_class p2 = 1;
  p2 <<= std::abs(e2);
  if (e2 >= 0)
    c *= p2;
  else
    c /= p2;
  R cr = static_cast<R>(c.get_d());
  R sq = std::sqrt(static_cast<R>(q));
  double tail = 0;
  for (int z = 0; z < 4; ++z) {
    int sg = z % 2 == 0 ? 1 : -1;
    C table = cl(gamma_table_exact(q, z).embed());
    C zf = ipow(C(1) / (C(1) - R(sg) * sq), 7);
    C prod(1);
    for (int k = 1; k <= pmax; ++k) {
      R t = std::pow(static_cast<R>(sg), k) / std::pow(sq, k);
      prod *= std::pow(static_cast<R>(p_r_value(r, static_cast<double>(t))), static_cast<R>(irreducible_count(q, k)));
    }
    double tz = tail_estimate(q, pmax, [&](int k) {
      R t = std::pow(static_cast<R>(sg), k) / std::pow(sq, k);
      return std::abs(static_cast<R>(p_r_value(r, static_cast<double>(t))) - 1);
    });
    tail = std::max(tail, tz);
    lc.per_zeta[z] = cd(cr * table * zf * prod);
  }
  lc.euler_tail = tail;
  return lc;
}

namespace {

C random_unit(std::mt19937_64& rng, R lo, R hi) {
  std::uniform_real_distribution<double> U(static_cast<double>(lo), static_cast<double>(hi));
  return std::polar(R(1), static_cast<R>(U(rng)));
}

// distinct unit points with |a_i - a_j|, |a_i a_j - 1|, |a_i^2 - 1| bounded below
std::vector<C> unit_points(std::mt19937_64& rng, int r, R lo, R hi, R sep) {
  for (;;) {
    std::vector<C> a;
    for (int i = 0; i < r; ++i) a.push_back(random_unit(rng, lo, hi));
    bool ok = true;
    for (int i = 0; i < r && ok; ++i) {
      if (std::abs(a[i] * a[i] - C(1)) < sep) ok = false;
      for (int j = i + 1; j < r && ok; ++j)
        if (std::abs(a[i] - a[j]) < sep || std::abs(a[i] * a[j] - C(1)) < sep) ok = false;
    }
    if (ok) return a;
  }
}

C crand(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1);
  return C(U(rng), U(rng));
}

}  // namespace

IdentityReport lemma71_check(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IdentityReport rep;
  const int N = 64;
  const R Rad = 2;
  for (int it = 0; it < instances; ++it) {
    int r = 1 + it % 3;
    auto a = unit_points(rng, r, -kPi, kPi, 0.3L);
    C c0 = crand(rng), c1 = crand(rng), c2 = crand(rng), c3 = crand(rng), c4 = crand(rng);
    auto h = [&](const std::vector<C>& z) {
      C e1(0), p2(0), er(1);
      for (auto& v : z) {
        e1 += v;
        p2 += v * v;
        er *= v;
      }
      return c0 + c1 * e1 + c2 * e1 * e1 + c3 * p2 + c4 * er;
    };
    // residue side
    C lhs(0);
    for (int mask = 0; mask < (1 << r); ++mask) {
      std::vector<C> p(r);
      for (int i = 0; i < r; ++i) p[i] = (mask >> i & 1) ? C(1) / a[i] : a[i];
      C den(1);
      for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) den *= C(1) - p[i] * p[j];
      lhs += h(p) / den;
    }
    // contour side: cycle |z| = 2 minus |z| = 1/2, symmetric grid
    std::vector<C> node, wt;
    for (int j = 0; j < N; ++j) {
      C e = std::polar(R(1), 2 * kPi * j / N);
      node.push_back(Rad * e);
      wt.push_back(Rad * e / R(N));
      node.push_back(e / Rad);
      wt.push_back(-(e / Rad) / R(N));
    }
    int M = static_cast<int>(node.size());
    C sum(0);
    std::vector<int> idx(r, 0);
    std::function<void(int, int)> rec = [&](int pos, int lo) {
      if (pos == r) {
        std::vector<C> z(r);
        C w(1);
        R mult = factorial(r);
        int run = 1;
        for (int i = 0; i < r; ++i) {
          z[i] = node[idx[i]];
          w *= wt[idx[i]];
          if (i > 0) {
            if (idx[i] == idx[i - 1]) {
              ++run;
            } else {
              mult /= factorial(run);
              run = 1;
            }
          }
        }
        mult /= factorial(run);
        C f = h(z);
        for (int i = 0; i < r; ++i) {
          for (int j = i + 1; j < r; ++j) {
            C d = z[j] - z[i];
            f *= d * d * (C(1) - z[i] * z[j]);
          }
          for (int j = 0; j < r; ++j) f /= (C(1) - z[i] * a[j]) * (C(1) - z[i] / a[j]);
          f /= ipow(z[i], r);
        }
        sum += mult * w * f;
        return;
      }
      for (int j = lo; j < M; ++j) {
        idx[pos] = j;
        rec(pos + 1, j);
      }
    };
    rec(0, 0);
    R sign = (r * (r + 1) / 2) % 2 ? -1 : 1;
    C rhs = sign / factorial(r) * sum;
    double err = static_cast<double>(std::abs(lhs - rhs) / std::max(std::abs(lhs), R(1e-300)));
    rep.max_rel_error = std::max(rep.max_rel_error, err);
    ++rep.instances;
  }
  return rep;
}

IdentityReport mlemma_check(int instances, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IdentityReport rep;
  const int N = 96;
  const R rho = 0.6L;
  std::vector<C> node, wt;
  for (int j = 0; j < N; ++j) {
    C e = std::polar(rho, 2 * kPi * j / N);
    node.push_back(C(1) + e);
    wt.push_back(e / R(N));
  }
  for (int it = 0; it < instances; ++it) {
    int r = 2 + it % 2;
    int m = static_cast<int>(rng() % r);
    auto a = unit_points(rng, r, -0.25L, 0.25L, 0.06L);
    std::vector<C> c;
    for (int k = 0; k < 12; ++k) c.push_back(crand(rng));
    auto h = [&](const std::vector<C>& z) {
      C v = c[0] + c[1] * z[0] * z[0] * z[0];
      for (int i = 0; i < r; ++i) v += c[2 + i] * z[i];
      int k = 5;
      for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) v += c[k++] * z[i] * z[j];
      return v;
    };
    auto Km = [&](const std::vector<C>& z) {
      C den(1);
      for (int k = 0; k < m; ++k)
        for (int l = m; l < r; ++l) den *= (C(1) - z[k] * z[k] * z[l] * z[l]) * (C(1) - z[l] * z[l] / (z[k] * z[k]));
      for (int k = m; k < r; ++k)
        for (int l = k; l < r; ++l) den *= C(1) - z[k] * z[k] * z[l] * z[l];
      return h(z) / den;
    };
    // residue side
    C rhs(0);
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i;
    do {
      for (int mask = 0; mask < (1 << r); ++mask) {
        std::vector<C> p(r);
        for (int i = 0; i < r; ++i) {
          int j = perm[i];
          p[i] = (mask >> j & 1) ? C(1) / a[j] : a[j];
        }
        rhs += Km(p);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    // contour side
    C sum(0);
    std::vector<int> idx(r, 0);
    std::vector<C> z(r);
    std::function<void(int)> rec = [&](int pos) {
      if (pos == r) {
        C w(1);
        for (int i = 0; i < r; ++i) w *= wt[idx[i]];
        C num(1), den(1);
        for (int i = 0; i < r; ++i)
          for (int j = i + 1; j < r; ++j) {
            C d = z[i] - z[j];
            num *= (i < m && j >= m ? d : d * d) * (C(1) - z[i] * z[j]);
          }
        for (int k = 0; k < m; ++k)
          for (int l = k; l < m; ++l) num *= C(1) - z[k] * z[l];
        for (int i = 0; i < r; ++i) {
          for (int j = 0; j < r; ++j) den *= (C(1) - z[i] * a[j]) * (C(1) - z[i] / a[j]);
          den *= ipow(z[i], r);
        }
        for (int k = 0; k < m; ++k)
          for (int l = m; l < r; ++l) den *= (C(1) + z[k] * z[l]) * (C(1) / z[k] + z[l] / (z[k] * z[k]));
        for (int k = m; k < r; ++k)
          for (int l = k; l < r; ++l) den *= C(1) + z[k] * z[l];
        sum += w * h(z) * num / den;
        return;
      }
      for (int j = 0; j < N; ++j) {
        idx[pos] = j;
        z[pos] = node[j];
        rec(pos + 1);
      }
    };
    rec(0);
    R sign = (r * (r + 1) / 2) % 2 ? -1 : 1;
    C lhs = sign * sum;
    double err = static_cast<double>(std::abs(lhs - rhs) / std::max(std::abs(rhs), R(1e-300)));
    rep.max_rel_error = std::max(rep.max_rel_error, err);
    ++rep.instances;
  }
  return rep;
}

long triple_integral_exact() {
  using Mono = std::array<int, 3>;
  using Poly = std::map<Mono, long>;
  auto mul = [](const Poly& a, const Poly& b) {
    Poly c;
    for (auto& [ma, ca] : a)
      for (auto& [mb, cb] : b) {
        Mono m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
        c[m] += ca * cb;
      }
    return c;
  };
  auto var = [](int i) {
    Mono m{0, 0, 0};
    m[i] = 1;
    return m;
  };
  Poly f{{{0, 0, 0}, 1}};
  for (int i = 0; i < 3; ++i) f = mul(f, Poly{{var(i), 1}, {{0, 0, 0}, 2}});
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      Poly d{{var(i), 1}, {var(j), -1}};
      Mono ij{0, 0, 0};
      ij[i] = ij[j] = 1;
      Poly e{{ij, 1}, {var(i), 1}, {var(j), 1}};
      f = mul(f, mul(mul(d, d), mul(e, e)));
    }
  auto it = f.find(Mono{4, 4, 4});
  return it == f.end() ? 0 : it->second;
}

Cd triple_integral_quadrature(double rho, int n) {
  std::vector<C> node;
  for (int j = 0; j < n; ++j) node.push_back(std::polar(static_cast<R>(rho), 2 * kPi * j / n));
  C sum(0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        C x[3] = {node[a], node[b], node[c]};
        C f(1);
        for (int i = 0; i < 3; ++i) f *= (x[i] + C(2)) / ipow(x[i], 4);
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j) {
            C d = x[i] - x[j], e = x[i] * x[j] + x[i] + x[j];
            f *= d * d * e * e;
          }
        sum += f;
      }
  return cd(sum / (static_cast<R>(n) * n * n));
}

mpz_class binomial_determinant(int r) {
  if (r < 4) throw DomainError("binomial determinant needs r >= 4");
  int n = r - 3;
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) mpz_bin_uiui(a[i - 1][j - 1].get_mpz_t(), 2 * r + 1 - 2 * j, i - 1);
  // Bareiss fraction-free elimination
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

PolyFit fit_polynomial(const std::vector<int>& D, const std::vector<Cd>& v, int degree) {
  size_t n = D.size(), p = degree + 1;
  if (n < p) throw DomainError("not enough samples for the fit");
  R lo = *std::min_element(D.begin(), D.end()), hi = *std::max_element(D.begin(), D.end());
  R mid = (lo + hi) / 2, half = std::max<R>((hi - lo) / 2, 1);
  // Householder QR on the scaled Vandermonde matrix
  std::vector<std::vector<R>> A(n, std::vector<R>(p));
  for (size_t i = 0; i < n; ++i) {
    R x = (D[i] - mid) / half, xp = 1;
    for (size_t k = 0; k < p; ++k) {
      A[i][k] = xp;
      xp *= x;
    }
  }
  std::vector<std::vector<R>> rhs(2, std::vector<R>(n));
  for (size_t i = 0; i < n; ++i) {
    rhs[0][i] = v[i].real();
    rhs[1][i] = v[i].imag();
  }
  for (size_t k = 0; k < p; ++k) {
    R nrm = 0;
    for (size_t i = k; i < n; ++i) nrm += A[i][k] * A[i][k];
    nrm = std::sqrt(nrm);
    R alpha = A[k][k] > 0 ? -nrm : nrm;
    std::vector<R> u(n, 0);
    for (size_t i = k; i < n; ++i) u[i] = A[i][k];
    u[k] -= alpha;
    R un = 0;
    for (size_t i = k; i < n; ++i) un += u[i] * u[i];
    if (un == 0) continue;
    for (size_t j = k; j < p; ++j) {
      R d = 0;
      for (size_t i = k; i < n; ++i) d += u[i] * A[i][j];
      for (size_t i = k; i < n; ++i) A[i][j] -= 2 * d / un * u[i];
    }
    for (auto& b : rhs) {
      R d = 0;
      for (size_t i = k; i < n; ++i) d += u[i] * b[i];
      for (size_t i = k; i < n; ++i) b[i] -= 2 * d / un * u[i];
    }
  }
  std::vector<std::vector<R>> coef(2, std::vector<R>(p));
  for (int c = 0; c < 2; ++c)
    for (size_t k = p; k-- > 0;) {
      R s = rhs[c][k];
      for (size_t j = k + 1; j < p; ++j) s -= A[k][j] * coef[c][j];
      coef[c][k] = s / A[k][k];
    }
  // expand sum_k b_k ((D - mid)/half)^k in powers of D
  std::vector<C> out(p, C(0));
  for (size_t k = 0; k < p; ++k) {
    C b(coef[0][k], coef[1][k]);
    b /= std::pow(half, static_cast<R>(k));
    // (D - mid)^k
    R binom = 1;
    for (size_t j = 0; j <= k; ++j) {
      out[j] += b * binom * std::pow(-mid, static_cast<R>(k - j));
      binom = binom * (k - j) / (j + 1);
    }
  }
  PolyFit fit;
  for (auto& c : out) fit.coeffs.push_back(cd(c));
  R scale = 0, worst = 0;
  for (size_t i = 0; i < n; ++i) {
    C val(0), xp(1);
    for (size_t k = 0; k < p; ++k) {
      val += out[k] * xp;
      xp *= static_cast<R>(D[i]);
    }
    worst = std::max(worst, std::abs(val - cl(v[i])));
    scale = std::max(scale, std::abs(cl(v[i])));
  }
  fit.rel_residual = static_cast<double>(scale > 0 ? worst / scale : worst);
  return fit;
}

Cd big_g_part(long q, const std::vector<Cd>& xi, const Cd& zeta, int part) {
  auto x = to_t<C>(xi);
  C z = cl(zeta);
  return cd(g_part(q, x, z, part, g_matrix(q, x, z)));
}

}  // namespace qmom
