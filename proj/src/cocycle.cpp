#include "qmom/cocycle.hpp"

namespace qmom {

namespace {

QI zeta_qi(int k) {
  static const QI vals[4] = {QI(1), QI(0, 1), QI(-1), QI(0, -1)};
  return vals[((k % 4) + 4) % 4];
}

int zeta_sgn(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

std::array<QI, 9> gamma_table_polynomial(int zeta_power) {
  QI zeta = zeta_qi(zeta_power);
  int sg = zeta_sgn(zeta_power);
  const int n = 9;
  std::vector<mpq_class> ts;
  std::vector<QI> vals;
  for (int k = 0; k < n + 4; ++k) {
    mpq_class t(k + 2);
    ts.push_back(t);
    vals.push_back(gamma_table_value(zeta, sg, qi_scalars(t)));
  }
  // Newton divided differences on the first n points
  std::vector<QI> c(vals.begin(), vals.begin() + n);
  for (int j = 1; j < n; ++j)
    for (int i = n - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / QI(ts[i] - ts[i - j]);
  // expand to monomial basis
  std::vector<QI> poly(n, QI(0));
  for (int i = n - 1; i >= 0; --i) {
    // poly = poly * (t - ts[i]) + c[i]
    std::vector<QI> np(n, QI(0));
    for (int k = 0; k < n; ++k) {
      if (poly[k].is_zero()) continue;
      if (k + 1 < n) np[k + 1] += poly[k];
      np[k] -= poly[k] * QI(ts[i]);
    }
    np[0] += c[i];
    poly = np;
  }
  for (size_t k = n; k < ts.size(); ++k) {
    QI v(0), tp(1);
    for (int e = 0; e < n; ++e) {
      v += poly[e] * tp;
      tp *= QI(ts[k]);
    }
    if (v != vals[k]) throw DomainError("Gamma-table value is not a polynomial of degree <= 8 in q^(1/4)");
  }
  std::array<QI, 9> out;
  for (int k = 0; k < n; ++k) out[k] = poly[k];
  return out;
}

KNum gamma_table_exact(long q, int zeta_power) {
  require_admissible_q(q);
  return gamma_table_value(KNum::zeta(q, zeta_power), zeta_sgn(zeta_power), k_scalars(q));
}

}  // namespace qmom
