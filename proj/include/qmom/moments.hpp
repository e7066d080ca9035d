#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qmom/exactnum.hpp"

namespace qmom {

// M_r(D) = sum over monic squarefree d of degree D of L(1/2, chi_d)^r,
// stored exactly as a + b sqrt(q).
struct MomentRow {
  long q = 0;
  int r = 0, D = 0;
  mpq_class a, b;
  double value = 0;
  std::uint64_t count = 0;
  double seconds = 0;
  std::string backend;

  KNum as_knum() const;
};

struct MomentOptions {
  int threads = 0;               // 0: resolve from environment
  bool use_translation = true;   // sum over d with vanishing x^{D-1} coefficient
  bool use_functional_equation = true;
  std::uint64_t op_budget = 2'000'000'000ULL;  // bound on q^(2D-1)
  bool allow_large = false;      // lifts the budget (opt-in for D = 8 at q = 5)
};

MomentRow moment(long q, int r, int D, const MomentOptions& opts = {});

// Reference path: one direct symbol evaluation per (d, m) pair.
MomentRow moment_naive(long q, int r, int D);

// Coefficients M_r(0..D_max) of sum_D M_r(D) xi^D, as elements of K.
std::vector<KNum> generating_series(long q, int r, int D_max, const MomentOptions& opts = {});

// Partial sum sum_{D <= D_max} M_r(D) xi^D.
std::complex<double> generating_series_value(long q, int r, int D_max, std::complex<double> xi,
                                             const MomentOptions& opts = {});

struct ResidualRow {
  MomentRow moment;
  std::vector<std::complex<double>> q_n;  // Q_1(D), ..., Q_N(D)
  double prediction = 0;                  // Re sum_n Q_n(D) q^{(1/2 + 1/2n) D}
  double residual = 0;                    // moment - prediction
  double normalized = 0;                  // residual / q^{D(1 + theta)/2}
};

// predictions[i] holds Q_1..Q_N for moments[i].D; an empty list means no
// prediction (residual = moment).
std::vector<ResidualRow> residual_table(const std::vector<MomentRow>& moments,
                                        const std::vector<std::vector<std::complex<double>>>& predictions,
                                        double theta);

std::string residual_csv_header(int N);
std::string residual_csv_row(const ResidualRow& row);

// Expected number of monic squarefree d of degree D.
std::uint64_t squarefree_count(long q, int D);

std::string moments_csv_header();
std::string moments_csv_row(const MomentRow& row);

}  // namespace qmom
