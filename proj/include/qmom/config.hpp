#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qmom {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a requested computation would exceed a configured work or
// memory budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks q is a prime with q = 1 mod 4.
void require_admissible_q(long q);
bool is_prime(long n);

// Resolves a requested worker count. 0 means: QMOM_THREADS if set, else the
// hardware concurrency.
int resolve_threads(int requested);

struct RunConfig {
  long q = 5;
  int r = 4;
  int N = 2;           // number of real-root levels kept in the prediction
  double theta = 0.4;  // error exponent, needs 1/(N+1) < theta < 1/N
  int threads = 0;
  std::uint64_t op_budget = 2'000'000'000ULL;

  void validate() const;
};

}  // namespace qmom
