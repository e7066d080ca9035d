#include "qmom/config.hpp"

#include <cstdlib>
#include <thread>

namespace qmom {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

void require_admissible_q(long q) {
  if (!is_prime(q) || q % 4 != 1)
    throw ConfigError("q must be a prime congruent to 1 mod 4, got " + std::to_string(q));
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QMOM_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

void RunConfig::validate() const {
  require_admissible_q(q);
  if (r < 1) throw ConfigError("r must be positive");
  if (N < 1) throw ConfigError("N must be positive");
  double lo = 1.0 / (N + 1), hi = 1.0 / N;
  if (!(theta > lo && theta < hi))
    throw ConfigError("theta must satisfy 1/(N+1) < theta < 1/N");
  if (threads < 0) throw ConfigError("threads must be non-negative");
}

}  // namespace qmom
