#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ideatrace {

// Pure-birth (preferential attachment) process: each of n lineages
// independently spawns at rate lambda, so the population grows at n*lambda.
struct YuleParams {
  double lambda_rate = 0.1;  // per-capita offspring rate, 1/years
  int n0 = 1;                // initial count
  double t = 0.0;            // elapsed time, years

  void validate() const;
};

// P_n(t) = C(n-1, n-n0) e^{-lambda n0 t} (1 - e^{-lambda t})^{n - n0},
// the negative-binomial law with success probability e^{-lambda t}.
// Throws DomainError when n < n0.
double yule_pmf(int n, const YuleParams& params);

// Expected population n0 * e^{lambda t}.
double yule_mean(const YuleParams& params);

// Exact stochastic simulation: exponential waiting times at rate
// n * lambda until time t. Returns (n, relative frequency) sorted by n.
std::vector<std::pair<int, double>> simulate_yule(const YuleParams& params,
                                                  int trials,
                                                  std::uint64_t seed);

}  // namespace ideatrace
