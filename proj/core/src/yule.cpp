#include "ideatrace/yule.hpp"

#include <cmath>
#include <map>

#include "ideatrace/errors.hpp"
#include "ideatrace/rng.hpp"

namespace ideatrace {

void YuleParams::validate() const {
  if (!(lambda_rate > 0.0)) throw ConfigError("yule lambda_rate must be > 0");
  if (n0 < 1) throw ConfigError("yule n0 must be >= 1");
  if (!(t >= 0.0)) throw ConfigError("yule t must be >= 0");
}

double yule_pmf(int n, const YuleParams& params) {
  params.validate();
  if (n < params.n0) {
    throw DomainError("yule_pmf: n below the initial count");
  }
  const int extra = n - params.n0;
  if (params.t == 0.0) return extra == 0 ? 1.0 : 0.0;

  // log C(n-1, n-n0) with real-valued gamma functions.
  double log_choose = std::lgamma(static_cast<double>(n)) -
                      std::lgamma(static_cast<double>(extra + 1)) -
                      std::lgamma(static_cast<double>(params.n0));
  double log_p = log_choose - params.lambda_rate * params.n0 * params.t;
  if (extra > 0) {
    log_p += extra * std::log1p(-std::exp(-params.lambda_rate * params.t));
  }
  return std::exp(log_p);
}

double yule_mean(const YuleParams& params) {
  params.validate();
  return params.n0 * std::exp(params.lambda_rate * params.t);
}

std::vector<std::pair<int, double>> simulate_yule(const YuleParams& params,
                                                  int trials,
                                                  std::uint64_t seed) {
  params.validate();
  if (trials < 1) throw ConfigError("simulate_yule: trials must be >= 1");

  std::map<int, std::int64_t> tally;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    int count = params.n0;
    double time = 0.0;
    for (;;) {
      time += rng.exponential(count * params.lambda_rate);
      if (time > params.t) break;
      ++count;
    }
    ++tally[count];
  }

  std::vector<std::pair<int, double>> out;
  out.reserve(tally.size());
  for (auto [n, c] : tally) {
    out.emplace_back(n, static_cast<double>(c) / trials);
  }
  return out;
}

}  // namespace ideatrace
