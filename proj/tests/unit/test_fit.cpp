#include <doctest.h>

#include <cmath>
#include <vector>

#include "ideatrace/errors.hpp"
#include "ideatrace/fit.hpp"
#include "ideatrace/rng.hpp"

using namespace ideatrace;

namespace {

std::vector<int> negbin_draws(double r, double p, int n, std::uint64_t seed) {
  // Gamma-Poisson mixture with scale (1-p)/p.
  Rng rng(seed);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double mean = rng.gamma(r, (1.0 - p) / p);
    out.push_back(static_cast<int>(rng.poisson(mean)));
  }
  return out;
}

}  // namespace

TEST_CASE("fit_gaussian: closed-form MLE") {
  std::vector<double> samples = {1.0, 2.0, 3.0};
  auto fit = fit_gaussian(samples);
  CHECK(fit.mu == doctest::Approx(2.0));
  CHECK(fit.sigma == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(fit.n_params == 2);

  std::vector<double> constant = {4.0, 4.0, 4.0};
  CHECK_THROWS_AS(fit_gaussian(constant), DegenerateSample);
  std::vector<double> one = {1.0};
  CHECK_THROWS_AS(fit_gaussian(one), DegenerateSample);
}

TEST_CASE("fit_poisson: rate equals the mean") {
  std::vector<int> samples = {2, 4, 3, 7, 4};
  auto fit = fit_poisson(samples);
  CHECK(fit.lambda_rate == doctest::Approx(4.0));

  std::vector<int> zeros = {0, 0, 0};
  CHECK_THROWS_AS(fit_poisson(zeros), DegenerateSample);
  std::vector<int> negative = {1, -2};
  CHECK_THROWS_AS(fit_poisson(negative), DegenerateSample);
}

TEST_CASE("fit_negbin: profile search recovers planted parameters") {
  auto samples = negbin_draws(2.5, 0.22, 20000, 8);
  auto fit = fit_negbin(samples);
  CHECK(fit.r > 2.2);
  CHECK(fit.r < 2.8);
  CHECK(fit.p > 0.19);
  CHECK(fit.p < 0.25);
  // The mean constraint is honored exactly at the profile optimum.
  double mean = 0.0;
  for (int x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  CHECK(fit.r * (1.0 - fit.p) / fit.p == doctest::Approx(mean).epsilon(1e-6));

  std::vector<int> zeros = {0, 0};
  CHECK_THROWS_AS(fit_negbin(zeros), DegenerateSample);
}

TEST_CASE("fit families: overdispersion favors the negative binomial") {
  auto samples = negbin_draws(2.5, 0.22, 5000, 21);
  auto nb = fit_negbin(samples);
  auto pois = fit_poisson(samples);
  auto gauss = fit_gaussian(std::vector<double>(samples.begin(), samples.end()));
  CHECK(nb.loglik > pois.loglik);
  // Log-likelihoods are comparable across families on the same sample.
  CHECK(std::isfinite(gauss.loglik));
  CHECK(nb.aic() < pois.aic());
}

TEST_CASE("fit families: near-Poisson data pushes r high") {
  Rng rng(5);
  std::vector<int> samples;
  for (int i = 0; i < 5000; ++i) samples.push_back(static_cast<int>(rng.poisson(4.0)));
  auto pois = fit_poisson(samples);
  CHECK(pois.lambda_rate == doctest::Approx(4.0).epsilon(0.05));
  auto nb = fit_negbin(samples);
  // The negative binomial degenerates toward Poisson; likelihoods agree.
  CHECK(nb.loglik == doctest::Approx(pois.loglik).epsilon(1e-3));
  CHECK(nb.r > 100.0);
}
