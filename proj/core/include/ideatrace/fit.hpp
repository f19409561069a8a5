#pragma once

#include <span>
#include <string>

namespace ideatrace {

enum class FitFamily { gaussian, poisson, negative_binomial };
const char* fit_family_name(FitFamily f);

struct FitResult {
  FitFamily family = FitFamily::gaussian;
  // gaussian
  double mu = 0.0;
  double sigma = 0.0;
  // poisson
  double lambda_rate = 0.0;
  // negative binomial, pmf C(x + r - 1, x) p^r (1-p)^x with real r
  double r = 0.0;
  double p = 0.0;

  double loglik = 0.0;
  int n_samples = 0;
  int n_params = 0;

  double aic() const { return 2.0 * n_params - 2.0 * loglik; }
  double bic() const;
};

// mu = sample mean, sigma = maximum-likelihood (divide by n) deviation.
// Throws DegenerateSample on fewer than 2 samples or zero variance.
FitResult fit_gaussian(std::span<const double> samples);

// lambda = sample mean. Samples must be non-negative integers; all-zero
// data has no valid rate and throws DegenerateSample.
FitResult fit_poisson(std::span<const int> samples);

// Profile likelihood in r: for fixed r the mean equation gives
// p(r) = r / (r + mean); r is then found by golden-section search on the
// profile log-likelihood. Throws DegenerateSample for all-zero counts.
FitResult fit_negbin(std::span<const int> samples);

double gaussian_loglik(std::span<const double> samples, double mu, double sigma);
double poisson_loglik(std::span<const int> samples, double lambda);
double negbin_loglik(std::span<const int> samples, double r, double p);

}  // namespace ideatrace
