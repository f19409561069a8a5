#include "ideatrace/fit.hpp"

#include <algorithm>
#include <cmath>

#include "ideatrace/errors.hpp"

namespace ideatrace {

const char* fit_family_name(FitFamily f) {
  switch (f) {
    case FitFamily::gaussian: return "gaussian";
    case FitFamily::poisson: return "poisson";
    case FitFamily::negative_binomial: return "negative_binomial";
  }
  return "gaussian";
}

double FitResult::bic() const {
  return n_params * std::log(static_cast<double>(n_samples)) - 2.0 * loglik;
}

namespace {

double mean_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

void check_counts(std::span<const int> samples, const char* who) {
  if (samples.size() < 2) {
    throw DegenerateSample(std::string(who) + " needs at least 2 samples");
  }
  for (int x : samples) {
    if (x < 0) throw DegenerateSample(std::string(who) + " needs non-negative counts");
  }
}

}  // namespace

double gaussian_loglik(std::span<const double> samples, double mu, double sigma) {
  double ll = 0.0;
  const double log_norm = -0.5 * std::log(2.0 * M_PI) - std::log(sigma);
  for (double x : samples) {
    double z = (x - mu) / sigma;
    ll += log_norm - 0.5 * z * z;
  }
  return ll;
}

double poisson_loglik(std::span<const int> samples, double lambda) {
  double ll = 0.0;
  for (int x : samples) {
    ll += x * std::log(lambda) - lambda - std::lgamma(x + 1.0);
  }
  return ll;
}

double negbin_loglik(std::span<const int> samples, double r, double p) {
  double ll = 0.0;
  const double lgr = std::lgamma(r);
  const double rlogp = r * std::log(p);
  const double log1mp = std::log1p(-p);
  for (int x : samples) {
    ll += std::lgamma(x + r) - lgr - std::lgamma(x + 1.0) + rlogp + x * log1mp;
  }
  return ll;
}

FitResult fit_gaussian(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw DegenerateSample("fit_gaussian needs at least 2 samples");
  }
  const double mu = mean_of(samples);
  double var = 0.0;
  for (double x : samples) var += (x - mu) * (x - mu);
  var /= static_cast<double>(samples.size());
  if (var <= 0.0) {
    throw DegenerateSample("fit_gaussian: zero variance sample");
  }
  FitResult fit;
  fit.family = FitFamily::gaussian;
  fit.mu = mu;
  fit.sigma = std::sqrt(var);
  fit.n_samples = static_cast<int>(samples.size());
  fit.n_params = 2;
  fit.loglik = gaussian_loglik(samples, fit.mu, fit.sigma);
  return fit;
}

FitResult fit_poisson(std::span<const int> samples) {
  check_counts(samples, "fit_poisson");
  double mean = 0.0;
  for (int x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  if (mean <= 0.0) {
    throw DegenerateSample("fit_poisson: all-zero counts");
  }
  FitResult fit;
  fit.family = FitFamily::poisson;
  fit.lambda_rate = mean;
  fit.n_samples = static_cast<int>(samples.size());
  fit.n_params = 1;
  fit.loglik = poisson_loglik(samples, mean);
  return fit;
}

FitResult fit_negbin(std::span<const int> samples) {
  check_counts(samples, "fit_negbin");
  double mean = 0.0;
  for (int x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  if (mean <= 0.0) {
    throw DegenerateSample("fit_negbin: all-zero counts");
  }

  auto profile = [&](double log_r) {
    double r = std::exp(log_r);
    double p = r / (r + mean);
    return negbin_loglik(samples, r, p);
  };

  // Golden-section on log r. Underdispersed data pushes r to the upper
  // bracket, where the fit approaches a Poisson.
  double lo = std::log(1e-6), hi = std::log(1e8);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = profile(x1), f2 = profile(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = profile(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = profile(x1);
    }
  }
  FitResult fit;
  fit.family = FitFamily::negative_binomial;
  fit.r = std::exp((lo + hi) / 2.0);
  fit.p = fit.r / (fit.r + mean);
  fit.n_samples = static_cast<int>(samples.size());
  fit.n_params = 2;
  fit.loglik = negbin_loglik(samples, fit.r, fit.p);
  return fit;
}

}  // namespace ideatrace
