#include <doctest.h>

#include <cmath>

#include "ideatrace/errors.hpp"
#include "ideatrace/growth.hpp"
#include "ideatrace/rng.hpp"

using namespace ideatrace;

namespace {

// Continuous 3-segment ramp with breaks at the given years.
std::vector<std::pair<int, double>> three_segment_series(
    int y0, int y1, int b1, int b2, double s1, double s2, double s3,
    double noise, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, double>> out;
  double base = 1.0;
  for (int year = y0; year <= y1; ++year) {
    double y;
    if (year <= b1) {
      y = base + s1 * (year - y0);
    } else if (year <= b2) {
      y = base + s1 * (b1 - y0) + s2 * (year - b1);
    } else {
      y = base + s1 * (b1 - y0) + s2 * (b2 - b1) + s3 * (year - b2);
    }
    out.emplace_back(year, y + (noise > 0 ? rng.normal(0.0, noise) : 0.0));
  }
  return out;
}

}  // namespace

TEST_CASE("piecewise_growth: exactly linear data selects one segment") {
  std::vector<std::pair<int, double>> series;
  for (int year = 1800; year <= 1840; ++year) {
    series.emplace_back(year, 3.0 + 1.5 * (year - 1800));
  }
  auto res = piecewise_growth(series, 3);
  CHECK(res.selected_segments == 1);
  CHECK(res.fits[0].sse == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(res.fits[0].slopes[0] == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(res.fits[0].intercept == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("piecewise_growth: SSE never increases with more segments") {
  auto series = three_segment_series(1800, 1900, 1830, 1870, 1.0, 3.0, 2.0, 2.0, 7);
  auto res = piecewise_growth(series, 3);
  REQUIRE(res.fits.size() == 3);
  CHECK(res.fits[1].sse <= res.fits[0].sse + 1e-9);
  CHECK(res.fits[2].sse <= res.fits[1].sse + 1e-9);
}

TEST_CASE("piecewise_growth: recovers a clean three-phase ramp") {
  auto series =
      three_segment_series(1789, 2014, 1936, 1967, 1.2, 4.9, 5.8, 0.5, 11);
  auto res = piecewise_growth(series, 3);
  CHECK(res.selected_segments == 3);
  const auto& fit = res.selected();
  REQUIRE(fit.breakpoints.size() == 2);
  CHECK(std::abs(fit.breakpoints[0] - 1936) <= 2);
  CHECK(std::abs(fit.breakpoints[1] - 1967) <= 2);
  CHECK(fit.slopes[0] == doctest::Approx(1.2).epsilon(0.05));
  CHECK(fit.slopes[1] == doctest::Approx(4.9).epsilon(0.05));
  CHECK(fit.slopes[2] == doctest::Approx(5.8).epsilon(0.05));
}

TEST_CASE("piecewise_growth: translation invariance in the year axis") {
  auto series = three_segment_series(1800, 1880, 1820, 1850, 0.8, 2.5, 1.6, 0.3, 5);
  auto shifted = series;
  for (auto& [year, value] : shifted) year += 57;

  auto a = piecewise_growth(series, 3);
  auto b = piecewise_growth(shifted, 3);
  CHECK(a.selected_segments == b.selected_segments);
  const auto& fa = a.selected();
  const auto& fb = b.selected();
  REQUIRE(fa.breakpoints.size() == fb.breakpoints.size());
  for (std::size_t i = 0; i < fa.breakpoints.size(); ++i) {
    CHECK(fb.breakpoints[i] - fa.breakpoints[i] == 57);
  }
  for (std::size_t i = 0; i < fa.slopes.size(); ++i) {
    CHECK(fa.slopes[i] == doctest::Approx(fb.slopes[i]).epsilon(1e-9));
  }
}

TEST_CASE("piecewise_growth: input validation") {
  std::vector<std::pair<int, double>> tiny = {{1800, 1.0}, {1801, 2.0}};
  CHECK_THROWS_AS(piecewise_growth(tiny, 2), ConfigError);
  std::vector<std::pair<int, double>> dup = {
      {1800, 1.0}, {1800, 2.0}, {1801, 2.0}, {1802, 3.0}};
  CHECK_THROWS_AS(piecewise_growth(dup, 1), ConfigError);
}
