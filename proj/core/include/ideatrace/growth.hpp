#pragma once

#include <utility>
#include <vector>

namespace ideatrace {

struct SegmentedFit {
  int segments = 1;
  std::vector<int> breakpoints;  // interior breakpoint years, ascending
  std::vector<double> slopes;    // one per segment
  double intercept = 0.0;        // fitted value at the first year
  double sse = 0.0;
  double bic = 0.0;
  std::vector<double> fitted;    // aligned with the input series
};

struct GrowthResult {
  std::vector<SegmentedFit> fits;  // one per candidate segment count
  int selected_segments = 1;       // BIC minimizer

  const SegmentedFit& selected() const;
};

// Exact least-squares continuous piecewise-linear fits of a cumulative
// series (year, count) for every segment count up to max_segments;
// breakpoints range over the observed years with at least two points per
// segment, and the returned selection minimizes
//   BIC = m ln(SSE/m) + k ln m,  k = 2 * segments.
// Cost grows like C(#years, segments - 1); intended for max_segments <= 4
// on century-scale series.
GrowthResult piecewise_growth(const std::vector<std::pair<int, double>>& series,
                              int max_segments);

}  // namespace ideatrace
