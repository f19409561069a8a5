#include "ideatrace/growth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ideatrace/errors.hpp"

namespace ideatrace {

const SegmentedFit& GrowthResult::selected() const {
  for (const auto& f : fits) {
    if (f.segments == selected_segments) return f;
  }
  throw Error("growth result has no selected fit");
}

namespace {

// Least squares with the truncated-line basis
//   y ~ b0 + b1 x + sum_m c_m max(0, x - xi_m),
// which keeps the fit continuous across breakpoints. Normal-equation
// entries come from suffix sums, so each breakpoint combination costs
// O(p^2) instead of O(m p^2).
struct LsContext {
  std::vector<double> x, y;        // x shifted to start at 0
  std::vector<double> suf0, suf1, suf2, sufy, sufxy;
  double sum1 = 0, sumx = 0, sumxx = 0, sumy = 0, sumxy = 0, sumyy = 0;

  explicit LsContext(const std::vector<std::pair<int, double>>& series) {
    const std::size_t m = series.size();
    x.resize(m);
    y.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = static_cast<double>(series[i].first - series[0].first);
      y[i] = series[i].second;
    }
    suf0.assign(m + 1, 0.0);
    suf1.assign(m + 1, 0.0);
    suf2.assign(m + 1, 0.0);
    sufy.assign(m + 1, 0.0);
    sufxy.assign(m + 1, 0.0);
    for (std::size_t i = m; i-- > 0;) {
      suf0[i] = suf0[i + 1] + 1.0;
      suf1[i] = suf1[i + 1] + x[i];
      suf2[i] = suf2[i + 1] + x[i] * x[i];
      sufy[i] = sufy[i + 1] + y[i];
      sufxy[i] = sufxy[i + 1] + x[i] * y[i];
    }
    sum1 = suf0[0];
    sumx = suf1[0];
    sumxx = suf2[0];
    sumy = sufy[0];
    sumxy = sufxy[0];
    for (std::size_t i = 0; i < m; ++i) sumyy += y[i] * y[i];
  }

  // Solves for the given breakpoint indices; returns SSE and coefficients.
  double solve(const std::vector<int>& bp, std::vector<double>& beta) const {
    const int p = 2 + static_cast<int>(bp.size());
    std::vector<double> a(static_cast<std::size_t>(p) * p, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(p), 0.0);
    auto at = [&](int i, int j) -> double& {
      return a[static_cast<std::size_t>(i) * p + j];
    };

    at(0, 0) = sum1;
    at(0, 1) = at(1, 0) = sumx;
    at(1, 1) = sumxx;
    rhs[0] = sumy;
    rhs[1] = sumxy;
    for (int mth = 0; mth < static_cast<int>(bp.size()); ++mth) {
      const int b = bp[static_cast<std::size_t>(mth)];
      const double xi = x[static_cast<std::size_t>(b)];
      const std::size_t s = static_cast<std::size_t>(b) + 1;
      const double h1 = suf1[s] - xi * suf0[s];               // <1, h>
      const double hx = suf2[s] - xi * suf1[s];               // <x, h>
      at(0, 2 + mth) = at(2 + mth, 0) = h1;
      at(1, 2 + mth) = at(2 + mth, 1) = hx;
      rhs[static_cast<std::size_t>(2 + mth)] = sufxy[s] - xi * sufy[s];
      for (int oth = 0; oth <= mth; ++oth) {
        const double xj = x[static_cast<std::size_t>(bp[static_cast<std::size_t>(oth)])];
        // xi >= xj, so the product is supported where x > xi.
        const double hh = suf2[s] - (xi + xj) * suf1[s] + xi * xj * suf0[s];
        at(2 + mth, 2 + oth) = at(2 + oth, 2 + mth) = hh;
      }
    }

    beta.assign(static_cast<std::size_t>(p), 0.0);
    // Gaussian elimination with partial pivoting.
    std::vector<double> work = a, b = rhs;
    std::vector<int> perm(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) perm[static_cast<std::size_t>(i)] = i;
    auto wat = [&](int i, int j) -> double& {
      return work[static_cast<std::size_t>(i) * p + j];
    };
    for (int col = 0; col < p; ++col) {
      int pivot = col;
      for (int row = col + 1; row < p; ++row) {
        if (std::abs(wat(row, col)) > std::abs(wat(pivot, col))) pivot = row;
      }
      if (std::abs(wat(pivot, col)) < 1e-12) return HUGE_VAL;  // singular combo
      if (pivot != col) {
        for (int j = 0; j < p; ++j) std::swap(wat(pivot, j), wat(col, j));
        std::swap(b[static_cast<std::size_t>(pivot)], b[static_cast<std::size_t>(col)]);
      }
      for (int row = col + 1; row < p; ++row) {
        double f = wat(row, col) / wat(col, col);
        for (int j = col; j < p; ++j) wat(row, j) -= f * wat(col, j);
        b[static_cast<std::size_t>(row)] -= f * b[static_cast<std::size_t>(col)];
      }
    }
    for (int row = p - 1; row >= 0; --row) {
      double acc = b[static_cast<std::size_t>(row)];
      for (int j = row + 1; j < p; ++j) {
        acc -= wat(row, j) * beta[static_cast<std::size_t>(j)];
      }
      beta[static_cast<std::size_t>(row)] = acc / wat(row, row);
    }

    double sse = sumyy;
    for (int i = 0; i < p; ++i) {
      sse -= beta[static_cast<std::size_t>(i)] * rhs[static_cast<std::size_t>(i)];
    }
    return std::max(sse, 0.0);
  }

  std::vector<double> fitted(const std::vector<int>& bp,
                             const std::vector<double>& beta) const {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      double v = beta[0] + beta[1] * x[i];
      for (std::size_t mth = 0; mth < bp.size(); ++mth) {
        double h = x[i] - x[static_cast<std::size_t>(bp[mth])];
        if (h > 0) v += beta[2 + mth] * h;
      }
      out[i] = v;
    }
    return out;
  }
};

void enumerate_breakpoints(int m, int count, int from, std::vector<int>& cur,
                           const std::function<void(const std::vector<int>&)>& emit) {
  if (count == 0) {
    emit(cur);
    return;
  }
  // Leave room: this breakpoint needs `count - 1` more after it, each two
  // points apart, and two trailing points.
  for (int b = from; b <= m - 3 - 2 * (count - 1); ++b) {
    cur.push_back(b);
    enumerate_breakpoints(m, count - 1, b + 2, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

GrowthResult piecewise_growth(const std::vector<std::pair<int, double>>& series_in,
                              int max_segments) {
  if (max_segments < 1) throw ConfigError("growth: max_segments must be >= 1");
  std::vector<std::pair<int, double>> series = series_in;
  std::sort(series.begin(), series.end());
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].first == series[i - 1].first) {
      throw ConfigError("growth: duplicate year in series");
    }
  }
  const int m = static_cast<int>(series.size());
  if (m < 2 * (max_segments + 1)) {
    throw ConfigError("growth: need at least 2*(max_segments+1) points");
  }

  LsContext ctx(series);
  GrowthResult result;

  for (int n = 1; n <= max_segments; ++n) {
    SegmentedFit best;
    best.segments = n;
    best.sse = HUGE_VAL;
    std::vector<int> cur;
    std::vector<double> beta;
    enumerate_breakpoints(m, n - 1, 1, cur, [&](const std::vector<int>& bp) {
      std::vector<double> b;
      double sse = ctx.solve(bp, b);
      if (sse < best.sse) {
        best.sse = sse;
        best.breakpoints.clear();
        for (int idx : bp) {
          best.breakpoints.push_back(series[static_cast<std::size_t>(idx)].first);
        }
        beta = b;
      }
    });
    if (!std::isfinite(best.sse)) {
      throw Error("growth: no feasible breakpoint layout");
    }
    best.intercept = beta[0];
    best.slopes.resize(static_cast<std::size_t>(n));
    double slope = beta[1];
    best.slopes[0] = slope;
    for (int s = 1; s < n; ++s) {
      slope += beta[static_cast<std::size_t>(1 + s)];
      best.slopes[static_cast<std::size_t>(s)] = slope;
    }
    std::vector<int> bp_idx;
    for (int year : best.breakpoints) {
      for (int i = 0; i < m; ++i) {
        if (series[static_cast<std::size_t>(i)].first == year) bp_idx.push_back(i);
      }
    }
    best.fitted = ctx.fitted(bp_idx, beta);
    double mse = std::max(best.sse, 1e-12) / m;
    best.bic = m * std::log(mse) + 2.0 * n * std::log(static_cast<double>(m));
    result.fits.push_back(std::move(best));
  }

  result.selected_segments = result.fits[0].segments;
  double best_bic = result.fits[0].bic;
  for (const auto& f : result.fits) {
    if (f.bic < best_bic) {
      best_bic = f.bic;
      result.selected_segments = f.segments;
    }
  }
  return result;
}

}  // namespace ideatrace
