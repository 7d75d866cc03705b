#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "percbound/error.hpp"
#include "percbound/parallel.hpp"
#include "percbound/transition.hpp"

namespace percbound {

/// Mean matrix evaluated at fixed parameters; shares the sparsity structure
/// of the symbolic matrix it came from.
struct NumericMatrix {
  std::shared_ptr<const CsrStructure> structure = std::make_shared<CsrStructure>();
  std::vector<double> values;

  std::size_t dimension() const { return structure->rows(); }

  /// Dense row-major input, zeros dropped.
  static NumericMatrix from_dense(std::size_t n, std::span<const double> dense) {
    auto s = std::make_shared<CsrStructure>();
    NumericMatrix m;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = dense[i * n + j];
        if (v != 0.0) {
          s->cols.push_back(static_cast<std::uint32_t>(j));
          m.values.push_back(v);
        }
      }
      s->row_ptr.push_back(s->cols.size());
    }
    m.structure = std::move(s);
    return m;
  }

  double at(std::size_t i, std::size_t j) const {
    for (std::uint64_t e = structure->row_ptr[i]; e < structure->row_ptr[i + 1]; ++e)
      if (structure->cols[e] == j) return values[e];
    return 0.0;
  }
};

inline NumericMatrix evaluate(const MeanMatrix& matrix, std::span<const double> params) {
  for (double p : params)
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("parameters must lie in [0, 1]");
  const std::vector<double> poly_values = matrix.pool().evaluate(params);
  NumericMatrix m;
  m.structure = matrix.structure();
  const auto ids = matrix.poly_ids();
  m.values.resize(ids.size());
  for (std::size_t e = 0; e < ids.size(); ++e) m.values[e] = poly_values[ids[e]];
  return m;
}

inline NumericMatrix evaluate(const MeanMatrix& matrix, double p) { return evaluate(matrix, std::span(&p, 1)); }

struct SpectralOptions {
  double tol = 1e-12;
  std::size_t max_iter = 200000;
  /// diagonal shift; the shifted matrix has the same Perron vector and no
  /// other eigenvalue of the same modulus
  double shift = 1e-3;
  int consecutive = 5;
  unsigned threads = 1;
};

struct SpectralReport {
  double radius_estimate = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;

  friend bool operator==(const SpectralReport&, const SpectralReport&) = default;
};

namespace detail {

inline constexpr std::size_t kSpmvChunk = 2048;

/// y = (M + shift I) x, returns sum(y). Chunk partial sums are combined in
/// chunk order so the result does not depend on the worker count.
inline double shifted_spmv(const NumericMatrix& m, double shift, std::span<const double> x, std::span<double> y,
                           ThreadPool* pool, std::vector<double>& partial) {
  const CsrStructure& s = *m.structure;
  const std::size_t n = s.rows();
  const std::size_t chunks = (n + kSpmvChunk - 1) / kSpmvChunk;
  partial.assign(chunks, 0.0);
  auto body = [&](std::size_t t) {
    const std::size_t b = t * kSpmvChunk;
    const std::size_t e = std::min(n, b + kSpmvChunk);
    double acc = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      double v = shift * x[i];
      for (std::uint64_t k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) v += m.values[k] * x[s.cols[k]];
      y[i] = v;
      acc += v;
    }
    partial[t] = acc;
  };
  if (pool != nullptr && pool->size() > 1 && chunks > 1)
    pool->run(chunks, body);
  else
    for (std::size_t t = 0; t < chunks; ++t) body(t);
  double sum = 0.0;
  for (double v : partial) sum += v;
  return sum;
}

}  // namespace detail

/// Collatz-Wielandt interval of the current iterate: for any positive x,
/// min (Mx)_i / x_i <= rho(M) <= max (Mx)_i / x_i.
struct RadiusBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool valid = false;
};

namespace detail {

/// Power iteration on M + shift*I from the all-ones vector. `stop(bracket)`
/// may end the run early; it is consulted after every iteration.
template <class Stop>
SpectralReport power_iteration(const NumericMatrix& m, const SpectralOptions& options, ThreadPool* pool,
                               RadiusBracket& bracket, Stop stop) {
  const std::size_t n = m.dimension();
  SpectralReport report;
  bracket = {};
  if (n == 0) {
    report.converged = true;
    bracket.valid = true;
    return report;
  }
  std::unique_ptr<ThreadPool> owned;
  if (pool == nullptr && options.threads > 1) {
    owned = std::make_unique<ThreadPool>(options.threads);
    pool = owned.get();
  }
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  std::vector<double> partial;
  double previous = -1.0;
  int settled = 0;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    const double ratio = shifted_spmv(m, options.shift, x, y, pool, partial);
    const double inv = 1.0 / ratio;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool positive = true;
    for (std::size_t i = 0; i < n; ++i) {
      // ratios are only trustworthy while x stays well inside the normal range
      if (x[i] < 1e-280) {
        positive = false;
      } else {
        const double r = y[i] / x[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      x[i] = y[i] * inv;
    }
    bracket.valid = positive;
    if (positive) {
      bracket.lower = std::max(0.0, lo - options.shift);
      bracket.upper = std::max(0.0, hi - options.shift);
    }
    report.iterations = it;
    report.radius_estimate = std::max(0.0, ratio - options.shift);
    if (previous > 0.0) {
      report.residual = std::abs(ratio - previous) / ratio;
      settled = report.residual <= options.tol ? settled + 1 : 0;
      if (settled >= options.consecutive) {
        report.converged = true;
        return report;
      }
    }
    if (stop(bracket)) return report;
    previous = ratio;
  }
  return report;
}

}  // namespace detail

/// Perron root of a nonnegative matrix by power iteration on M + shift*I from
/// the all-ones vector. Converged once the growth ratio changes by at most
/// `tol` (relative) for `consecutive` iterations in a row.
inline SpectralReport spectral_radius(const NumericMatrix& m, const SpectralOptions& options = {},
                                      ThreadPool* pool = nullptr) {
  RadiusBracket bracket;
  return detail::power_iteration(m, options, pool, bracket, [](const RadiusBracket&) { return false; });
}

struct Certificate {
  bool subcritical = false;
  /// settled by the Collatz-Wielandt interval before the estimate converged
  bool decided_early = false;
  SpectralReport report;
  RadiusBracket bracket;

  bool decided() const { return report.converged || decided_early; }
};

/// Subcritical when the converged estimate is strictly below 1 - margin, or,
/// with `early`, as soon as the Collatz-Wielandt upper bound is. The run also
/// stops early once the lower bound reaches 1 - margin. An undecided run is
/// never reported as subcritical.
inline Certificate is_subcritical(const NumericMatrix& m, double margin, const SpectralOptions& options = {},
                                  ThreadPool* pool = nullptr, bool early = true) {
  if (!(margin > 0.0)) throw InvalidArgument("margin must be positive");
  const double threshold = 1.0 - margin;
  Certificate c;
  c.report = detail::power_iteration(m, options, pool, c.bracket, [&](const RadiusBracket& b) {
    return early && b.valid && (b.upper < threshold || b.lower >= threshold);
  });
  if (c.report.converged) {
    c.subcritical = c.report.radius_estimate < threshold;
  } else if (early && c.bracket.valid && (c.bracket.upper < threshold || c.bracket.lower >= threshold)) {
    c.decided_early = true;
    c.subcritical = c.bracket.upper < threshold;
  }
  return c;
}

}  // namespace percbound
