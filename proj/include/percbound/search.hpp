#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "percbound/error.hpp"
#include "percbound/model.hpp"
#include "percbound/spectral.hpp"
#include "percbound/state_space.hpp"
#include "percbound/transition.hpp"

namespace percbound {

struct BoundResult {
  std::string model;
  std::string space;
  std::optional<double> p2;
  double bound = 0.0;
  double lambda_at_bound = 0.0;
  std::size_t bisection_iterations = 0;
  double wall_time = 0.0;
  std::size_t state_count = 0;
  std::size_t distinct_poly_count = 0;

  friend bool operator==(const BoundResult&, const BoundResult&) = default;
};

struct SearchOptions {
  double bisect_tol = 1e-7;
  double margin = 1e-6;
  /// smallest parameter probed; a model supercritical there is degenerate
  double floor = 1e-6;
  SpectralOptions spectral;
  BuildOptions build;
  /// log a 21-point scan of the spectral radius to surface non-monotonicity
  bool verbose = false;
  std::ostream* log = nullptr;
};

/// Subcriticality test at one parameter point; throws NonConvergence when the
/// power iteration does not settle, since that outcome is indeterminate.
class CriticalityProbe {
 public:
  CriticalityProbe(const MeanMatrix& matrix, std::optional<double> p2, const SearchOptions& options)
      : matrix_(matrix), p2_(p2), options_(options), pool_(std::max(1u, options.spectral.threads)) {
    if (matrix.model().arity == 2 && !p2) throw InvalidArgument("two-parameter models need p2");
    if (matrix.model().arity == 1 && p2) throw InvalidArgument("p2 only applies to two-parameter models");
  }

  /// With `early` the probe may settle on the Collatz-Wielandt interval
  /// alone; without it the power iteration must converge.
  Certificate operator()(double p, bool early = true) {
    std::vector<double> params{p};
    if (p2_) params.push_back(*p2_);
    const NumericMatrix numeric = evaluate(matrix_, params);
    Certificate c = is_subcritical(numeric, options_.margin, options_.spectral, &pool_, early);
    if (!c.decided())
      throw NonConvergence("power iteration did not converge at p=" + std::to_string(p) + " after " +
                           std::to_string(c.report.iterations) + " iterations (residual " +
                           std::to_string(c.report.residual) + ")");
    return c;
  }

 private:
  const MeanMatrix& matrix_;
  std::optional<double> p2_;
  const SearchOptions& options_;
  ThreadPool pool_;
};

/// Largest p (floored to 6 decimals) at which the evaluated mean matrix is
/// certified subcritical. The returned value is re-certified on its own, so
/// its validity never rests on monotonicity of the radius in p.
inline BoundResult lower_bound(const MeanMatrix& matrix, std::optional<double> p2, const SearchOptions& options = {}) {
  if (!(options.bisect_tol >= 1e-9)) throw InvalidArgument("bisection tolerance must be at least 1e-9");
  if (p2 && !(*p2 >= 0.0 && *p2 <= 1.0)) throw InvalidArgument("p2 must lie in [0, 1]");
  const auto start = std::chrono::steady_clock::now();
  CriticalityProbe probe(matrix, p2, options);

  if (options.verbose && options.log != nullptr) {
    double last = -1.0;
    for (int g = 0; g <= 20; ++g) {
      const double p = g / 20.0;
      double rho = 0.0;
      try {
        rho = probe(p, false).report.radius_estimate;
      } catch (const NonConvergence&) {
        *options.log << "scan p=" << p << " rho unresolved\n";
        continue;
      }
      *options.log << "scan p=" << p << " rho=" << rho << '\n';
      if (rho + 1e-12 < last) *options.log << "warning: spectral radius decreases at p=" << p << '\n';
      last = rho;
    }
  }

  BoundResult r;
  r.model = model_id(matrix.model());
  r.space = to_string(matrix.spec());
  r.p2 = p2;
  r.state_count = matrix.dimension();
  r.distinct_poly_count = matrix.pool().size();

  double lo = options.floor;
  double hi = 1.0;
  if (!probe(lo).subcritical)
    throw Error("model is not subcritical even at p=" + std::to_string(lo) + "; no bound exists");
  // hi = 1 is never probed: every catalog model is supercritical there.
  while (hi - lo > options.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid).subcritical ? lo : hi) = mid;
    ++r.bisection_iterations;
    if (options.log != nullptr && options.verbose) *options.log << "bisect [" << lo << ", " << hi << "]\n";
  }

  r.bound = std::floor(lo * 1e6) / 1e6;
  // independent final evaluation, run to convergence
  const Certificate final_check = probe(r.bound, false);
  if (!final_check.subcritical)
    throw Error("bound " + std::to_string(r.bound) + " failed re-certification (radius " +
                std::to_string(final_check.report.radius_estimate) + ")");
  r.lambda_at_bound = final_check.report.radius_estimate;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline BoundResult lower_bound(const ModelSpec& model, const SpaceSpec& spec, std::optional<double> p2,
                               const SearchOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const MeanMatrix matrix = build_matrix(model, spec, options.build);
  BoundResult r = lower_bound(matrix, p2, options);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Reference tables

enum class TableSelector { Main, Comparison, Inhomogeneous, ThreeD };

inline TableSelector parse_table_selector(const std::string& s) {
  if (s == "main") return TableSelector::Main;
  if (s == "comparison") return TableSelector::Comparison;
  if (s == "inhomogeneous") return TableSelector::Inhomogeneous;
  if (s == "three-d") return TableSelector::ThreeD;
  throw InvalidArgument("unknown table '" + s + "' (main, comparison, inhomogeneous, three-d)");
}

struct TableEntry {
  std::string model;
  SpaceSpec space;
  std::optional<double> p2;
  /// reference lower bound at the reference size
  double reference = 0.0;
};

inline std::vector<TableEntry> table_entries(TableSelector selector) {
  using S = SpaceSpec;
  switch (selector) {
    case TableSelector::Main:
      return {{"site-vl2", S::truncated(16, 7, 3620), std::nullopt, 0.6967},
              {"bond-vl2", S::truncated(16, 7, 3620), std::nullopt, 0.636893},
              {"site-alt2", S::plain(15), std::nullopt, 0.525},
              {"bond-alt2", S::plain(13), std::nullopt, 0.4022},
              {"site-vl3", S::triangle(5, 6), std::nullopt, 0.41507},
              {"bond-vl3", S::triangle(4, 3), std::nullopt, 0.36684}};
    case TableSelector::Comparison:
      return {{"bond-vl2", S::truncated(6, 2, 0), std::nullopt, 0.624211},
              {"bond-vl2", S::truncated(7, 2, 0), std::nullopt, 0.627067},
              {"bond-vl2", S::truncated(8, 2, 1), std::nullopt, 0.629203},
              {"bond-vl2", S::truncated(9, 2, 10), std::nullopt, 0.630864},
              {"bond-vl2", S::truncated(10, 2, 28), std::nullopt, 0.632193},
              {"bond-vl2", S::truncated(11, 2, 44), std::nullopt, 0.63328}};
    case TableSelector::Inhomogeneous:
      return {{"inhom-1", S::plain(15), 0.6, 0.7693}, {"inhom-1", S::plain(15), 0.8, 0.5444},
              {"inhom-2", S::plain(15), 0.6, 0.8189}, {"inhom-2", S::plain(14), 0.8, 0.6103},
              {"inhom-2", S::plain(14), 1.0, 0.5223}, {"inhom-3", S::plain(13), 0.6, 0.7759},
              {"inhom-3", S::plain(13), 0.8, 0.5753}, {"inhom-4", S::plain(13), 0.6, 0.7720},
              {"inhom-4", S::plain(13), 0.8, 0.5583}, {"inhom-5", S::plain(15), 0.5, 0.7539}};
    case TableSelector::ThreeD:
      return {{"site-vl3", S::triangle(4, 3), std::nullopt, 0.41},
              {"site-vl3", S::triangle(5, 6), std::nullopt, 0.41507},
              {"site-vl3", S::triangle(5, 3), std::nullopt, 0.4112},
              {"bond-vl3", S::triangle(4, 3), std::nullopt, 0.36684}};
  }
  return {};
}

/// Size overrides for running the tables at desk scale.
struct TableOverrides {
  std::optional<int> k;  // 2D rows use Plain(k)
  std::optional<int> L;  // 3D rows use Triangle(L, default focus)
};

struct TableRow {
  TableEntry entry;
  BoundResult result;
};

inline std::vector<TableEntry> resolve_table(TableSelector selector, const TableOverrides& overrides) {
  std::vector<TableEntry> entries = table_entries(selector);
  for (TableEntry& e : entries) {
    if (e.space.kind == SpaceKind::Triangle) {
      if (overrides.L) e.space = SpaceSpec::triangle(*overrides.L, default_focus(*overrides.L));
    } else if (overrides.k) {
      e.space = SpaceSpec::plain(*overrides.k);
    }
  }
  return entries;
}

inline std::vector<TableRow> reproduce_tables(TableSelector selector, const TableOverrides& overrides = {},
                                              const SearchOptions& options = {}) {
  std::vector<TableRow> rows;
  for (const TableEntry& e : resolve_table(selector, overrides))
    rows.push_back({e, lower_bound(parse_model(e.model), e.space, e.p2, options)});
  return rows;
}

}  // namespace percbound
