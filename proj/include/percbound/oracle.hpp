#pragma once

// Independent checks of the automaton: exact reachability by a subset dynamic
// program, literal enumeration of a state's children, and Monte Carlo growth
// of the cluster. Lattice coordinates are rebuilt here from scratch instead of
// reusing WindowGeometry, so a slip in either place shows up as a mismatch.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "percbound/error.hpp"
#include "percbound/model.hpp"
#include "percbound/parallel.hpp"
#include "percbound/poly.hpp"
#include "percbound/spectral.hpp"
#include "percbound/state_space.hpp"
#include "percbound/transition.hpp"

namespace percbound {

namespace oracle_detail {

/// Out-steps of the lattice, listed by priority (first wins).
inline std::vector<Coord> steps(Lattice l) {
  switch (l) {
    case Lattice::VL2: return {{0, 1, 0}, {1, 0, 0}};
    case Lattice::ALT2: return {{-1, 1, 0}, {0, 1, 0}, {1, 1, 0}};
    case Lattice::VL3: return {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  }
  return {};
}

/// Vertices at graph distance m from the origin, in lexicographic order.
inline std::vector<Coord> level(Lattice l, int m) {
  std::vector<Coord> out;
  switch (l) {
    case Lattice::VL2:
      for (int x = 0; x <= m; ++x) out.push_back({x, m - x, 0});
      break;
    case Lattice::ALT2:
      for (int x = -m; x <= m; ++x) out.push_back({x, m, 0});
      break;
    case Lattice::VL3:
      for (int x = 0; x <= m; ++x)
        for (int y = 0; x + y <= m; ++y) out.push_back({x, y, m - x - y});
      break;
  }
  return out;
}

inline int floor_mod(int a, int m) { return ((a % m) + m) % m; }

/// Parameter (1 or 2) of the site at c.
inline int site_param(const ModelSpec& m, Coord c) {
  switch (m.inhomogeneity) {
    case Inhomogeneity::ModelI: return floor_mod(c.x, 2) == 0 ? 1 : 2;
    case Inhomogeneity::ModelII: return floor_mod(c.x + c.y, 2) == 0 ? 1 : 2;
    case Inhomogeneity::ModelIII: return floor_mod(c.x - c.y, 4) <= 1 ? 1 : 2;
    case Inhomogeneity::ModelIV: return floor_mod(c.x, 4) <= 1 ? 1 : 2;
    default: return 1;
  }
}

/// Parameter of an edge with the given step; vertical edges of Model V use p2.
inline int edge_param(const ModelSpec& m, Coord step) {
  if (m.inhomogeneity == Inhomogeneity::ModelV) return step == Coord{0, 1, 0} ? 2 : 1;
  return 1;
}

/// Linear form whose residue names a window's variant.
inline int variant_form(const ModelSpec& m, Coord c) {
  switch (m.inhomogeneity) {
    case Inhomogeneity::ModelI:
    case Inhomogeneity::ModelIV: return c.x;
    case Inhomogeneity::ModelII: return c.x + c.y;
    case Inhomogeneity::ModelIII: return c.x - c.y;
    default: return 0;
  }
}

inline bool coord_less(const Coord& a, const Coord& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

inline std::size_t find_coord(const std::vector<Coord>& sorted, Coord c) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), c, coord_less);
  if (it == sorted.end() || !(*it == c)) return sorted.size();
  return static_cast<std::size_t>(it - sorted.begin());
}

/// Numeric weights: p and 1-p as doubles.
struct DoubleWeights {
  std::span<const double> params;
  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  double p(int k) const { return params[static_cast<std::size_t>(k - 1)]; }
  double q(int k) const { return 1.0 - params[static_cast<std::size_t>(k - 1)]; }
};

/// Symbolic weights in the (p, 1-p) basis.
struct PolyWeights {
  Poly zero() const { return Poly::zero(); }
  Poly one() const { return Poly::one(); }
  Poly p(int k) const { return Poly::p(k); }
  Poly q(int k) const { return Poly::q(k); }
};

inline constexpr std::size_t kMaxLiveBits = 24;

/// Joint law of a set of binary occupancy variables, stored densely; bit b of
/// the index is variable live[b].
template <class V>
class SubsetLaw {
 public:
  explicit SubsetLaw(V certain_one) : dist_{} {
    live_.push_back(0);
    dist_.resize(2);
    dist_[0] = V{};
    dist_[1] = std::move(certain_one);
  }

  std::size_t bits() const { return live_.size(); }
  const std::vector<int>& live() const { return live_; }
  const std::vector<V>& dist() const { return dist_; }

  int bit_of(int id) const {
    for (std::size_t b = 0; b < live_.size(); ++b)
      if (live_[b] == id) return static_cast<int>(b);
    throw InternalInvariant("variable is not live");
  }

  /// Appends variable `id`; `split(mask)` returns (P(vacant), P(occupied)).
  template <class Split>
  void add(int id, Split split) {
    if (live_.size() + 1 > kMaxLiveBits)
      throw InstanceTooLarge("exact reachability needs more than " + std::to_string(kMaxLiveBits) +
                             " simultaneous occupancy variables");
    const std::size_t half = dist_.size();
    dist_.resize(2 * half);
    for (std::size_t m = 0; m < half; ++m) {
      auto [vacant, occupied] = split(m);
      dist_[m + half] = dist_[m] * occupied;
      dist_[m] = dist_[m] * vacant;
    }
    live_.push_back(id);
  }

  /// Folds variable `id` into the flag variable `flag` (flag |= id), then drops id.
  void merge_into(int id, int flag) {
    move_to_top(bit_of(id));
    const std::size_t half = dist_.size() / 2;
    const std::size_t f = std::size_t{1} << bit_of(flag);
    for (std::size_t m = 0; m < half; ++m) {
      if (dist_[m + half] == V{}) continue;
      dist_[m | f] = dist_[m | f] + dist_[m + half];
    }
    dist_.resize(half);
    live_.pop_back();
  }

  /// Sums variable `id` out.
  void marginalize(int id) {
    move_to_top(bit_of(id));
    const std::size_t half = dist_.size() / 2;
    for (std::size_t m = 0; m < half; ++m) dist_[m] = dist_[m] + dist_[m + half];
    dist_.resize(half);
    live_.pop_back();
  }

 private:
  void move_to_top(int b) {
    const int top = static_cast<int>(live_.size()) - 1;
    if (b == top) return;
    const std::size_t bb = std::size_t{1} << b;
    const std::size_t tb = std::size_t{1} << top;
    for (std::size_t m = 0; m < dist_.size(); ++m)
      if ((m & bb) && !(m & tb)) std::swap(dist_[m], dist_[m ^ bb ^ tb]);
    std::swap(live_[static_cast<std::size_t>(b)], live_[static_cast<std::size_t>(top)]);
  }

  std::vector<int> live_;
  std::vector<V> dist_;
};

struct ReachRun {
  std::vector<Coord> last_level;
  /// bit b of the index refers to last_level[order[b]]
  std::vector<std::size_t> order;
};

/// Runs the level-by-level DP to depth n. With `aggregate` the last level is
/// reduced to a single "some vertex occupied" flag (variable id -1).
template <class V, class W>
SubsetLaw<V> reach_law(const ModelSpec& model, int n, const W& w, bool aggregate, ReachRun* run = nullptr) {
  const std::vector<Coord> st = steps(model.lattice);
  const bool bond = model.percolation == Percolation::Bond;
  // Variable ids: level m vertex i -> base(m) + i. The origin is id 0.
  SubsetLaw<V> law(w.one());
  std::vector<Coord> current = level(model.lattice, 0);
  int current_base = 0;
  int next_base = 1;
  constexpr int kFlag = -1;

  for (int m = 0; m < n; ++m) {
    const std::vector<Coord> next = level(model.lattice, m + 1);
    const bool last = aggregate && m + 1 == n;
    if (last) {
      // flag variable starts vacant
      law.add(kFlag, [&](std::size_t) { return std::pair<V, V>{w.one(), w.zero()}; });
    }
    // in-edges of every target: (source index, step index)
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> in(next.size());
    std::vector<std::size_t> retire_after(current.size(), 0);
    for (std::size_t s = 0; s < current.size(); ++s)
      for (std::size_t d = 0; d < st.size(); ++d) {
        const std::size_t t = find_coord(next, current[s] + st[d]);
        if (t == next.size()) throw InternalInvariant("successor missing from next level");
        in[t].push_back({s, d});
        retire_after[s] = std::max(retire_after[s], t);
      }
    for (std::size_t t = 0; t < next.size(); ++t) {
      std::vector<std::pair<std::size_t, std::size_t>> sources;  // (bit, step)
      for (auto [s, d] : in[t])
        sources.push_back({static_cast<std::size_t>(law.bit_of(current_base + static_cast<int>(s))), d});
      const int site_k = site_param(model, next[t]);
      auto split = [&](std::size_t mask) {
        V vacant = w.one();
        V occupied = w.zero();
        if (bond) {
          // first open in-edge decomposition keeps every term nonnegative
          for (auto [bit, d] : sources) {
            if (!((mask >> bit) & 1u)) continue;
            const int k = edge_param(model, st[d]);
            occupied = occupied + vacant * w.p(k);
            vacant = vacant * w.q(k);
          }
        } else {
          bool reached = false;
          for (auto [bit, d] : sources) reached = reached || ((mask >> bit) & 1u);
          if (reached) {
            occupied = w.p(site_k);
            vacant = w.q(site_k);
          }
        }
        return std::pair<V, V>{vacant, occupied};
      };
      const int id = next_base + static_cast<int>(t);
      law.add(id, split);
      if (last) law.merge_into(id, kFlag);
      for (std::size_t s = 0; s < current.size(); ++s)
        if (retire_after[s] == t) law.marginalize(current_base + static_cast<int>(s));
    }
    current = next;
    current_base = next_base;
    next_base += static_cast<int>(next.size());
  }
  if (run != nullptr) {
    run->last_level = current;
    run->order.clear();
    if (!aggregate || n == 0)
      for (int id : law.live()) run->order.push_back(static_cast<std::size_t>(id - current_base));
  }
  return law;
}

inline void check_depth(const ModelSpec& model, int n) {
  if (n < 0) throw InvalidArgument("depth must be nonnegative");
  const int cap = model.lattice == Lattice::VL3 ? 8 : 14;
  if (n > cap) throw InstanceTooLarge("depth " + std::to_string(n) + " exceeds the exact limit " + std::to_string(cap));
}

inline void check_params(const ModelSpec& model, std::span<const double> params) {
  if (params.size() != static_cast<std::size_t>(model.arity))
    throw InvalidArgument("model " + model_id(model) + " takes " + std::to_string(model.arity) + " parameter(s)");
  for (double p : params)
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("parameters must lie in [0, 1]");
}

}  // namespace oracle_detail

/// Exact law of the occupied subset of the level at depth n (origin occupied).
struct LevelDistribution {
  int depth = 0;
  std::vector<Coord> vertices;
  /// probability of each subset; bit i of the index is vertices[i]
  std::vector<double> probability;

  double reach_probability() const { return 1.0 - probability.at(0); }
};

inline LevelDistribution level_distribution(const ModelSpec& model, int n, std::span<const double> params) {
  validate(model);
  oracle_detail::check_depth(model, n);
  oracle_detail::check_params(model, params);
  oracle_detail::ReachRun run;
  const auto law =
      oracle_detail::reach_law<double>(model, n, oracle_detail::DoubleWeights{params}, false, &run);
  LevelDistribution out;
  out.depth = n;
  out.vertices = run.last_level;
  out.probability.assign(law.dist().size(), 0.0);
  for (std::size_t m = 0; m < law.dist().size(); ++m) {
    std::size_t mapped = 0;
    for (std::size_t b = 0; b < run.order.size(); ++b)
      if ((m >> b) & 1u) mapped |= std::size_t{1} << run.order[b];
    out.probability[mapped] += law.dist()[m];
  }
  return out;
}

/// P(some vertex at depth n is reached from the origin).
inline double exact_reach_probability(const ModelSpec& model, int n, std::span<const double> params) {
  validate(model);
  oracle_detail::check_depth(model, n);
  oracle_detail::check_params(model, params);
  if (n == 0) return 1.0;
  const auto law = oracle_detail::reach_law<double>(model, n, oracle_detail::DoubleWeights{params}, true);
  const auto& d = law.dist();
  return d[1];  // only the flag remains live
}

inline double exact_reach_probability(const ModelSpec& model, int n, double p) {
  return exact_reach_probability(model, n, std::span<const double>(&p, 1));
}

/// The same quantity as a polynomial in the (p, 1-p) basis.
inline Poly exact_reach_polynomial(const ModelSpec& model, int n) {
  validate(model);
  oracle_detail::check_depth(model, n);
  if (n == 0) return Poly::one();
  const auto law = oracle_detail::reach_law<Poly>(model, n, oracle_detail::PolyWeights{}, true);
  return law.dist()[1];
}

/// Expected number of particles at generation n started from one particle of
/// type `root`: e_root^T M^n 1.
inline double expected_alive(const MeanMatrix& matrix, std::span<const double> params, std::size_t root, int n) {
  if (n < 0) throw InvalidArgument("generation must be nonnegative");
  if (root >= matrix.dimension()) throw InvalidArgument("root state out of range");
  const NumericMatrix m = evaluate(matrix, params);
  const CsrStructure& s = *m.structure;
  std::vector<double> x(m.dimension(), 1.0);
  std::vector<double> y(m.dimension());
  for (int g = 0; g < n; ++g) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      double v = 0.0;
      for (std::uint64_t e = s.row_ptr[i]; e < s.row_ptr[i + 1]; ++e) v += m.values[e] * x[s.cols[e]];
      y[i] = v;
    }
    x.swap(y);
  }
  return x[root];
}

inline double expected_alive(const MeanMatrix& matrix, double p, std::size_t root, int n) {
  return expected_alive(matrix, std::span<const double>(&p, 1), root, n);
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct McOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct McResult {
  std::size_t trials = 0;
  std::size_t survived = 0;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval at 99% confidence.
inline std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z = kZ99) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (ph + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace oracle_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline bool draw(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

/// One cluster growth to `depth`; only the current frontier is stored.
inline bool survives(const ModelSpec& model, std::span<const double> params, int depth, std::mt19937_64& rng) {
  const std::vector<Coord> st = steps(model.lattice);
  const bool bond = model.percolation == Percolation::Bond;
  std::vector<Coord> frontier{Coord{}};
  std::vector<Coord> next;
  for (int m = 0; m < depth && !frontier.empty(); ++m) {
    next.clear();
    for (const Coord& v : frontier)
      for (const Coord& s : st)
        if (!bond || draw(rng, params[static_cast<std::size_t>(edge_param(model, s) - 1)])) next.push_back(v + s);
    std::sort(next.begin(), next.end(), coord_less);
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (!bond)
      std::erase_if(next, [&](const Coord& c) {
        return !draw(rng, params[static_cast<std::size_t>(site_param(model, c) - 1)]);
      });
    frontier.swap(next);
  }
  return !frontier.empty();
}

}  // namespace oracle_detail

/// Fraction of clusters from the origin that reach the given depth. Trial t
/// always uses the generator seeded from (seed, t), so the result does not
/// depend on the worker count.
inline McResult mc_survival(const ModelSpec& model, std::span<const double> params, int depth, std::size_t trials,
                            const McOptions& options = {}) {
  validate(model);
  oracle_detail::check_params(model, params);
  if (trials < 1) throw InvalidArgument("at least one trial is required");
  if (depth < 0) throw InvalidArgument("depth must be nonnegative");
  const unsigned threads = std::max(1u, options.threads);
  const std::size_t blocks = std::min<std::size_t>(trials, std::size_t{threads} * 8);
  std::vector<std::size_t> hits(blocks, 0);
  auto body = [&](std::size_t b) {
    for (std::size_t t = b; t < trials; t += blocks) {
      std::mt19937_64 rng(oracle_detail::splitmix64(options.seed ^ oracle_detail::splitmix64(t)));
      if (oracle_detail::survives(model, params, depth, rng)) ++hits[b];
    }
  };
  if (threads > 1) {
    ThreadPool pool(threads);
    pool.run(blocks, body);
  } else {
    for (std::size_t b = 0; b < blocks; ++b) body(b);
  }
  McResult r;
  r.trials = trials;
  for (std::size_t h : hits) r.survived += h;
  r.estimate = static_cast<double>(r.survived) / static_cast<double>(trials);
  std::tie(r.lower, r.upper) = wilson_interval(r.survived, trials);
  return r;
}

inline McResult mc_survival(const ModelSpec& model, double p, int depth, std::size_t trials,
                            const McOptions& options = {}) {
  return mc_survival(model, std::span<const double>(&p, 1), depth, trials, options);
}

// ---------------------------------------------------------------------------
// Literal child enumeration

struct ChildExpectation {
  std::size_t ordinal = 0;
  Poly expectation;
};

namespace oracle_detail {

/// Window slots in lattice coordinates, in slot order.
inline std::vector<Coord> window_layout(Lattice l, const SpaceSpec& spec) {
  std::vector<Coord> out;
  if (l == Lattice::VL3) {
    const int L = spec.side;
    for (int r = 1; r <= L; ++r)
      for (int c = 1; c <= r; ++c) out.push_back({r - c, c - 1, L - r});
    return out;
  }
  const int width = spec.window().length;
  for (int s = 0; s < width; ++s) out.push_back(l == Lattice::VL2 ? Coord{s, -s, 0} : Coord{s, 0, 0});
  return out;
}

inline constexpr int kMaxEnumerated = 22;

}  // namespace oracle_detail

/// Expected number of children of each type for one state, found by listing
/// every configuration of the randomness reachable from the occupied slots.
/// Entries are sorted by child ordinal.
inline std::vector<ChildExpectation> brute_force_children(const ModelSpec& model, const StateSpace& space,
                                                          std::size_t state) {
  using namespace oracle_detail;
  if (state >= space.size()) throw InvalidArgument("state ordinal out of range");
  const SpaceSpec& spec = space.spec();
  const Lattice l = model.lattice;
  const bool bond = model.percolation == Percolation::Bond;
  const std::vector<Coord> st = steps(l);
  std::vector<Coord> layout = window_layout(l, spec);
  const std::size_t width = layout.size();
  const std::size_t root = l == Lattice::VL3 ? static_cast<std::size_t>(spec.focus - 1) : 0;
  const StateBits bits = space.pattern(state);
  auto occupied_slot = [&](std::size_t s) { return ((bits >> (width - 1 - s)) & 1u) != 0; };

  // Place the window so its rightmost vertex has the state's residue.
  const int period = tag_period(model);
  if (period > 1) {
    const Coord rightmost = layout[width - 1];
    int a = 0;
    while (floor_mod(variant_form(model, rightmost + Coord{a, 0, 0}), period) != space.tag(state).residue) ++a;
    for (Coord& c : layout) c = c + Coord{a, 0, 0};
  }

  // Random variables: edges out of occupied slots (bond) or the sites they reach (site).
  struct Edge {
    std::size_t from;
    std::size_t step;
    Coord to;
  };
  std::vector<Edge> edges;
  std::vector<Coord> sites;
  for (std::size_t s = 0; s < width; ++s) {
    if (!occupied_slot(s)) continue;
    for (std::size_t d = 0; d < st.size(); ++d) {
      edges.push_back({s, d, layout[s] + st[d]});
      sites.push_back(layout[s] + st[d]);
    }
  }
  std::sort(sites.begin(), sites.end(), coord_less);
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  const std::size_t vars = bond ? edges.size() : sites.size();
  if (vars > static_cast<std::size_t>(kMaxEnumerated))
    throw InstanceTooLarge("state has " + std::to_string(vars) + " random variables; at most " +
                           std::to_string(kMaxEnumerated) + " can be enumerated");

  std::vector<int> var_param(vars);
  for (std::size_t v = 0; v < vars; ++v)
    var_param[v] = bond ? edge_param(model, st[edges[v].step]) : site_param(model, sites[v]);

  std::map<std::pair<std::size_t, std::uint32_t>, std::uint64_t> counts;
  std::vector<Coord> reached;
  for (std::uint64_t config = 0; config < (std::uint64_t{1} << vars); ++config) {
    auto open = [&](std::size_t v) { return ((config >> v) & 1u) != 0; };
    Exponents e;
    for (std::size_t v = 0; v < vars; ++v) {
      const bool p2 = var_param[v] == 2;
      std::uint8_t& slot = open(v) ? (p2 ? e.a2 : e.a1) : (p2 ? e.b2 : e.b1);
      ++slot;
    }
    // occupied successors
    reached.clear();
    if (bond) {
      for (std::size_t v = 0; v < vars; ++v)
        if (open(v)) reached.push_back(edges[v].to);
    } else {
      for (std::size_t v = 0; v < vars; ++v)
        if (open(v)) reached.push_back(sites[v]);
    }
    std::sort(reached.begin(), reached.end(), coord_less);
    reached.erase(std::unique(reached.begin(), reached.end()), reached.end());
    auto is_reached = [&](Coord c) { return find_coord(reached, c) != reached.size(); };

    for (std::size_t d = 0; d < st.size(); ++d) {
      const Coord target = layout[root] + st[d];
      if (!is_reached(target)) continue;
      bool good = true;
      if (bond) {
        bool own_open = false;
        for (std::size_t v = 0; v < vars; ++v) {
          if (!open(v) || !(edges[v].to == target)) continue;
          if (edges[v].from == root && edges[v].step == d) own_open = true;
          if (edges[v].step < d) good = false;
        }
        good = good && own_open;
      } else {
        for (std::size_t s = 0; s < width; ++s)
          for (std::size_t d2 = 0; d2 < d; ++d2)
            if (occupied_slot(s) && layout[s] + st[d2] == target) good = false;
      }
      if (!good) continue;
      const Coord shift = st[d];
      StateBits child = 0;
      for (std::size_t s = 0; s < width; ++s) child = (child << 1) | (is_reached(layout[s] + shift) ? 1u : 0u);
      VariantTag tag;
      if (period > 1) tag = {floor_mod(variant_form(model, layout[width - 1] + shift), period)};
      std::optional<std::size_t> ordinal = space.index(child, tag);
      if (!ordinal) ordinal = space.index(child & ~StateBits{1}, tag);
      if (!ordinal) throw InternalInvariant("child " + to_bitstring(child, width) + " cannot be projected");
      ++counts[{*ordinal, e.key()}];
    }
  }

  std::vector<ChildExpectation> out;
  std::vector<Term> terms;
  for (auto it = counts.begin(); it != counts.end();) {
    const std::size_t ordinal = it->first.first;
    terms.clear();
    for (; it != counts.end() && it->first.first == ordinal; ++it) terms.push_back({it->first.second, it->second});
    out.push_back({ordinal, Poly::from_terms(terms)});
  }
  return out;
}

}  // namespace percbound
