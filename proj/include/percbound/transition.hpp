#pragma once

// Symbolic mean matrix of the multitype branching process.
//
// For one child direction, the event "the child exists" only involves the
// randomness attached to the child's root successor (its in-edges, or its own
// site), and each other child slot only involves the randomness attached to
// that slot. Distinct successor slots never share an edge or a site, so the
// law of a child pattern is the existence polynomial times one factor per
// slot. Children of different directions do share randomness, but only their
// expectations are needed and those add up without any joint law.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "percbound/error.hpp"
#include "percbound/model.hpp"
#include "percbound/parallel.hpp"
#include "percbound/poly.hpp"
#include "percbound/state_space.hpp"

namespace percbound {

struct SlotLaw {
  Poly occupied;
  Poly vacant;
};

struct ChildLaw {
  int direction = 0;
  VariantTag tag;
  /// child slot holding the child's root (always occupied when the child exists)
  std::size_t root_position = 0;
  Poly existence;
  /// one entry per child slot; the root position holds {1, 0}
  std::vector<SlotLaw> slots;
};

namespace detail {

inline bool slot_occupied(StateBits bits, std::size_t width, std::size_t slot) {
  return (bits >> (width - 1 - slot)) & 1u;
}

}  // namespace detail

inline ChildLaw child_law(const ModelSpec& model, const WindowGeometry& geometry, const StateSpace& space,
                          std::size_t ordinal, int direction) {
  if (direction < 0 || direction >= geometry.directions())
    throw InvalidArgument("direction " + std::to_string(direction) + " is invalid for this lattice");
  const StateBits bits = space.pattern(ordinal);
  const VariantTag tag = space.tag(ordinal);
  const std::size_t width = geometry.slot_count();
  const ChildWindow& window = geometry.children[static_cast<std::size_t>(direction)];
  const std::size_t target = window.root_successor;
  const bool bond = model.percolation == Percolation::Bond;
  auto occupied = [&](std::size_t slot) { return detail::slot_occupied(bits, width, slot); };
  auto site_param = [&](std::size_t successor) {
    return param_index(model, tag, geometry.successor_offsets[successor]);
  };

  ChildLaw law;
  law.direction = direction;
  law.tag = child_tag(model, tag, direction);

  if (bond) {
    law.existence = Poly::p(edge_param_index(model, direction));
    for (const InNeighbor& in : geometry.in_neighbors[target])
      if (in.direction < direction && occupied(in.slot))
        law.existence = law.existence * Poly::q(edge_param_index(model, in.direction));
  } else {
    bool blocked = false;
    for (const InNeighbor& in : geometry.in_neighbors[target])
      if (in.direction < direction && occupied(in.slot)) blocked = true;
    law.existence = blocked ? Poly::zero() : Poly::p(site_param(target));
  }

  law.slots.reserve(window.slots.size());
  for (std::size_t c = 0; c < window.slots.size(); ++c) {
    const std::size_t t = window.slots[c];
    if (t == target) {
      law.root_position = c;
      law.slots.push_back({Poly::one(), Poly::zero()});
      continue;
    }
    SlotLaw slot{Poly::zero(), Poly::one()};
    if (bond) {
      // P(occupied) split on the first open in-edge, in priority order.
      for (const InNeighbor& in : geometry.in_neighbors[t]) {
        if (!occupied(in.slot)) continue;
        const int param = edge_param_index(model, in.direction);
        slot.occupied = slot.occupied + slot.vacant * Poly::p(param);
        slot.vacant = slot.vacant * Poly::q(param);
      }
    } else {
      bool reachable = false;
      for (const InNeighbor& in : geometry.in_neighbors[t]) reachable = reachable || occupied(in.slot);
      if (reachable) slot = {Poly::p(site_param(t)), Poly::q(site_param(t))};
    }
    law.slots.push_back(std::move(slot));
  }
  return law;
}

/// Row-compressed sparsity structure shared between symbolic and numeric matrices.
struct CsrStructure {
  std::vector<std::uint64_t> row_ptr{0};
  std::vector<std::uint32_t> cols;

  std::size_t rows() const { return row_ptr.size() - 1; }
  std::size_t nonzeros() const { return cols.size(); }
};

struct MatrixStats {
  std::size_t nonzeros = 0;
  std::size_t distinct_polys = 0;
  double build_seconds = 0.0;
};

/// Entry (i, j) is E[# children of type j | parent of type i] as a polynomial.
class MeanMatrix {
 public:
  MeanMatrix() = default;
  MeanMatrix(ModelSpec model, SpaceSpec spec, std::shared_ptr<const CsrStructure> structure,
             std::vector<std::uint32_t> poly_ids, PolyPool pool, MatrixStats stats)
      : model_(model),
        spec_(spec),
        structure_(std::move(structure)),
        poly_ids_(std::move(poly_ids)),
        pool_(std::move(pool)),
        stats_(stats) {}

  const ModelSpec& model() const { return model_; }
  const SpaceSpec& spec() const { return spec_; }
  std::size_t dimension() const { return structure_->rows(); }
  const std::shared_ptr<const CsrStructure>& structure() const { return structure_; }
  std::span<const std::uint32_t> poly_ids() const { return poly_ids_; }
  const PolyPool& pool() const { return pool_; }
  const MatrixStats& stats() const { return stats_; }

  struct Entry {
    std::uint32_t col;
    std::uint32_t poly;
  };

  std::vector<Entry> row(std::size_t i) const {
    std::vector<Entry> out;
    for (std::uint64_t e = structure_->row_ptr[i]; e < structure_->row_ptr[i + 1]; ++e)
      out.push_back({structure_->cols[e], poly_ids_[e]});
    return out;
  }

  Poly entry(std::size_t i, std::size_t j) const {
    const auto b = structure_->cols.begin() + static_cast<std::ptrdiff_t>(structure_->row_ptr[i]);
    const auto e = structure_->cols.begin() + static_cast<std::ptrdiff_t>(structure_->row_ptr[i + 1]);
    const auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(j));
    if (it == e || *it != j) return Poly::zero();
    return pool_[poly_ids_[static_cast<std::size_t>(it - structure_->cols.begin())]];
  }

 private:
  ModelSpec model_;
  SpaceSpec spec_;
  std::shared_ptr<const CsrStructure> structure_ = std::make_shared<CsrStructure>();
  std::vector<std::uint32_t> poly_ids_;
  PolyPool pool_;
  MatrixStats stats_;
};

struct BuildOptions {
  unsigned threads = default_thread_count();
  /// 0 disables the check
  std::size_t memory_budget_bytes = 0;
  std::size_t rows_per_task = 16;
};

namespace detail {

/// Expands the rows of one worker; products of slot factors are memoized
/// through interned ids because the same few factors recur everywhere.
class RowExpander {
 public:
  RowExpander(const ModelSpec& model, const WindowGeometry& geometry, const StateSpace& space)
      : model_(model), geometry_(geometry), space_(space) {}

  /// (column, polynomial) pairs sorted by column.
  std::vector<std::pair<std::uint32_t, Poly>> expand(std::size_t ordinal) {
    if (scratch_.size() > (1u << 20)) {
      scratch_.clear();
      products_.clear();
    }
    const std::uint32_t one = scratch_.intern(Poly::one());
    std::vector<std::pair<std::uint32_t, Poly>> combined;
    const std::size_t width = geometry_.slot_count();

    for (int d = 0; d < geometry_.directions(); ++d) {
      const ChildLaw law = child_law(model_, geometry_, space_, ordinal, d);
      if (law.existence.is_zero()) continue;

      struct Factor {
        StateBits bit;
        std::uint32_t occupied;  // UINT32_MAX when the slot cannot be occupied
        std::uint32_t vacant;
      };
      std::vector<Factor> factors;
      for (std::size_t c = 0; c < law.slots.size(); ++c) {
        if (c == law.root_position) continue;
        const SlotLaw& s = law.slots[c];
        factors.push_back({StateBits{1} << (width - 1 - c),
                           s.occupied.is_zero() ? UINT32_MAX : scratch_.intern(s.occupied),
                           scratch_.intern(s.vacant)});
      }
      const StateBits root_bit = StateBits{1} << (width - 1 - law.root_position);

      leaves_.clear();
      std::function<void(std::size_t, std::uint32_t, StateBits)> walk = [&](std::size_t depth, std::uint32_t prod,
                                                                            StateBits bits) {
        if (depth == factors.size()) {
          leaves_.push_back({static_cast<std::uint32_t>(space_.project(bits, law.tag)), prod});
          return;
        }
        const Factor& f = factors[depth];
        if (f.occupied != UINT32_MAX) walk(depth + 1, times(prod, f.occupied), bits | f.bit);
        walk(depth + 1, times(prod, f.vacant), bits);
      };
      walk(0, one, root_bit);

      std::sort(leaves_.begin(), leaves_.end());
      for (std::size_t a = 0; a < leaves_.size();) {
        std::size_t b = a;
        Poly sum;
        while (b < leaves_.size() && leaves_[b].first == leaves_[a].first) sum += scratch_[leaves_[b++].second];
        combined.emplace_back(leaves_[a].first, law.existence * sum);
        a = b;
      }
    }

    std::stable_sort(combined.begin(), combined.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<std::uint32_t, Poly>> row;
    for (auto& [col, poly] : combined) {
      if (!row.empty() && row.back().first == col)
        row.back().second += poly;
      else
        row.emplace_back(col, std::move(poly));
    }
    return row;
  }

 private:
  std::uint32_t times(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (std::uint64_t{a} << 32) | b;
    if (auto it = products_.find(key); it != products_.end()) return it->second;
    const std::uint32_t id = scratch_.intern(scratch_[a] * scratch_[b]);
    products_.emplace(key, id);
    return id;
  }

  const ModelSpec& model_;
  const WindowGeometry& geometry_;
  const StateSpace& space_;
  PolyPool scratch_;
  std::unordered_map<std::uint64_t, std::uint32_t> products_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> leaves_;
};

struct ChunkRows {
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> cols;
  std::vector<std::uint32_t> local_ids;
  PolyPool pool;
};

}  // namespace detail

/// Builds the symbolic mean matrix. The result (including polynomial ids) is
/// identical for every thread count.
inline MeanMatrix build_matrix(const ModelSpec& model, const StateSpace& space, const BuildOptions& options = {}) {
  const auto start = std::chrono::steady_clock::now();
  const WindowGeometry geometry = window_geometry(model, space.spec().window());
  const std::size_t n = space.size();
  const unsigned threads = std::max(1u, options.threads);
  const std::size_t per_task = std::max<std::size_t>(1, options.rows_per_task);

  auto structure = std::make_shared<CsrStructure>();
  structure->row_ptr.reserve(n + 1);
  std::vector<std::uint32_t> poly_ids;
  PolyPool pool;

  ThreadPool workers(threads);
  std::vector<detail::RowExpander> expanders;
  for (unsigned w = 0; w < threads; ++w) expanders.emplace_back(model, geometry, space);
  std::vector<std::mutex> expander_locks(threads);

  const std::size_t tasks_total = (n + per_task - 1) / per_task;
  const std::size_t wave = static_cast<std::size_t>(threads) * 4;
  for (std::size_t first = 0; first < tasks_total; first += wave) {
    const std::size_t count = std::min(wave, tasks_total - first);
    std::vector<detail::ChunkRows> chunks(count);
    workers.run(count, [&](std::size_t t) {
      // Any free expander will do: its caches only speed things up.
      std::size_t slot = t % threads;
      std::unique_lock lock(expander_locks[slot], std::try_to_lock);
      while (!lock.owns_lock()) {
        slot = (slot + 1) % threads;
        lock = std::unique_lock(expander_locks[slot], std::try_to_lock);
      }
      detail::ChunkRows& out = chunks[t];
      const std::size_t b = (first + t) * per_task;
      const std::size_t e = std::min(n, b + per_task);
      for (std::size_t r = b; r < e; ++r) {
        auto row = expanders[slot].expand(r);
        out.counts.push_back(static_cast<std::uint32_t>(row.size()));
        for (auto& [col, poly] : row) {
          out.cols.push_back(col);
          out.local_ids.push_back(out.pool.intern(std::move(poly)));
        }
      }
    });
    for (std::size_t t = 0; t < count; ++t) {
      detail::ChunkRows& chunk = chunks[t];
      std::vector<std::uint32_t> remap(chunk.pool.size(), UINT32_MAX);
      std::size_t e = 0;
      for (std::uint32_t c : chunk.counts) {
        for (std::uint32_t m = 0; m < c; ++m, ++e) {
          std::uint32_t& g = remap[chunk.local_ids[e]];
          if (g == UINT32_MAX) g = pool.intern(chunk.pool[chunk.local_ids[e]]);
          structure->cols.push_back(chunk.cols[e]);
          poly_ids.push_back(g);
        }
        structure->row_ptr.push_back(structure->cols.size());
      }
      if (options.memory_budget_bytes != 0) {
        const std::size_t bytes = structure->cols.capacity() * 4 + poly_ids.capacity() * 4 +
                                  structure->row_ptr.capacity() * 8 + pool.approx_bytes();
        if (bytes > options.memory_budget_bytes) {
          const std::size_t reached = structure->rows();
          throw MemoryBudgetExceeded("mean matrix exceeds the memory budget of " +
                                         std::to_string(options.memory_budget_bytes) + " bytes (stopped at row " +
                                         std::to_string(reached) + " of " + std::to_string(n) + ")",
                                     reached);
        }
      }
    }
  }

  MatrixStats stats;
  stats.nonzeros = structure->cols.size();
  stats.distinct_polys = pool.size();
  stats.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return MeanMatrix(model, space.spec(), std::move(structure), std::move(poly_ids), std::move(pool), stats);
}

inline MeanMatrix build_matrix(const ModelSpec& model, const SpaceSpec& spec, const BuildOptions& options = {}) {
  return build_matrix(model, enumerate(model, spec), options);
}

}  // namespace percbound
