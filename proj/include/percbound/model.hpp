#pragma once

// Catalog of the oriented percolation models and the window geometry the
// automaton is built on.
//
// Directions are numbered by priority: direction 0 always wins when two
// occupied vertices can infect the same successor.
//   VL2  : 0 = original vertical (x, y+1), 1 = original horizontal (x+1, y)
//   ALT2 : 0 = left diagonal (x-1, y+1), 1 = vertical, 2 = right diagonal
//   VL3  : 0 = e3, 1 = e2, 2 = e1

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "percbound/error.hpp"

namespace percbound {

enum class Lattice { VL2, ALT2, VL3 };
enum class Percolation { Site, Bond };
enum class Inhomogeneity { None, ModelI, ModelII, ModelIII, ModelIV, ModelV };

struct ModelSpec {
  Lattice lattice = Lattice::VL2;
  Percolation percolation = Percolation::Bond;
  int arity = 1;
  Inhomogeneity inhomogeneity = Inhomogeneity::None;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

namespace detail {

struct CatalogEntry {
  std::string_view id;
  ModelSpec spec;
};

inline constexpr std::array<CatalogEntry, 11> kCatalog{{
    {"site-vl2", {Lattice::VL2, Percolation::Site, 1, Inhomogeneity::None}},
    {"bond-vl2", {Lattice::VL2, Percolation::Bond, 1, Inhomogeneity::None}},
    {"site-alt2", {Lattice::ALT2, Percolation::Site, 1, Inhomogeneity::None}},
    {"bond-alt2", {Lattice::ALT2, Percolation::Bond, 1, Inhomogeneity::None}},
    {"site-vl3", {Lattice::VL3, Percolation::Site, 1, Inhomogeneity::None}},
    {"bond-vl3", {Lattice::VL3, Percolation::Bond, 1, Inhomogeneity::None}},
    {"inhom-1", {Lattice::VL2, Percolation::Site, 2, Inhomogeneity::ModelI}},
    {"inhom-2", {Lattice::VL2, Percolation::Site, 2, Inhomogeneity::ModelII}},
    {"inhom-3", {Lattice::VL2, Percolation::Site, 2, Inhomogeneity::ModelIII}},
    {"inhom-4", {Lattice::VL2, Percolation::Site, 2, Inhomogeneity::ModelIV}},
    {"inhom-5", {Lattice::VL2, Percolation::Bond, 2, Inhomogeneity::ModelV}},
}};

}  // namespace detail

/// Throws InvalidArgument when the combination breaks the catalog rules.
inline void validate(const ModelSpec& m) {
  const bool tagged_site = m.inhomogeneity == Inhomogeneity::ModelI ||
                           m.inhomogeneity == Inhomogeneity::ModelII ||
                           m.inhomogeneity == Inhomogeneity::ModelIII ||
                           m.inhomogeneity == Inhomogeneity::ModelIV;
  if (tagged_site && !(m.lattice == Lattice::VL2 && m.percolation == Percolation::Site && m.arity == 2))
    throw InvalidArgument("models I-IV require site percolation on VL2 with two parameters");
  if (m.inhomogeneity == Inhomogeneity::ModelV &&
      !(m.lattice == Lattice::VL2 && m.percolation == Percolation::Bond && m.arity == 2))
    throw InvalidArgument("model V requires bond percolation on VL2 with two parameters");
  if (m.inhomogeneity == Inhomogeneity::None && m.arity != 1)
    throw InvalidArgument("homogeneous models take exactly one parameter");
}

inline ModelSpec parse_model(std::string_view id) {
  for (const auto& e : detail::kCatalog)
    if (e.id == id) return e.spec;
  std::string known;
  for (const auto& e : detail::kCatalog) known += (known.empty() ? "" : ", ") + std::string(e.id);
  throw InvalidArgument("unknown model '" + std::string(id) + "' (known: " + known + ")");
}

inline std::string model_id(const ModelSpec& m) {
  for (const auto& e : detail::kCatalog)
    if (e.spec == m) return std::string(e.id);
  throw InvalidArgument("model is not in the catalog");
}

inline std::vector<std::string> model_ids() {
  std::vector<std::string> out;
  for (const auto& e : detail::kCatalog) out.emplace_back(e.id);
  return out;
}

inline int direction_count(Lattice l) { return l == Lattice::VL2 ? 2 : 3; }

inline std::string_view direction_name(Lattice l, int d) {
  static constexpr std::array<std::string_view, 2> vl2{"up", "right"};
  static constexpr std::array<std::string_view, 3> alt2{"left-diag", "vertical", "right-diag"};
  static constexpr std::array<std::string_view, 3> vl3{"e3", "e2", "e1"};
  switch (l) {
    case Lattice::VL2: return vl2.at(static_cast<std::size_t>(d));
    case Lattice::ALT2: return alt2.at(static_cast<std::size_t>(d));
    case Lattice::VL3: return vl3.at(static_cast<std::size_t>(d));
  }
  return {};
}

/// Lattice coordinates (z unused in 2D).
struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
  friend Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

/// Unit step of direction d in original lattice coordinates.
inline Coord direction_step(Lattice l, int d) {
  switch (l) {
    case Lattice::VL2: return d == 0 ? Coord{0, 1, 0} : Coord{1, 0, 0};
    case Lattice::ALT2: return Coord{d - 1, 1, 0};
    case Lattice::VL3: return d == 0 ? Coord{0, 0, 1} : d == 1 ? Coord{0, 1, 0} : Coord{1, 0, 0};
  }
  return {};
}

/// Window size descriptor: interval length for 2D, triangle side and focus for 3D.
struct WindowSize {
  int length = 0;  // k (2D) or L (3D)
  int focus = 0;   // 1-based triangle position, 3D only

  friend bool operator==(const WindowSize&, const WindowSize&) = default;
};

inline int default_focus(int side) { return side == 5 ? 6 : 3; }

struct InNeighbor {
  std::size_t slot;
  int direction;

  friend bool operator==(const InNeighbor&, const InNeighbor&) = default;
};

struct ChildWindow {
  int direction = 0;
  std::size_t root_successor = 0;
  /// successor index occupying each child slot, in child slot order
  std::vector<std::size_t> slots;
  /// displacement of the window's reference vertex
  Coord shift;
};

struct WindowGeometry {
  Lattice lattice = Lattice::VL2;
  WindowSize size;
  std::size_t root_slot = 0;
  /// positions relative to the reference vertex (rightmost vertex in 2D,
  /// triangle origin in 3D)
  std::vector<Coord> slot_offsets;
  std::vector<Coord> successor_offsets;
  /// out[slot][direction] -> successor index
  std::vector<std::vector<std::size_t>> out;
  /// in-neighbors of each successor, highest priority first
  std::vector<std::vector<InNeighbor>> in_neighbors;
  std::vector<ChildWindow> children;

  std::size_t slot_count() const { return slot_offsets.size(); }
  std::size_t successor_count() const { return successor_offsets.size(); }
  int directions() const { return direction_count(lattice); }
};

namespace detail {

inline void fill_in_neighbors(WindowGeometry& g) {
  g.in_neighbors.assign(g.successor_count(), {});
  for (std::size_t s = 0; s < g.slot_count(); ++s)
    for (int d = 0; d < g.directions(); ++d) g.in_neighbors[g.out[s][d]].push_back({s, d});
  for (auto& list : g.in_neighbors)
    std::sort(list.begin(), list.end(),
              [](const InNeighbor& a, const InNeighbor& b) { return a.direction < b.direction; });
}

inline std::size_t triangle_index(int r, int c) {
  return static_cast<std::size_t>(r * (r - 1) / 2 + (c - 1));
}

}  // namespace detail

/// Window slots, their successors, and the child windows for a model.
/// 2D windows of length k list slots left to right (slot 0 is the root);
/// 3D triangles of side L list positions (r, c), 1 <= c <= r <= L, row-major.
inline WindowGeometry window_geometry(const ModelSpec& model, WindowSize size) {
  WindowGeometry g;
  g.lattice = model.lattice;
  g.size = size;
  const int dirs = direction_count(model.lattice);

  if (model.lattice == Lattice::VL3) {
    const int L = size.length;
    if (L < 2 || L > 6) throw InvalidArgument("triangle side must be between 2 and 6");
    const int n = L * (L + 1) / 2;
    if (size.focus < 1 || size.focus > n)
      throw InvalidArgument("focus slot " + std::to_string(size.focus) + " is outside the triangle of " +
                            std::to_string(n) + " positions");
    g.root_slot = static_cast<std::size_t>(size.focus - 1);
    for (int r = 1; r <= L; ++r)
      for (int c = 1; c <= r; ++c) g.slot_offsets.push_back({r - c, c - 1, L - r});
    for (int r = 1; r <= L + 1; ++r)
      for (int c = 1; c <= r; ++c) g.successor_offsets.push_back({r - c, c - 1, L + 1 - r});
    for (int r = 1; r <= L; ++r)
      for (int c = 1; c <= r; ++c)
        g.out.push_back({detail::triangle_index(r, c), detail::triangle_index(r + 1, c + 1),
                         detail::triangle_index(r + 1, c)});
    // child sub-triangles of the side L+1 triangle, shifted by (dr, dc)
    const std::array<std::pair<int, int>, 3> shifts{{{0, 0}, {1, 1}, {1, 0}}};
    for (int d = 0; d < dirs; ++d) {
      ChildWindow cw;
      cw.direction = d;
      cw.shift = direction_step(Lattice::VL3, d);
      for (int r = 1; r <= L; ++r)
        for (int c = 1; c <= r; ++c)
          cw.slots.push_back(detail::triangle_index(r + shifts[d].first, c + shifts[d].second));
      cw.root_successor = g.out[g.root_slot][d];
      g.children.push_back(std::move(cw));
    }
  } else {
    const int n = size.length;
    if (n < 2) throw InvalidArgument("window length must be at least 2");
    if (n > 30) throw InvalidArgument("window length above 30 is not supported");
    g.root_slot = 0;
    if (model.lattice == Lattice::VL2) {
      // tilted view: slot s sits at (s-(n-1), (n-1)-s) from the rightmost vertex
      for (int s = 0; s < n; ++s) g.slot_offsets.push_back({s - (n - 1), (n - 1) - s, 0});
      for (int t = 0; t <= n; ++t) g.successor_offsets.push_back({t + 1 - n, n - t, 0});
      for (int s = 0; s < n; ++s)
        g.out.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(s + 1)});
    } else {
      for (int s = 0; s < n; ++s) g.slot_offsets.push_back({s - (n - 1), 0, 0});
      for (int t = 0; t <= n + 1; ++t) g.successor_offsets.push_back({t - n, 1, 0});
      for (int s = 0; s < n; ++s)
        g.out.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(s + 1),
                         static_cast<std::size_t>(s + 2)});
    }
    for (int d = 0; d < dirs; ++d) {
      ChildWindow cw;
      cw.direction = d;
      cw.shift = direction_step(model.lattice, d);
      cw.root_successor = g.out[0][d];
      for (int c = 0; c < n; ++c) cw.slots.push_back(cw.root_successor + static_cast<std::size_t>(c));
      g.children.push_back(std::move(cw));
    }
  }
  detail::fill_in_neighbors(g);
  return g;
}

// ---------------------------------------------------------------------------
// Variant tags for the inhomogeneous site models.
//
// A tag is the residue of a linear form of the reference vertex (the
// rightmost window vertex) modulo the model's period:
//   Model I   : x       mod 2
//   Model II  : x + y   mod 2
//   Model III : x - y   mod 4
//   Model IV  : x       mod 4

struct VariantTag {
  int residue = 0;

  friend bool operator==(const VariantTag&, const VariantTag&) = default;
};

/// Number of distinct tags; 1 for models that need none.
inline int tag_period(const ModelSpec& m) {
  switch (m.inhomogeneity) {
    case Inhomogeneity::ModelI:
    case Inhomogeneity::ModelII: return 2;
    case Inhomogeneity::ModelIII:
    case Inhomogeneity::ModelIV: return 4;
    default: return 1;
  }
}

inline bool has_tags(const ModelSpec& m) { return tag_period(m) > 1; }

namespace detail {

inline int residue_form(const ModelSpec& m, Coord c) {
  switch (m.inhomogeneity) {
    case Inhomogeneity::ModelI: return c.x;
    case Inhomogeneity::ModelII: return c.x + c.y;
    case Inhomogeneity::ModelIII: return c.x - c.y;
    case Inhomogeneity::ModelIV: return c.x;
    default: return 0;
  }
}

inline int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace detail

/// Parameter (1 or 2) attached to the vertex at `offset` from the reference
/// vertex of a window carrying `tag`. Always 1 for homogeneous models.
inline int param_index(const ModelSpec& m, VariantTag tag, Coord offset) {
  const int period = tag_period(m);
  if (period == 1) return 1;
  const int r = detail::mod(tag.residue + detail::residue_form(m, offset), period);
  return period == 2 ? (r == 0 ? 1 : 2) : (r <= 1 ? 1 : 2);
}

/// Parameter attached to edges of direction d (bond models).
inline int edge_param_index(const ModelSpec& m, int direction) {
  if (m.inhomogeneity == Inhomogeneity::ModelV) return direction == 0 ? 2 : 1;
  return 1;
}

inline VariantTag child_tag(const ModelSpec& m, VariantTag tag, int direction) {
  const int period = tag_period(m);
  if (period == 1) return {};
  if (direction < 0 || direction >= direction_count(m.lattice))
    throw InvalidArgument("invalid direction " + std::to_string(direction));
  const Coord shift = direction_step(m.lattice, direction);
  return {detail::mod(tag.residue + detail::residue_form(m, shift), period)};
}

/// Tag of the window whose root slot sits on the origin.
inline VariantTag root_tag(const ModelSpec& m, const WindowGeometry& g) {
  const int period = tag_period(m);
  if (period == 1) return {};
  const Coord reference = Coord{} - g.slot_offsets[g.root_slot];
  return {detail::mod(detail::residue_form(m, reference), period)};
}

/// Letters a-d. For period 4 the letter records the types of the reference
/// vertex and of its horizontal successor: aa->a, ab->b, ba->c, bb->d.
inline char tag_letter(const ModelSpec& m, VariantTag tag) {
  const int period = tag_period(m);
  if (period == 1) return '-';
  if (period == 2) return tag.residue == 0 ? 'a' : 'b';
  static constexpr std::array<char, 4> letters{'a', 'b', 'd', 'c'};
  return letters.at(static_cast<std::size_t>(tag.residue));
}

inline VariantTag tag_from_letter(const ModelSpec& m, char letter) {
  for (int r = 0; r < tag_period(m); ++r)
    if (tag_letter(m, {r}) == letter) return {r};
  throw InvalidArgument(std::string("invalid tag letter '") + letter + "' for " + model_id(m));
}

}  // namespace percbound
