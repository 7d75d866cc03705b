#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "percbound/error.hpp"
#include "percbound/model.hpp"

namespace percbound {

/// Occupancy pattern of a window. Slot 0 is the most significant bit, so the
/// numeric order of patterns equals the lexicographic order of bit strings.
using StateBits = std::uint32_t;

enum class SpaceKind { Plain, Truncated, Triangle };

/// Plain(k): all length-k patterns starting with 1.
/// Truncated(k, i, j): length-(k+1) patterns starting with 1 that end with 0,
///   or end with 1 and have at most i+1 ones, plus the j largest encodings
///   that end with 1 and have exactly i+2 ones.
/// Triangle(L, focus): all side-L triangle patterns with the focus bit set.
struct SpaceSpec {
  SpaceKind kind = SpaceKind::Plain;
  int k = 0;
  int i = 0;
  int j = 0;
  int side = 0;
  int focus = 0;

  static SpaceSpec plain(int k) { return {SpaceKind::Plain, k, 0, 0, 0, 0}; }
  static SpaceSpec truncated(int k, int i, int j) { return {SpaceKind::Truncated, k, i, j, 0, 0}; }
  static SpaceSpec triangle(int side, int focus) { return {SpaceKind::Triangle, 0, 0, 0, side, focus}; }

  /// Geometry size this space lives on.
  WindowSize window() const {
    switch (kind) {
      case SpaceKind::Plain: return {k, 0};
      case SpaceKind::Truncated: return {k + 1, 0};
      case SpaceKind::Triangle: return {side, focus};
    }
    return {};
  }

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

/// "k", "k,i,j" or "L,focus" (the form the CLI accepts).
inline std::string to_string(const SpaceSpec& s) {
  switch (s.kind) {
    case SpaceKind::Plain: return std::to_string(s.k);
    case SpaceKind::Truncated:
      return std::to_string(s.k) + "," + std::to_string(s.i) + "," + std::to_string(s.j);
    case SpaceKind::Triangle: return std::to_string(s.side) + "," + std::to_string(s.focus);
  }
  return {};
}

/// Parses a space descriptor for the given model. For VL3 a single number is
/// the triangle side with its default focus.
inline SpaceSpec parse_space(const ModelSpec& model, std::string_view text) {
  std::vector<int> parts;
  std::string token;
  std::istringstream in{std::string(text)};
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(token, &used);
      if (used != token.size()) throw InvalidArgument("");
      parts.push_back(v);
    } catch (...) {
      throw InvalidArgument("malformed space '" + std::string(text) + "': expected integers separated by commas");
    }
  }
  if (model.lattice == Lattice::VL3) {
    if (parts.size() == 1) return SpaceSpec::triangle(parts[0], default_focus(parts[0]));
    if (parts.size() == 2) return SpaceSpec::triangle(parts[0], parts[1]);
    throw InvalidArgument("3D spaces are 'L' or 'L,focus', got '" + std::string(text) + "'");
  }
  if (parts.size() == 1) return SpaceSpec::plain(parts[0]);
  if (parts.size() == 3) return SpaceSpec::truncated(parts[0], parts[1], parts[2]);
  throw InvalidArgument("2D spaces are 'k' or 'k,i,j', got '" + std::string(text) + "'");
}

inline std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t v = 1;
  for (int t = 1; t <= r; ++t) v = v * static_cast<std::uint64_t>(n - r + t) / static_cast<std::uint64_t>(t);
  return v;
}

/// Renders the first `width` bits of a pattern, most significant first.
inline std::string to_bitstring(StateBits bits, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t c = 0; c < width; ++c)
    if ((bits >> (width - 1 - c)) & 1u) s[c] = '1';
  return s;
}

inline StateBits parse_bitstring(std::string_view text) {
  if (text.empty() || text.size() > 31) throw InvalidArgument("state must be 1 to 31 characters of 0/1");
  StateBits v = 0;
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw InvalidArgument("state '" + std::string(text) + "' is not a bit string");
    v = (v << 1) | static_cast<StateBits>(ch == '1');
  }
  return v;
}

/// Materialized enumeration of a space: ordinals run tag-major, patterns
/// ascending within a tag block.
class StateSpace {
 public:
  StateSpace(ModelSpec model, SpaceSpec spec, std::size_t width, std::size_t root_slot, int tags,
             VariantTag initial_tag, std::vector<StateBits> patterns)
      : model_(model),
        spec_(spec),
        width_(width),
        root_slot_(root_slot),
        tags_(tags),
        initial_tag_(initial_tag),
        patterns_(std::move(patterns)),
        lookup_(std::size_t{1} << width, -1) {
    for (std::size_t n = 0; n < patterns_.size(); ++n) lookup_[patterns_[n]] = static_cast<std::int32_t>(n);
  }

  const ModelSpec& model() const { return model_; }
  const SpaceSpec& spec() const { return spec_; }
  /// Number of window slots (bits per pattern).
  std::size_t width() const { return width_; }
  std::size_t root_slot() const { return root_slot_; }
  StateBits root_bit() const { return StateBits{1} << (width_ - 1 - root_slot_); }
  int tag_count() const { return tags_; }
  std::size_t patterns_per_tag() const { return patterns_.size(); }
  std::size_t size() const { return patterns_.size() * static_cast<std::size_t>(tags_); }

  StateBits pattern(std::size_t ordinal) const { return patterns_[ordinal % patterns_.size()]; }
  VariantTag tag(std::size_t ordinal) const { return {static_cast<int>(ordinal / patterns_.size())}; }

  std::optional<std::size_t> index(StateBits bits, VariantTag tag = {}) const {
    if (bits >= lookup_.size() || tag.residue < 0 || tag.residue >= tags_) return std::nullopt;
    const std::int32_t local = lookup_[bits];
    if (local < 0) return std::nullopt;
    return static_cast<std::size_t>(tag.residue) * patterns_.size() + static_cast<std::size_t>(local);
  }

  bool contains(StateBits bits, VariantTag tag = {}) const { return index(bits, tag).has_value(); }

  /// Ordinal of a raw child pattern; an out-of-space child loses its
  /// last-position bit.
  std::size_t project(StateBits raw, VariantTag tag = {}) const {
    if ((raw & root_bit()) == 0) throw InternalInvariant("child pattern " + to_bitstring(raw, width_) + " lacks its root bit");
    if (auto hit = index(raw, tag)) return *hit;
    if (auto hit = index(raw & ~StateBits{1}, tag)) return *hit;
    throw InternalInvariant("child pattern " + to_bitstring(raw, width_) + " is not representable after truncation");
  }

  std::size_t root_state() const { return *index(root_bit(), initial_tag_); }
  VariantTag initial_tag() const { return initial_tag_; }

  std::string render(std::size_t ordinal) const {
    std::string s = to_bitstring(pattern(ordinal), width_);
    if (tags_ > 1) (s += '/') += tag_letter(model_, tag(ordinal));
    return s;
  }

 private:
  ModelSpec model_;
  SpaceSpec spec_;
  std::size_t width_;
  std::size_t root_slot_;
  int tags_;
  VariantTag initial_tag_;
  std::vector<StateBits> patterns_;
  std::vector<std::int32_t> lookup_;
};

/// Expected cardinality of one tag block.
inline std::uint64_t expected_size(const SpaceSpec& s) {
  switch (s.kind) {
    case SpaceKind::Plain: return std::uint64_t{1} << (s.k - 1);
    case SpaceKind::Truncated: {
      std::uint64_t n = std::uint64_t{1} << (s.k - 1);
      for (int t = 0; t < s.i; ++t) n += binomial(s.k - 1, t);
      return n + static_cast<std::uint64_t>(s.j);
    }
    case SpaceKind::Triangle: return std::uint64_t{1} << (s.side * (s.side + 1) / 2 - 1);
  }
  return 0;
}

inline void validate(const ModelSpec& model, const SpaceSpec& s) {
  const bool is3d = model.lattice == Lattice::VL3;
  if (is3d != (s.kind == SpaceKind::Triangle))
    throw InvalidArgument(is3d ? "3D models need a triangle space" : "2D models need an interval space");
  switch (s.kind) {
    case SpaceKind::Plain:
      if (s.k < 2) throw InvalidArgument("k must be at least 2");
      if (s.k > 24) throw InvalidArgument("k above 24 is not supported");
      break;
    case SpaceKind::Truncated:
      if (s.k < 2) throw InvalidArgument("k must be at least 2");
      if (s.k > 23) throw InvalidArgument("k above 23 is not supported");
      if (s.i < 0) throw InvalidArgument("i must be nonnegative");
      if (s.i + 2 > s.k + 1) throw InvalidArgument("i+2 ones do not fit in a sequence of length k+1");
      if (s.j < 0 || static_cast<std::uint64_t>(s.j) > binomial(s.k - 1, s.i))
        throw InvalidArgument("j=" + std::to_string(s.j) + " out of range [0, " +
                              std::to_string(binomial(s.k - 1, s.i)) + "] for k=" + std::to_string(s.k) +
                              ", i=" + std::to_string(s.i));
      break;
    case SpaceKind::Triangle:
      if (s.side != 4 && s.side != 5) throw InvalidArgument("triangle side must be 4 or 5");
      if (s.focus < 1 || s.focus > s.side * (s.side + 1) / 2)
        throw InvalidArgument("focus slot " + std::to_string(s.focus) + " outside the triangle");
      break;
  }
}

inline StateSpace enumerate(const ModelSpec& model, const SpaceSpec& spec) {
  validate(model);
  validate(model, spec);
  const WindowGeometry geometry = window_geometry(model, spec.window());
  const std::size_t width = geometry.slot_count();
  const StateBits root = StateBits{1} << (width - 1 - geometry.root_slot);

  std::vector<StateBits> patterns;
  if (spec.kind == SpaceKind::Truncated) {
    // The j admitted boundary sequences are the largest encodings, i.e. those
    // whose ones sit closest to the root.
    StateBits admitted_from = StateBits{1} << width;
    int extra = spec.j;
    for (StateBits b = (StateBits{1} << width) - 1; extra > 0 && b >= (StateBits{1} << (width - 1)); --b) {
      if ((b & 1u) && std::popcount(b) == spec.i + 2) {
        admitted_from = b;
        --extra;
      }
    }
    for (StateBits b = StateBits{1} << (width - 1); b < (StateBits{1} << width); ++b) {
      const int ones = std::popcount(b);
      if ((b & 1u) == 0 || ones <= spec.i + 1 || (ones == spec.i + 2 && b >= admitted_from))
        patterns.push_back(b);
    }
  } else {
    for (StateBits b = 0; b < (StateBits{1} << width); ++b)
      if (b & root) patterns.push_back(b);
  }
  if (patterns.size() != expected_size(spec))
    throw InternalInvariant("enumeration produced " + std::to_string(patterns.size()) + " states, expected " +
                            std::to_string(expected_size(spec)));
  return StateSpace(model, spec, width, geometry.root_slot, tag_period(model), root_tag(model, geometry),
                    std::move(patterns));
}

}  // namespace percbound
