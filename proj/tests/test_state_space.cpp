#include <gtest/gtest.h>

#include <bit>

#include "percbound/state_space.hpp"

using namespace percbound;

namespace {

// Literal membership test, written from the space definitions.
std::size_t filtered_count(int k, int i) {
  const int width = k + 1;
  std::size_t n = 0;
  for (std::uint32_t b = 0; b < (1u << width); ++b) {
    if (!(b >> (width - 1))) continue;
    if ((b & 1u) == 0 || std::popcount(b) <= i + 1) ++n;
  }
  return n;
}

}  // namespace

TEST(SpaceCounts, ReferenceSizes) {
  const ModelSpec m = parse_model("bond-vl2");
  EXPECT_EQ(enumerate(m, SpaceSpec::truncated(6, 2, 0)).size(), 38u);
  EXPECT_EQ(enumerate(m, SpaceSpec::truncated(7, 2, 0)).size(), 71u);
  EXPECT_EQ(enumerate(m, SpaceSpec::truncated(8, 2, 1)).size(), 137u);
  EXPECT_EQ(enumerate(m, SpaceSpec::truncated(9, 2, 10)).size(), 275u);
  EXPECT_EQ(enumerate(m, SpaceSpec::truncated(10, 2, 28)).size(), 550u);
  EXPECT_EQ(enumerate(m, SpaceSpec::truncated(16, 7, 3620)).size(), 46337u);
}

TEST(SpaceCounts, MatchFilteringUpTo18) {
  const ModelSpec m = parse_model("bond-vl2");
  for (int k = 2; k <= 18; ++k) {
    EXPECT_EQ(enumerate(m, SpaceSpec::plain(k)).size(), std::size_t{1} << (k - 1));
    for (int i = 0; i + 2 <= k + 1 && i <= 8; ++i) {
      const std::size_t base = filtered_count(k, i);
      EXPECT_EQ(enumerate(m, SpaceSpec::truncated(k, i, 0)).size(), base) << k << ',' << i;
      const int jmax = static_cast<int>(binomial(k - 1, i));
      EXPECT_EQ(enumerate(m, SpaceSpec::truncated(k, i, jmax)).size(), base + static_cast<std::size_t>(jmax));
    }
  }
}

TEST(SpaceCounts, FullJAtLargestI) {
  // with i = k-2 and every boundary sequence admitted, only the all-ones
  // pattern is missing
  const ModelSpec m = parse_model("bond-vl2");
  for (int k = 3; k <= 10; ++k) {
    const int i = k - 2;
    EXPECT_EQ(enumerate(m, SpaceSpec::truncated(k, i, static_cast<int>(binomial(k - 1, i)))).size(),
              (std::size_t{1} << k) - 1);
  }
}

TEST(SpaceOrder, OrdinalsAscendingAndIndexRoundTrips) {
  const ModelSpec m = parse_model("bond-vl2");
  const StateSpace s = enumerate(m, SpaceSpec::truncated(9, 2, 10));
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (n > 0) {
      EXPECT_LT(s.pattern(n - 1), s.pattern(n));
    }
    EXPECT_TRUE(s.pattern(n) & s.root_bit());
    EXPECT_EQ(s.index(s.pattern(n)), n);
  }
}

TEST(SpaceOrder, AdmittedBoundarySequencesAreTheLargest) {
  const ModelSpec m = parse_model("bond-vl2");
  const SpaceSpec spec = SpaceSpec::truncated(8, 2, 3);
  const StateSpace s = enumerate(m, spec);
  std::vector<StateBits> boundary;
  for (StateBits b = 1u << 8; b < (1u << 9); ++b)
    if ((b & 1u) && std::popcount(b) == 4) boundary.push_back(b);
  for (std::size_t n = 0; n < boundary.size(); ++n)
    EXPECT_EQ(s.contains(boundary[n]), n + 3 >= boundary.size()) << to_bitstring(boundary[n], 9);
}

TEST(SpaceOrder, TagMajorOrdinals) {
  const ModelSpec m = parse_model("inhom-3");
  const StateSpace s = enumerate(m, SpaceSpec::plain(4));
  EXPECT_EQ(s.tag_count(), 4);
  EXPECT_EQ(s.size(), 32u);
  for (std::size_t n = 0; n < s.size(); ++n) {
    EXPECT_EQ(s.tag(n).residue, static_cast<int>(n / 8));
    EXPECT_EQ(s.index(s.pattern(n), s.tag(n)), n);
  }
  EXPECT_FALSE(s.index(0b1000, {4}).has_value());
}

TEST(SpaceProjection, Rules) {
  const ModelSpec m = parse_model("bond-vl2");
  const StateSpace plain = enumerate(m, SpaceSpec::plain(4));
  EXPECT_EQ(plain.project(0b1011), *plain.index(0b1011));
  EXPECT_THROW(plain.project(0b0011), InternalInvariant);

  const StateSpace t = enumerate(m, SpaceSpec::truncated(8, 2, 1));
  // five ones ending in 1: not representable, loses its last bit
  EXPECT_FALSE(t.contains(0b110110001));
  EXPECT_EQ(t.project(0b110110001), *t.index(0b110110000));
  // the single admitted four-one sequence maps to itself
  const StateBits admitted = 0b111000001;
  ASSERT_TRUE(t.contains(admitted));
  EXPECT_EQ(t.project(admitted), *t.index(admitted));
  EXPECT_EQ(t.project(0b110100001), *t.index(0b110100000));
}

TEST(SpaceRoot, PlainTwo) {
  const StateSpace s = enumerate(parse_model("bond-vl2"), SpaceSpec::plain(2));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.render(s.root_state()), "10");
  EXPECT_EQ(s.render(1), "11");
}

TEST(SpaceTriangle, FocusAndSize) {
  const ModelSpec m = parse_model("site-vl3");
  const StateSpace s = enumerate(m, SpaceSpec::triangle(4, 3));
  EXPECT_EQ(s.size(), 512u);
  EXPECT_EQ(s.root_slot(), 2u);
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_TRUE(s.pattern(n) & s.root_bit());
  EXPECT_EQ(enumerate(m, SpaceSpec::triangle(5, 6)).size(), 16384u);
}

TEST(SpaceParse, FormsAndErrors) {
  const ModelSpec b = parse_model("bond-vl2");
  EXPECT_EQ(parse_space(b, "12"), SpaceSpec::plain(12));
  EXPECT_EQ(parse_space(b, "11,2,44"), SpaceSpec::truncated(11, 2, 44));
  EXPECT_EQ(parse_space(parse_model("site-vl3"), "5"), SpaceSpec::triangle(5, 6));
  EXPECT_EQ(parse_space(parse_model("site-vl3"), "5,3"), SpaceSpec::triangle(5, 3));
  EXPECT_THROW(parse_space(b, "12,x"), InvalidArgument);
  EXPECT_THROW(parse_space(b, "1,2"), InvalidArgument);
  EXPECT_THROW(validate(b, SpaceSpec::truncated(11, 2, 46)), InvalidArgument);
  EXPECT_NO_THROW(validate(b, SpaceSpec::truncated(11, 2, 45)));
  EXPECT_THROW(validate(b, SpaceSpec::plain(1)), InvalidArgument);
  EXPECT_THROW(validate(b, SpaceSpec::triangle(4, 3)), InvalidArgument);
  EXPECT_THROW(validate(parse_model("bond-vl3"), SpaceSpec::triangle(6, 3)), InvalidArgument);
  EXPECT_EQ(to_string(SpaceSpec::truncated(16, 7, 3620)), "16,7,3620");
}

TEST(SpaceBits, StringRoundTrip) {
  EXPECT_EQ(to_bitstring(parse_bitstring("100110"), 6), "100110");
  EXPECT_THROW(parse_bitstring("10a"), InvalidArgument);
  EXPECT_THROW(parse_bitstring(""), InvalidArgument);
}
