#include <gtest/gtest.h>

#include <map>

#include "percbound/oracle.hpp"
#include "percbound/transition.hpp"

using namespace percbound;

namespace {

std::map<std::size_t, double> row_values(const MeanMatrix& m, std::size_t i, const std::vector<double>& x) {
  std::map<std::size_t, double> out;
  for (const auto& e : m.row(i)) out[e.col] += eval(m.pool()[e.poly], x);
  return out;
}

}  // namespace

TEST(Transition, PlainTwoClosedForm) {
  const MeanMatrix m = build_matrix(parse_model("bond-vl2"), SpaceSpec::plain(2), {1});
  ASSERT_EQ(m.dimension(), 2u);
  for (int g = 0; g <= 20; ++g) {
    const double p = g / 20.0, q = 1.0 - p;
    EXPECT_NEAR(eval(m.entry(0, 0), p), 2 * p - p * p, 1e-14);
    EXPECT_NEAR(eval(m.entry(0, 1), p), p * p, 1e-14);
    EXPECT_NEAR(eval(m.entry(1, 0), p), 2 * p * q * q, 1e-14);
    EXPECT_NEAR(eval(m.entry(1, 1), p), p * p * (3 - 2 * p), 1e-14);
  }
}

TEST(Transition, RightChildOfFullPlainTwoState) {
  const ModelSpec model = parse_model("bond-vl2");
  const StateSpace space = enumerate(model, SpaceSpec::plain(2));
  const auto g = window_geometry(model, {2, 0});
  const ChildLaw law = child_law(model, g, space, *space.index(0b11), 1);
  for (double p : {0.2, 0.5, 0.9}) {
    EXPECT_NEAR(eval(law.existence, p), p * (1 - p), 1e-15);
    // the right child's second slot is the third successor, reached only
    // through the up edge of the second vertex
    EXPECT_NEAR(eval(law.slots[1].occupied, p), p, 1e-15);
  }
  EXPECT_EQ(law.root_position, 0u);
}

TEST(Transition, ExpectedChildCountIsSumOfExistence) {
  // summing a row over columns gives sum over directions of P(child exists)
  for (const char* id : {"bond-vl2", "site-alt2", "bond-vl3", "inhom-4", "inhom-5"}) {
    const ModelSpec model = parse_model(id);
    const SpaceSpec spec = model.lattice == Lattice::VL3 ? SpaceSpec::triangle(4, 3) : SpaceSpec::plain(5);
    const StateSpace space = enumerate(model, spec);
    const auto g = window_geometry(model, spec.window());
    const MeanMatrix m = build_matrix(model, space, {2});
    const std::vector<double> x = model.arity == 2 ? std::vector<double>{0.35, 0.8} : std::vector<double>{0.35};
    for (std::size_t i = 0; i < space.size(); i += 7) {
      double total = 0.0;
      for (const auto& [col, v] : row_values(m, i, x)) total += v;
      double expected = 0.0;
      for (int d = 0; d < g.directions(); ++d) expected += eval(child_law(model, g, space, i, d).existence, x);
      EXPECT_NEAR(total, expected, 1e-12) << id << " state " << space.render(i);
    }
  }
}

TEST(Transition, MatchesBruteForceOnSmallSpaces) {
  for (const std::string& id : model_ids()) {
    const ModelSpec model = parse_model(id);
    if (model.lattice == Lattice::VL3) continue;
    for (const SpaceSpec& spec : {SpaceSpec::plain(3), SpaceSpec::truncated(3, 0, 1), SpaceSpec::truncated(3, 1, 0)}) {
      const StateSpace space = enumerate(model, spec);
      const MeanMatrix m = build_matrix(model, space, {1});
      for (std::size_t i = 0; i < space.size(); ++i) {
        const auto literal = brute_force_children(model, space, i);
        for (double p : {0.15, 0.5, 0.85}) {
          const std::vector<double> x = model.arity == 2 ? std::vector<double>{p, 0.4} : std::vector<double>{p};
          auto a = row_values(m, i, x);
          std::map<std::size_t, double> b;
          for (const auto& c : literal) b[c.ordinal] += eval(c.expectation, x);
          for (auto& [k, v] : a) EXPECT_NEAR(v, b[k], 1e-12) << id << ' ' << to_string(spec) << ' ' << i;
          for (auto& [k, v] : b) EXPECT_NEAR(v, a[k], 1e-12) << id << ' ' << to_string(spec) << ' ' << i;
        }
      }
    }
  }
}

TEST(Transition, SymbolicMatrixIndependentOfThreadCount) {
  for (const char* id : {"bond-vl2", "inhom-3", "site-vl3"}) {
    const ModelSpec model = parse_model(id);
    const SpaceSpec spec = model.lattice == Lattice::VL3 ? SpaceSpec::triangle(4, 3) : SpaceSpec::truncated(9, 2, 10);
    const MeanMatrix a = build_matrix(model, spec, {1});
    const MeanMatrix b = build_matrix(model, spec, {4, 0, 3});
    ASSERT_EQ(a.structure()->row_ptr, b.structure()->row_ptr);
    ASSERT_EQ(a.structure()->cols, b.structure()->cols);
    EXPECT_TRUE(std::equal(a.poly_ids().begin(), a.poly_ids().end(), b.poly_ids().begin(), b.poly_ids().end()));
    EXPECT_EQ(a.pool().entries(), b.pool().entries());
  }
}

TEST(Transition, RowsAreSortedAndNonzero) {
  const MeanMatrix m = build_matrix(parse_model("site-alt2"), SpaceSpec::plain(6), {2});
  EXPECT_EQ(m.stats().nonzeros, m.structure()->nonzeros());
  EXPECT_EQ(m.stats().distinct_polys, m.pool().size());
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    const auto row = m.row(i);
    for (std::size_t n = 1; n < row.size(); ++n) EXPECT_LT(row[n - 1].col, row[n].col);
    for (const auto& e : row) EXPECT_FALSE(m.pool()[e.poly].is_zero());
  }
}

TEST(Transition, MemoryBudget) {
  BuildOptions o{1, 1024, 16};
  try {
    build_matrix(parse_model("bond-vl2"), SpaceSpec::plain(12), o);
    FAIL() << "expected MemoryBudgetExceeded";
  } catch (const MemoryBudgetExceeded& e) {
    EXPECT_LT(e.row_reached(), std::size_t{2048});
  }
}

TEST(Transition, InvalidDirection) {
  const ModelSpec model = parse_model("bond-vl2");
  const StateSpace space = enumerate(model, SpaceSpec::plain(2));
  const auto g = window_geometry(model, {2, 0});
  EXPECT_THROW(child_law(model, g, space, 0, 2), InvalidArgument);
}
