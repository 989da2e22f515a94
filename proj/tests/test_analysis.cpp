#include "hfp/analysis.hpp"
#include "hfp/errors.hpp"
#include "hfp/potentials.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hfp;

TEST(RealZauner, FrameSpansARealInvariantSubspace) {
  const RMatrix f = real_zauner_frame();
  ASSERT_EQ(f.rows(), 7);
  ASSERT_EQ(f.cols(), 3);
  EXPECT_LT((f.transpose() * f - RMatrix::Identity(3, 3)).norm(), 1e-12);
  const auto u = real_zauner_unitary();
  EXPECT_LT((u.matrix * u.matrix * u.matrix - CMatrix::Identity(7, 7)).norm(), 1e-10);
  const CMatrix fc = f.cast<cplx>();
  const CMatrix image = u.matrix * fc;
  // invariant: the image lies in the span of the frame
  EXPECT_LT((image - fc * (fc.adjoint() * image)).norm(), 1e-10);
  EXPECT_LT((f.col(2) - RVector::Unit(7, 0)).norm(), 1e-14);
  // the permutation |k> -> |2k mod 7> has 3-cycles (1 2 4) and (3 6 5)
  RVector y(7);
  y << 0, 1, 1, 0, 1, 0, 0;
  EXPECT_NEAR(std::abs(f.col(0).dot(y / std::sqrt(3.0))) + std::abs(f.col(1).dot(y / std::sqrt(3.0))), 1.0, 1e-12);
}

TEST(RealZauner, ChartRoundTrip) {
  for (double x : {-0.9, -0.2, 0.0, 0.4}) {
    for (double y : {-0.5, 0.0, 0.7}) {
      if (x * x + y * y > 1) continue;
      const RVector c = from_chart(x, y);
      EXPECT_NEAR(c.norm(), 1.0, 1e-14);
      EXPECT_GE(c(2), -1e-14);
      const auto back = to_chart(c);
      EXPECT_NEAR(back[0], x, 1e-13);
      EXPECT_NEAR(back[1], y, 1e-13);
    }
  }
  const RVector north = from_chart(0, 0);
  EXPECT_NEAR(north(2), 1.0, 1e-15);
}

TEST(RealZauner, SpecialStatesInTheSlice) {
  const auto geo = StabilizerGeometry::for_dimension(7);
  const auto mus = mus_in_real_zauner();
  ASSERT_EQ(mus.size(), 6u);
  int sics = 0;
  const RMatrix f = real_zauner_frame();
  for (const auto& s : mus) {
    EXPECT_TRUE(is_mus(geo.mub(0), s.amplitudes()));
    const CVector v = s.amplitudes();
    EXPECT_LT((v - f.cast<cplx>() * (f.transpose().cast<cplx>() * v)).norm(), 1e-10);
    sics += f_sic(geo.group(), s) < 1e-8;
  }
  EXPECT_EQ(sics, 2);
  const auto alltop = alltop_in_real_zauner();
  ASSERT_EQ(alltop.size(), 6u);
  for (const auto& s : alltop) EXPECT_NEAR(f_sic(geo.group(), s), 3.0 / 28, 1e-9);
}

TEST(RealZauner, CoarseMap) {
  const auto map = zauner_real_map(41);
  EXPECT_EQ(map.grid, 41);
  EXPECT_FALSE(map.points.empty());
  EXPECT_LT(map.max_subspace_residual, 1e-10);
  for (const auto& p : map.points) {
    EXPECT_LE(p.x * p.x + p.y * p.y, 1.0 + 1e-12);
    EXPECT_LE(p.f_sic, map.polished_max + 1e-9);
  }
  EXPECT_NEAR(map.polished_max, 5.24, 0.01);
  EXPECT_LE(map.grid_max, map.polished_max + 1e-12);
  int mus = 0, alltop = 0, max = 0;
  for (const auto& m : map.marked) {
    mus += m.label == "MUS" || m.label == "SIC";
    alltop += m.label == "Alltop";
    max += m.label == "max";
  }
  EXPECT_EQ(mus, 6);
  EXPECT_EQ(alltop, 6);
  EXPECT_EQ(max, 1);
  EXPECT_THROW(zauner_real_map(1), ConfigError);
}

TEST(Graph, OrthonormalBasisIsComplete) {
  const auto geo = StabilizerGeometry::for_dimension(5);
  std::vector<StateVector> states;
  for (int k = 0; k < 5; ++k) states.emplace_back(CVector(geo.petal_bases()[2].column(k)));
  states.emplace_back(CVector(std::polar(1.0, 1.3) * states[0].amplitudes()));
  const auto g = orthogonality_graph(states);
  EXPECT_EQ(g.vertices.size(), 5u);
  EXPECT_EQ(g.edge_count(), 10u);
  EXPECT_TRUE(g.regular);
  for (int d : g.degrees) EXPECT_EQ(d, 4);
  for (const auto& [a, b] : g.edges) EXPECT_LT(a, b);
}

TEST(Graph, MixedDegrees) {
  std::vector<StateVector> states{StateVector::basis(3, 0), StateVector::basis(3, 1)};
  CVector v(3);
  v << 1, 1, 0;
  states.emplace_back(v);
  const auto g = orthogonality_graph(states);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_FALSE(g.regular);
  EXPECT_TRUE(orthogonality_graph({}).edges.empty());
}

TEST(Graph, BalancedStatesInSevenDimensions) {
  const auto search = find_mub_balanced(7);
  const auto g = orthogonality_graph(search.states);
  EXPECT_EQ(g.vertices.size(), 21u);
  EXPECT_TRUE(g.regular);
  std::size_t degree_sum = 0;
  for (int d : g.degrees) degree_sum += d;
  EXPECT_EQ(degree_sum, 2 * g.edge_count());
  // oracle: direct count of orthogonal pairs
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < search.states.size(); ++i) {
    for (std::size_t j = i + 1; j < search.states.size(); ++j) {
      pairs += std::norm(search.states[i].amplitudes().dot(search.states[j].amplitudes())) < 1e-8;
    }
  }
  EXPECT_EQ(pairs, g.edge_count());
}

TEST(TwoQubits, Classification) {
  const auto geo = StabilizerGeometry::for_dimension(4);
  const auto cl = classify_bases_d4(geo);
  EXPECT_EQ(cl.bases.size(), 15u);
  auto counts = cl.counts;
  EXPECT_EQ(counts["computational"], 1);
  EXPECT_EQ(counts["hadamard"], 8);
  EXPECT_EQ(counts["sparse"], 6);
  EXPECT_EQ(counts["maximally_entangled"], 6);
  for (const auto& b : cl.bases) {
    const double purity = reduced_purity(geo.petal_bases()[b.petal].column(0));
    EXPECT_NEAR(purity, b.maximally_entangled ? 0.5 : 1.0, 1e-12);
  }
  EXPECT_THROW(classify_bases_d4(StabilizerGeometry::for_dimension(5)), UnsupportedDimension);
  EXPECT_THROW(reduced_purity(CVector(CVector::Ones(3))), DimensionMismatch);
  CVector bell(4);
  bell << 1, 0, 0, 1;
  EXPECT_NEAR(reduced_purity(bell / std::sqrt(2.0)), 0.5, 1e-15);
}

TEST(Extremes, TableRowsPass) {
  for (int d : {2, 3, 5, 7}) {
    const auto rows = table1(d);
    EXPECT_GE(rows.size(), 2u);
    for (const auto& r : rows) EXPECT_TRUE(r.pass) << d << " " << r.state_class;
  }
  const auto rows5 = table1(5);
  EXPECT_NEAR(rows5.front().expected_f_mus, 8.0 / 15, 1e-15);
  EXPECT_NEAR(rows5.front().expected_f_sic, 10.0 / 3, 1e-15);
  EXPECT_THROW(table1(11), UnsupportedDimension);
}

TEST(TwoQubits, StingrayAndPairBounds) {
  const auto data = stingray_dataset(300, 50, 1);
  EXPECT_NEAR(data.min_sum, 1.0 / 240, 1e-9);
  for (const auto& r : data.rows) EXPECT_GE(r.f_mus_1 + r.f_mus_2, data.min_sum - 1e-12);
  const auto bounds = double_mus_bounds(10, 1);
  EXPECT_EQ(bounds.size(), 15u);
  for (const auto& b : bounds) {
    EXPECT_LT(b.first, b.second);
    EXPECT_GT(b.min_max, 1e-4);
    EXPECT_LE(b.lower_bound, b.min_max + 1e-12);
  }
}
