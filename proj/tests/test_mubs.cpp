#include "hfp/errors.hpp"
#include "hfp/mubs.hpp"
#include "hfp/potentials.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace hfp;

namespace {

struct Shape {
  int d;
  std::size_t petals, flowers, petals_per_flower, petal_size, states;
};

const std::vector<Shape> kShapes{
    {2, 3, 1, 3, 1, 6}, {3, 4, 1, 4, 2, 12}, {4, 15, 6, 5, 3, 60}, {5, 6, 1, 6, 4, 30}, {7, 8, 1, 8, 6, 56}};

}  // namespace

class Geometry : public ::testing::TestWithParam<Shape> {};

TEST_P(Geometry, Counts) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  EXPECT_EQ(geo.petals().size(), s.petals);
  EXPECT_EQ(geo.flowers().size(), s.flowers);
  for (const auto& p : geo.petals()) EXPECT_EQ(p.members.size(), s.petal_size);
  for (const auto& f : geo.flowers()) EXPECT_EQ(f.petals.size(), s.petals_per_flower);
  EXPECT_EQ(geo.stabilizer_states().size(), s.states);
}

TEST_P(Geometry, PetalsAreMaximalAbelianSubgroups) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  const auto& g = geo.group();
  for (const auto& p : geo.petals()) {
    std::set<DisplacementIndex> members(p.members.begin(), p.members.end());
    for (const auto& a : p.members) {
      for (const auto& b : p.members) {
        const CMatrix da = g.displacement(a), db = g.displacement(b);
        EXPECT_LT((da * db - db * da).norm(), 1e-11);
        const auto c = g.compose(a, b);
        EXPECT_TRUE(c.is_identity() || members.count(c));
      }
    }
    // maximal: every element outside fails to commute with some member
    for (const auto& x : g.indices()) {
      if (x.is_identity() || members.count(x)) continue;
      EXPECT_TRUE(std::any_of(p.members.begin(), p.members.end(), [&](const auto& m) { return !g.commute(x, m); }));
    }
  }
}

TEST_P(Geometry, FlowersPartitionTheGroup) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  std::vector<int> petal_use(geo.petals().size(), 0);
  for (const auto& f : geo.flowers()) {
    std::multiset<DisplacementIndex> seen;
    for (auto p : f.petals) {
      ++petal_use[p];
      for (const auto& m : geo.petals()[p].members) seen.insert(m);
    }
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(s.d * s.d - 1));
    EXPECT_EQ(std::set<DisplacementIndex>(seen.begin(), seen.end()).size(), seen.size());
  }
  const int expected_use = s.d == 4 ? 2 : 1;
  for (int u : petal_use) EXPECT_EQ(u, expected_use);
}

TEST_P(Geometry, EigenbasesAreOrthonormalJointEigenvectors) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  const auto& g = geo.group();
  for (std::size_t k = 0; k < geo.petals().size(); ++k) {
    const auto& b = geo.petal_bases()[k];
    EXPECT_LT((b.columns.adjoint() * b.columns - CMatrix::Identity(s.d, s.d)).norm(), 1e-10);
    for (int c = 0; c < s.d; ++c) {
      const CVector v = b.column(c);
      for (const auto& m : geo.petals()[k].members) {
        const CVector dv = g.displacement(m) * v;
        EXPECT_LT((dv - v.dot(dv) * v).norm(), 1e-10);
      }
      int first = 0;
      while (std::abs(v(first)) < 1e-10) ++first;
      EXPECT_NEAR(v(first).imag(), 0.0, 1e-12);
      EXPECT_GT(v(first).real(), 0.0);
    }
  }
}

TEST_P(Geometry, EveryFlowerIsMutuallyUnbiased) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  for (std::size_t f = 0; f < geo.flowers().size(); ++f) {
    const auto mub = geo.mub(f);
    EXPECT_EQ(mub.size(), static_cast<std::size_t>(s.d + 1));
    EXPECT_LT(unbiasedness_report(mub), 1e-10);
  }
  EXPECT_THROW(geo.mub(geo.flowers().size()), IndexOutOfRange);
}

TEST_P(Geometry, FirstBasisOfFirstFlowerIsComputational) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  const CMatrix c = geo.mub(0).bases.front().columns;
  std::set<Eigen::Index> rows;
  for (int k = 0; k < s.d; ++k) {
    Eigen::Index r = 0;
    EXPECT_NEAR(c.col(k).cwiseAbs().maxCoeff(&r), 1.0, 1e-12);
    rows.insert(r);
  }
  EXPECT_EQ(rows.size(), static_cast<std::size_t>(s.d));
}

TEST_P(Geometry, PurityIdentityOnRandomStates) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  Sampler sampler(s.d, 2024);
  for (int n = 0; n < 200; ++n) {
    const auto psi = sampler.next();
    for (std::size_t f = 0; f < geo.flowers().size(); ++f) {
      const auto pur = basis_purities(geo.mub(f), psi.amplitudes());
      double total = 0.0;
      for (double p : pur) total += p;
      EXPECT_NEAR(total, 2.0, 1e-12);
    }
  }
}

TEST_P(Geometry, DisplacementsPermuteStabilizerStates) {
  const auto s = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(s.d);
  const auto states = geo.stabilizer_states();
  for (const auto& idx : geo.group().indices()) {
    const CMatrix d = geo.group().displacement(idx);
    for (const auto& st : states) {
      const CVector moved = d * st.amplitudes();
      EXPECT_TRUE(std::any_of(states.begin(), states.end(),
                              [&](const StateVector& t) { return same_ray(t.amplitudes(), moved, 1e-10); }));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, Geometry, ::testing::ValuesIn(kShapes),
                         [](const auto& info) { return "d" + std::to_string(info.param.d); });

TEST(Petals, QubitPetalsAreXZandY) {
  const auto g = HeisenbergGroup::build(2);
  const auto petals = enumerate_petals(g);
  std::set<DisplacementIndex> singles;
  for (const auto& p : petals) singles.insert(p.members.front());
  EXPECT_EQ(singles, (std::set<DisplacementIndex>{g.index(1, 0), g.index(0, 1), g.index(1, 1)}));
}

TEST(Petals, QubitXEigenbasis) {
  const auto g = HeisenbergGroup::build(2);
  const Petal px{{g.index(1, 0)}, {g.index(1, 0)}};
  const auto b = petal_eigenbasis(g, px);
  CVector plus(2), minus(2);
  plus << 1, 1;
  minus << 1, -1;
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  EXPECT_TRUE((same_ray(b.column(0), plus) && same_ray(b.column(1), minus)) ||
              (same_ray(b.column(0), minus) && same_ray(b.column(1), plus)));
}

TEST(Petals, BipartiteEigenbasisOfZZ) {
  const auto geo = StabilizerGeometry::for_dimension(4);
  const auto& g = geo.group();
  const auto zi = g.index(0, 1, 0, 0), iz = g.index(0, 0, 0, 1);
  for (std::size_t k = 0; k < geo.petals().size(); ++k) {
    const auto& m = geo.petals()[k].members;
    if (std::find(m.begin(), m.end(), zi) == m.end() || std::find(m.begin(), m.end(), iz) == m.end()) continue;
    const CMatrix& c = geo.petal_bases()[k].columns;
    EXPECT_LT((c.cwiseAbs2().colwise().maxCoeff().array() - 1.0).abs().maxCoeff(), 1e-12);
    return;
  }
  FAIL() << "no petal contains Z(x)I and I(x)Z";
}

TEST(StabilizerStates, MatchClosedFormMubForOddPrimes) {
  for (int d : {3, 5, 7}) {
    const auto geo = StabilizerGeometry::for_dimension(d);
    const auto states = geo.stabilizer_states();
    const auto ref = oracle::closed_form_mub(d);
    int matched = 0;
    for (const auto& b : ref) {
      for (int c = 0; c < d; ++c) {
        const CVector v = b.col(c);
        matched += std::any_of(states.begin(), states.end(),
                               [&](const StateVector& s) { return same_ray(s.amplitudes(), v, 1e-10); });
      }
    }
    EXPECT_EQ(matched, d * (d + 1));
  }
}

TEST(StabilizerStates, FlowerEnumerationIsDeterministic) {
  const auto g = HeisenbergGroup::build(4, GroupKind::bipartite);
  const auto petals = enumerate_petals(g);
  const auto a = enumerate_flowers(g, petals);
  const auto b = enumerate_flowers(g);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].petals, b[k].petals);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](const Flower& x, const Flower& y) { return x.petals < y.petals; }));
}

TEST(Unbiasedness, RepeatedBasisIsMaximallyBiased) {
  const auto geo = StabilizerGeometry::for_dimension(5);
  MUBasisSet twice;
  twice.bases = {geo.petal_bases()[0], geo.petal_bases()[0]};
  twice.labels = {0, 1};
  EXPECT_NEAR(unbiasedness_report(twice), 1.0 - 1.0 / 5, 1e-12);
}
