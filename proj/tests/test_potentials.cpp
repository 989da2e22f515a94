#include "hfp/errors.hpp"
#include "hfp/potentials.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace hfp;

namespace {

std::vector<CMatrix> bases_of(const MUBasisSet& mub) {
  std::vector<CMatrix> out;
  for (const auto& b : mub.bases) out.push_back(b.columns);
  return out;
}

CVector qubit_sic() {
  const double t = std::acos(1.0 / std::sqrt(3.0));
  CVector v(2);
  v << std::cos(t / 2), std::polar(std::sin(t / 2), kPi / 4);
  return v;
}

CVector cubic_phase(int d) {
  CVector v(d);
  for (int k = 0; k < d; ++k) v(k) = oracle::w(d, static_cast<long long>(k) * k * k);
  return v / std::sqrt(static_cast<double>(d));
}

}  // namespace

class Potentials : public ::testing::TestWithParam<int> {};

TEST_P(Potentials, AgreeWithTermByTermOracle) {
  const int d = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(d);
  const auto elements = oracle::group_elements(d, d == 4);
  for (std::uint64_t s = 0; s < 25; ++s) {
    const CVector psi = oracle::random_state(d, s);
    EXPECT_NEAR(f_sic(geo.group(), psi), oracle::f_sic(elements, psi), 1e-12);
    for (std::size_t f = 0; f < geo.flowers().size(); ++f) {
      const auto mub = geo.mub(f);
      EXPECT_NEAR(f_mus(mub, psi), oracle::f_mus(bases_of(mub), psi), 1e-12);
    }
  }
}

TEST_P(Potentials, StabilizerStatesAreMaximal) {
  const int d = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(d);
  const double sic_max = d * (d - 1.0) / (d + 1.0);
  const double mus_max = (d - 1.0) * (d - 1.0) / (d * (d + 1.0));
  for (const auto& s : geo.stabilizer_states()) {
    EXPECT_NEAR(f_sic(geo.group(), s), sic_max, 1e-10);
    double best = 0.0;
    for (std::size_t f = 0; f < geo.flowers().size(); ++f) best = std::max(best, f_mus(geo.mub(f), s));
    EXPECT_NEAR(best, mus_max, 1e-10);
  }
  Sampler sampler(d, 5);
  for (int n = 0; n < 500; ++n) {
    const auto psi = sampler.next();
    EXPECT_LT(f_sic(geo.group(), psi), sic_max);
    EXPECT_LT(f_mus(geo.mub(0), psi), mus_max);
  }
}

TEST_P(Potentials, InvariantUnderDisplacements) {
  const int d = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(d);
  const auto mub = geo.mub(0);
  const CVector psi = oracle::random_state(d, 17);
  const double fs = f_sic(geo.group(), psi), fm = f_mus(mub, psi);
  for (const auto& idx : geo.group().indices()) {
    const CVector moved = geo.group().displacement(idx) * psi;
    EXPECT_NEAR(f_sic(geo.group(), moved), fs, 1e-12);
    EXPECT_NEAR(f_mus(mub, moved), fm, 1e-12);
  }
  EXPECT_NEAR(f_sic(geo.group(), CVector(std::polar(1.0, 0.7) * psi)), fs, 1e-13);
}

TEST_P(Potentials, InequalityHoldsOnRandomStates) {
  const int d = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(d);
  Sampler sampler(d, 77);
  for (int n = 0; n < 1000; ++n) {
    const auto psi = sampler.next();
    const auto r = inequality_report(geo, psi.amplitudes());
    EXPECT_GE(r.gap, -1e-10);
    EXPECT_NEAR(r.coefficient, d * d / (d - 1.0), 1e-15);
    if (d <= 3) EXPECT_LT(std::abs(r.gap), 1e-8);
  }
}

TEST_P(Potentials, GradientsMatchFiniteDifferences) {
  const int d = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(d);
  const auto mub = geo.mub(0);
  const CVector psi = oracle::random_state(d, 3) * 1.1;  // off the sphere on purpose
  const auto fs = [&](const CVector& v) { return oracle::f_sic(oracle::group_elements(d, d == 4), v); };
  const auto fm = [&](const CVector& v) { return oracle::f_mus(bases_of(mub), v); };
  const CVector gs = raw_gradient_f_sic(geo.group(), psi), gm = raw_gradient_f_mus(mub, psi);
  const CVector rs = oracle::fd_gradient(fs, psi), rm = oracle::fd_gradient(fm, psi);
  EXPECT_LT((gs - rs).norm(), 1e-6 * std::max(1.0, rs.norm()));
  EXPECT_LT((gm - rm).norm(), 1e-6 * std::max(1.0, rm.norm()));
  double value = 0.0;
  raw_gradient_f_sic(geo.group(), psi, &value);
  EXPECT_NEAR(value, fs(psi), 1e-12);
}

TEST_P(Potentials, ProjectedGradientIsTangentAndPhaseBlind) {
  const int d = GetParam();
  const auto geo = StabilizerGeometry::for_dimension(d);
  const CVector psi = oracle::random_state(d, 8);
  for (const CVector& g : {gradient_f_sic(geo.group(), psi), gradient_f_mus(geo.mub(0), psi)}) {
    // <psi, g> real part is the radial component, imaginary part the phase direction
    EXPECT_NEAR(psi.dot(g).real(), 0.0, 1e-12);
    EXPECT_NEAR(psi.dot(g).imag(), 0.0, 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, Potentials, ::testing::Values(2, 3, 4, 5, 7));

TEST(PotentialValues, KnownStates) {
  const auto g2 = HeisenbergGroup::build(2);
  const auto geo2 = StabilizerGeometry::for_dimension(2);
  EXPECT_NEAR(f_sic(g2, qubit_sic()), 0.0, 1e-14);
  EXPECT_NEAR(f_mus(geo2.mub(0), qubit_sic()), 0.0, 1e-14);
  CVector plus(2);
  plus << 1, 1;
  EXPECT_NEAR(f_sic(g2, CVector(plus / std::sqrt(2.0))), 2.0 / 3, 1e-14);

  const auto geo3 = StabilizerGeometry::for_dimension(3);
  CVector hesse(3);
  hesse << 0, 1, -1;
  hesse /= std::sqrt(2.0);
  EXPECT_NEAR(f_sic(geo3.group(), hesse), 0.0, 1e-14);
  EXPECT_NEAR(f_mus(geo3.mub(0), hesse), 0.0, 1e-14);
  EXPECT_NEAR(f_sic(geo3.group(), CVector(CVector::Unit(3, 0))), 1.5, 1e-14);

  for (int d : {5, 7}) {
    const auto geo = StabilizerGeometry::for_dimension(d);
    const CVector a = cubic_phase(d);
    EXPECT_NEAR(f_sic(geo.group(), a), (d - 1.0) / (d * (d + 1.0)), 1e-12);
    EXPECT_NEAR(f_mus(geo.mub(0), a), (d - 1.0) * (d - 1.0) / (d * d * d * (d + 1.0)), 1e-12);
  }
}

TEST(PotentialValues, DimensionMismatchIsReported) {
  const auto geo = StabilizerGeometry::for_dimension(3);
  EXPECT_THROW(f_sic(geo.group(), CVector(CVector::Ones(5))), DimensionMismatch);
  EXPECT_THROW(f_mus(geo.mub(0), CVector(CVector::Ones(5))), DimensionMismatch);
  EXPECT_THROW(probability_vector(geo.mub(0).bases[0], CVector(CVector::Ones(2))), DimensionMismatch);
}

TEST(ProbabilityVectors, StabilizerAndUnbiasedColumns) {
  const auto geo = StabilizerGeometry::for_dimension(5);
  const auto mub = geo.mub(0);
  const CVector e = mub.bases[0].column(2);
  const auto p0 = probability_vector(mub.bases[0], e);
  EXPECT_NEAR(p0.purity(), 1.0, 1e-14);
  EXPECT_NEAR(p0.p(2), 1.0, 1e-14);
  for (std::size_t z = 1; z < mub.size(); ++z) {
    const auto p = probability_vector(mub.bases[z], e);
    EXPECT_LT((p.p.array() - 0.2).abs().maxCoeff(), 1e-12);
  }
  const CVector psi = oracle::random_state(5, 4);
  const auto p = probability_vector(mub.bases[3], psi);
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(p.p(k), std::norm(mub.bases[3].column(k).dot(psi)), 1e-15);
}

TEST(Autocorrelations, ValuesAndSumRule) {
  ProbabilityVector uniform{RVector::Constant(5, 0.2)};
  for (double x : autocorrelations(uniform).delta) EXPECT_NEAR(x, 0.2, 1e-15);
  ProbabilityVector delta{RVector::Unit(5, 1)};
  for (double x : autocorrelations(delta).delta) EXPECT_NEAR(x, 0.0, 1e-15);
  ProbabilityVector half{RVector::Zero(5)};
  half.p(0) = half.p(1) = 0.5;
  const auto a = autocorrelations(half);
  ASSERT_EQ(a.delta.size(), 2u);
  EXPECT_NEAR(a.delta[0], 0.25, 1e-15);
  EXPECT_NEAR(a.delta[1], 0.0, 1e-15);
  EXPECT_NEAR(a.spread(), 0.25, 1e-15);

  const auto geo = StabilizerGeometry::for_dimension(7);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = probability_vector(geo.mub(0).bases[s % 8], oracle::random_state(7, s));
    double sum = 0.0;
    for (double x : autocorrelations(p).delta) sum += 2 * x;
    EXPECT_NEAR(sum, 1.0 - p.purity(), 1e-14);
  }
  EXPECT_THROW(autocorrelations(ProbabilityVector{RVector::Constant(4, 0.25)}), UnsupportedDimension);
}

TEST(Inequality, SaturationAndSimplexLines) {
  for (int d : {5, 7}) {
    const auto geo = StabilizerGeometry::for_dimension(d);
    const auto mub = geo.mub(0);
    const CVector special[] = {cubic_phase(d), geo.stabilizer_states().back().amplitudes()};
    for (const auto& psi : special) {
      const auto r = inequality_report(geo.group(), mub, psi);
      EXPECT_TRUE(r.saturated);
      EXPECT_NEAR(r.gap, 0.0, 1e-10);
      EXPECT_TRUE(simplex_membership(mub, psi).member);
    }
    Sampler sampler(d, 11);
    for (int n = 0; n < 200; ++n) {
      const CVector psi = sampler.next().amplitudes();
      const auto r = inequality_report(geo.group(), mub, psi);
      EXPECT_GT(r.gap, 1e-8);
      EXPECT_FALSE(r.saturated);
      EXPECT_FALSE(simplex_membership(mub, psi).member);
    }
  }
  const auto geo4 = StabilizerGeometry::for_dimension(4);
  EXPECT_THROW(simplex_membership(geo4.mub(0), oracle::random_state(4, 1)), UnsupportedDimension);
  EXPECT_NEAR(inequality_coefficient(4), 16.0 / 3, 1e-15);
}

TEST(Inequality, GapIsLhsMinusRhs) {
  const auto geo = StabilizerGeometry::for_dimension(4);
  const CVector psi = oracle::random_state(4, 21);
  const auto r = inequality_report(geo, psi);
  ASSERT_EQ(r.f_mus_per_mub.size(), 6u);
  const double worst = *std::max_element(r.f_mus_per_mub.begin(), r.f_mus_per_mub.end());
  EXPECT_NEAR(r.inequality_rhs, 16.0 / 3 * worst, 1e-15);
  EXPECT_NEAR(r.gap, r.f_sic - r.inequality_rhs, 1e-15);
}
