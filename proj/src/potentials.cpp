#include "hfp/potentials.hpp"

#include "hfp/errors.hpp"

#include <algorithm>
#include <string>

namespace hfp {

namespace {

void require_dim(int expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
                            std::to_string(got));
  }
}

}  // namespace

double AutocorrelationVector::spread() const {
  if (delta.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(delta.begin(), delta.end());
  return *hi - *lo;
}

ProbabilityVector probability_vector(const Basis& basis, const CVector& psi) {
  require_dim(basis.dim(), psi.size(), "probability_vector");
  return {(basis.columns.adjoint() * psi).cwiseAbs2()};
}

std::vector<double> basis_purities(const MUBasisSet& mub, const CVector& psi) {
  require_dim(mub.dim(), psi.size(), "basis_purities");
  std::vector<double> out;
  out.reserve(mub.size());
  for (const auto& b : mub.bases) out.push_back((b.columns.adjoint() * psi).cwiseAbs2().squaredNorm());
  return out;
}

double f_sic(const HeisenbergGroup& group, const CVector& psi) {
  require_dim(group.dim(), psi.size(), "f_sic");
  const double c = 1.0 / (group.dim() + 1);
  double s = 0.0;
  for (std::size_t k = 1; k < group.size(); ++k) {
    const double t = std::norm(group.monomial(k).expectation(psi)) - c;
    s += t * t;
  }
  return s;
}

double f_mus(const MUBasisSet& mub, const CVector& psi) {
  const double c = 2.0 / (mub.dim() + 1);
  double s = 0.0;
  for (double purity : basis_purities(mub, psi)) s += (purity - c) * (purity - c);
  return s;
}

AutocorrelationVector autocorrelations(const ProbabilityVector& p) {
  const int d = p.dim();
  if (d % 2 == 0) throw UnsupportedDimension("autocorrelations are defined for odd d only");
  AutocorrelationVector a;
  for (int k = 1; k <= (d - 1) / 2; ++k) {
    double s = 0.0;
    for (int m = 0; m < d; ++m) s += p.p(m) * p.p((m + k) % d);
    a.delta.push_back(s);
  }
  return a;
}

double inequality_coefficient(int d) { return static_cast<double>(d) * d / (d - 1); }

PotentialReport inequality_report(const HeisenbergGroup& group, const MUBasisSet& mub, const CVector& psi) {
  require_dim(group.dim(), mub.dim(), "inequality_report");
  PotentialReport r;
  r.f_sic = f_sic(group, psi);
  r.f_mus_per_mub = {f_mus(mub, psi)};
  r.coefficient = inequality_coefficient(group.dim());
  r.inequality_lhs = r.f_sic;
  r.inequality_rhs = r.coefficient * r.f_mus_per_mub.front();
  r.gap = r.inequality_lhs - r.inequality_rhs;
  r.saturated = r.gap < kSaturationTolerance;
  return r;
}

PotentialReport inequality_report(const StabilizerGeometry& geometry, const CVector& psi) {
  PotentialReport r;
  r.f_sic = f_sic(geometry.group(), psi);
  for (std::size_t f = 0; f < geometry.flowers().size(); ++f) r.f_mus_per_mub.push_back(f_mus(geometry.mub(f), psi));
  r.coefficient = inequality_coefficient(geometry.dim());
  r.inequality_lhs = r.f_sic;
  r.inequality_rhs = r.coefficient * *std::max_element(r.f_mus_per_mub.begin(), r.f_mus_per_mub.end());
  r.gap = r.inequality_lhs - r.inequality_rhs;
  r.saturated = r.gap < kSaturationTolerance;
  return r;
}

SimplexMembership simplex_membership(const MUBasisSet& mub, const CVector& psi, double tol) {
  if (mub.dim() % 2 == 0) throw UnsupportedDimension("simplex_membership requires odd prime d");
  SimplexMembership s;
  s.member = true;
  for (const auto& b : mub.bases) {
    const double spread = autocorrelations(probability_vector(b, psi)).spread();
    s.delta_spread.push_back(spread);
    if (spread > tol) s.member = false;
  }
  return s;
}

CVector raw_gradient_f_sic(const HeisenbergGroup& group, const CVector& psi, double* value) {
  require_dim(group.dim(), psi.size(), "gradient_f_sic");
  const double c = 1.0 / (group.dim() + 1);
  CVector g = CVector::Zero(psi.size());
  double total = 0.0;
  for (std::size_t k = 1; k < group.size(); ++k) {
    const auto& op = group.monomial(k);
    const cplx a = op.expectation(psi);
    const double w = std::norm(a) - c;
    total += w * w;
    // d|a|^2 / d conj(psi) = conj(a) D psi + a D^dag psi
    g += (4.0 * w) * (std::conj(a) * op.apply(psi) + a * op.apply_adjoint(psi));
  }
  if (value) *value = total;
  return g;
}

CVector raw_gradient_f_mus(const MUBasisSet& mub, const CVector& psi, double* value) {
  require_dim(mub.dim(), psi.size(), "gradient_f_mus");
  const double c = 2.0 / (mub.dim() + 1);
  CVector g = CVector::Zero(psi.size());
  double total = 0.0;
  for (const auto& b : mub.bases) {
    const CVector amp = b.columns.adjoint() * psi;
    const RVector p = amp.cwiseAbs2();
    const double w = p.squaredNorm() - c;
    total += w * w;
    g += (8.0 * w) * (b.columns * (p.cast<cplx>().cwiseProduct(amp)));
  }
  if (value) *value = total;
  return g;
}

CVector project_tangent(const CVector& psi, const CVector& g) {
  return g - psi.dot(g).real() * psi;
}

CVector gradient_f_sic(const HeisenbergGroup& group, const CVector& psi) {
  return project_tangent(psi, raw_gradient_f_sic(group, psi));
}

CVector gradient_f_mus(const MUBasisSet& mub, const CVector& psi) {
  return project_tangent(psi, raw_gradient_f_mus(mub, psi));
}

}  // namespace hfp
