#pragma once

// The two frame potentials f_SIC and f_MUS, MUB probability vectors,
// autocorrelations of probability vectors, the inequality between the
// potentials and their analytic gradients.

#include "hfp/algebra.hpp"
#include "hfp/mubs.hpp"

#include <vector>

namespace hfp {

/// p_i = |<e_i|psi>|^2 for one basis.
struct ProbabilityVector {
  RVector p;

  int dim() const { return static_cast<int>(p.size()); }
  double purity() const { return p.squaredNorm(); }
};

/// Delta_k = sum_m p_m p_{m+k}, k = 1..(d-1)/2, indices mod d (odd d only).
struct AutocorrelationVector {
  std::vector<double> delta;

  double spread() const;
};

struct PotentialReport {
  double f_sic = 0.0;
  std::vector<double> f_mus_per_mub;
  double coefficient = 0.0;  // d^2/(d-1)
  double inequality_lhs = 0.0;
  double inequality_rhs = 0.0;
  double gap = 0.0;
  bool saturated = false;
};

struct SimplexMembership {
  bool member = false;
  /// max_k Delta_k - min_k Delta_k, per basis.
  std::vector<double> delta_spread;
};

inline constexpr double kSaturationTolerance = 1e-8;
inline constexpr double kDeltaSpreadTolerance = 1e-7;

ProbabilityVector probability_vector(const Basis& basis, const CVector& psi);
inline ProbabilityVector probability_vector(const Basis& basis, const StateVector& psi) {
  return probability_vector(basis, psi.amplitudes());
}

/// Per-basis purities sum_r p_r^2.
std::vector<double> basis_purities(const MUBasisSet& mub, const CVector& psi);

/// sum over nontrivial group elements of (|<psi|D|psi>|^2 - 1/(d+1))^2.
double f_sic(const HeisenbergGroup& group, const CVector& psi);
inline double f_sic(const HeisenbergGroup& group, const StateVector& psi) { return f_sic(group, psi.amplitudes()); }

/// sum over bases of (sum_r p_r^2 - 2/(d+1))^2.
double f_mus(const MUBasisSet& mub, const CVector& psi);
inline double f_mus(const MUBasisSet& mub, const StateVector& psi) { return f_mus(mub, psi.amplitudes()); }

AutocorrelationVector autocorrelations(const ProbabilityVector& p);

/// Coefficient d^2/(d-1) of the inequality f_SIC >= c f_MUS (16/3 for d = 4).
double inequality_coefficient(int d);

PotentialReport inequality_report(const HeisenbergGroup& group, const MUBasisSet& mub, const CVector& psi);
inline PotentialReport inequality_report(const HeisenbergGroup& group, const MUBasisSet& mub,
                                         const StateVector& psi) {
  return inequality_report(group, mub, psi.amplitudes());
}
/// Report against all flowers of a geometry; the gap uses the largest f_mus.
PotentialReport inequality_report(const StabilizerGeometry& geometry, const CVector& psi);

/// True iff in every basis all Delta_k agree within tol (odd prime d only).
SimplexMembership simplex_membership(const MUBasisSet& mub, const CVector& psi,
                                     double tol = kDeltaSpreadTolerance);

// Gradients are returned packed as a complex vector g with
// Re g_k = df/dRe(psi_k) and Im g_k = df/dIm(psi_k).

/// Gradient of the polynomial extension of f_SIC to C^d (no normalization).
CVector raw_gradient_f_sic(const HeisenbergGroup& group, const CVector& psi, double* value = nullptr);
CVector raw_gradient_f_mus(const MUBasisSet& mub, const CVector& psi, double* value = nullptr);
/// Removes the radial component: g - Re<psi, g> psi.
CVector project_tangent(const CVector& psi, const CVector& g);

/// Sphere-projected gradients.
CVector gradient_f_sic(const HeisenbergGroup& group, const CVector& psi);
CVector gradient_f_mus(const MUBasisSet& mub, const CVector& psi);

}  // namespace hfp
