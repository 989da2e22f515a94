#pragma once

// Special states: SIC fiducials, Alltop fiducials, MUB-balanced states, and
// the predicates used to recognise them.

#include "hfp/algebra.hpp"
#include "hfp/explore.hpp"
#include "hfp/mubs.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hfp {

enum class StateLabel { stabilizer, sic, alltop, mub_balanced, custom };

const char* to_string(StateLabel label);

struct Rational {
  long long num = 0;
  long long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct NamedState {
  StateLabel label = StateLabel::custom;
  int dim = 0;
  StateVector vector;
  std::optional<Rational> expected_f_sic;
  std::optional<Rational> expected_f_mus;  // against the first stabilizer MUB
};

/// Restart budget and seed for the variational constructors.
struct SearchOptions {
  int restarts = 200;
  std::uint64_t seed = 1;
};

/// (0, 1, -e^{i sigma}) / sqrt(2), with sigma clamped to [0, 2 pi / 6].
StateVector sic_fiducial_d3(double sigma);

/// Weyl-Heisenberg SIC fiducial for d in {2, 3, 5, 7}; closed form for d = 2,
/// multi-start minimization of f_SIC otherwise. Throws SearchFailure.
StateVector sic_fiducial(int d, SearchOptions options = {});

/// Amplitudes w^{k^3} / sqrt(d) for prime d >= 5.
StateVector alltop_fiducial(int d);
/// Variational: orbit of 9 vectors forms 3 MU bases, each unbiased to the Z basis.
StateVector alltop_fiducial_d3(SearchOptions options = {});
/// Variational: minimizer of the sum of f_MUS over all six stabilizer MUBs.
StateVector alltop_fiducial_d4(SearchOptions options = {});

/// sum_{p in petal} |a_p|^2 + sum_{p not in petal, p != 0} (|a_p|^2 - 1/d)^2 with
/// a_p = <psi|D_p|psi>. Zero iff the orbit of psi splits into d mutually
/// unbiased bases (cosets of `petal`).
double alltop_defect(const HeisenbergGroup& group, const Petal& petal, const CVector& psi);

Functional alltop_defect_functional(const HeisenbergGroup& group, const Petal& petal);

struct OrbitStructure {
  std::size_t petal = 0;  // petal whose cosets give the orbit bases
  double defect = 0.0;
  MUBasisSet orbit_bases;
};

/// Finds the petal minimising alltop_defect and builds the orbit bases.
OrbitStructure orbit_structure(const StabilizerGeometry& geometry, const CVector& psi);

/// sum_{z>0} || sort(p_z) - sort(p_0) ||^2
double balance_defect(const MUBasisSet& mub, const CVector& psi);
Functional balance_defect_functional(const MUBasisSet& mub);

/// Every per-basis purity equals 2/(d+1) within tol.
bool is_mus(const MUBasisSet& mub, const CVector& psi, double tol = 1e-8);

/// min over displaced parity operators D_p P D_p^dag of || P_p psi + psi ||.
double negative_parity_residual(const HeisenbergGroup& group, const CVector& psi);

struct BalancedSearch {
  std::vector<StateVector> states;
  std::vector<double> defects;
  int expected = 0;
  int restarts = 0;
  int hits = 0;  // restarts that ended at a balanced state
  bool complete = false;
};

inline constexpr double kBalancedTolerance = 1e-10;
inline constexpr double kDedupTolerance = 1e-8;

/// d in {3, 7, 11}: search in the negative-parity subspace of P;
/// d = 4: unrestricted search against the first stabilizer MUB.
BalancedSearch find_mub_balanced(int d, SearchOptions options = {2000, 1});

/// Append psi to `set` unless its ray is already present.
bool insert_distinct(std::vector<StateVector>& set, const CVector& psi, double tol = kDedupTolerance);

std::vector<NamedState> catalog(int d, SearchOptions options = {});

/// Anchor states for scatter mixtures: stabilizer | sic | alltop | balanced.
StateVector anchor_state(const std::string& name, int d, std::uint64_t seed = 1);

}  // namespace hfp
