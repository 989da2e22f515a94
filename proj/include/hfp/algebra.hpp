#pragma once

// Complex linear algebra primitives, finite Heisenberg groups, the parity
// operator and order-3 Clifford (Zauner) unitaries.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <compare>
#include <cstddef>
#include <numbers>
#include <vector>

namespace hfp {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

/// Non-negative residue of `a` modulo `m`.
int mod(long long a, int m);
/// Multiplicative inverse modulo m; throws IndexOutOfRange when none exists.
int inverse_mod(int a, int m);
bool is_prime(int n);
/// e^{2 pi i power / d}, with the exponent reduced exactly before evaluation.
cplx root_of_unity(int d, long long power);

/// Unit-norm pure state. Construction normalizes; a zero vector is rejected.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(CVector amplitudes);

  static StateVector basis(int d, int k);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  cplx operator[](int k) const { return amps_(k); }

  /// Same ray with the first non-negligible amplitude made real positive.
  StateVector phase_fixed() const;

 private:
  CVector amps_;
};

/// |<a|b>|^2 for unit vectors.
double fidelity(const CVector& a, const CVector& b);
inline double fidelity(const StateVector& a, const StateVector& b) {
  return fidelity(a.amplitudes(), b.amplitudes());
}
/// Rays coincide when the fidelity exceeds 1 - tol.
bool same_ray(const CVector& a, const CVector& b, double tol = 1e-8);

bool is_unitary(const CMatrix& u, double tol = 1e-10);
/// max |a - c b| over entries, minimised over the complex scalar c.
double distance_up_to_phase(const CMatrix& a, const CMatrix& b);

enum class GroupKind { single, bipartite };

/// Label of a displacement operator modulo phase.
/// single: (i, j, 0, 0) with residues mod d; bipartite: (a, b, c, e) mod 2,
/// standing for X^a Z^b (x) X^c Z^e.
struct DisplacementIndex {
  GroupKind kind = GroupKind::single;
  std::array<int, 4> v{};

  bool is_identity() const { return v == std::array<int, 4>{}; }
  auto operator<=>(const DisplacementIndex&) const = default;
};

/// Operator with one non-zero entry per row: (D psi)_r = phase[r] * psi[source[r]].
struct MonomialOperator {
  std::vector<int> source;
  std::vector<cplx> phase;

  CVector apply(const CVector& psi) const;
  CVector apply_adjoint(const CVector& psi) const;
  /// <psi| D |psi>
  cplx expectation(const CVector& psi) const;
  CMatrix dense() const;
};

/// Finite Heisenberg group H(d) (single kind) or H(2) x H(2) (bipartite, d = 4).
/// Elements are enumerated modulo phases in canonical order, identity first.
class HeisenbergGroup {
 public:
  static HeisenbergGroup build(int d, GroupKind kind = GroupKind::single);
  static bool supported(int d, GroupKind kind);

  int dim() const { return dim_; }
  GroupKind kind() const { return kind_; }
  /// Residue modulus of index components: d (single) or 2 (bipartite).
  int modulus() const { return modulus_; }
  /// e^{2 pi i / d}
  cplx omega() const { return root_of_unity(dim_, 1); }
  std::size_t size() const { return indices_.size(); }

  const std::vector<DisplacementIndex>& indices() const { return indices_; }
  std::size_t position(const DisplacementIndex& idx) const;

  DisplacementIndex index(int i, int j) const;
  DisplacementIndex index(int a, int b, int c, int e) const;
  DisplacementIndex compose(const DisplacementIndex& x, const DisplacementIndex& y) const;
  DisplacementIndex scale(const DisplacementIndex& x, int k) const;

  /// Exponent s with D_x D_y = w^s D_y D_x, where w is omega() for the
  /// single kind and -1 for the bipartite kind.
  int commutation_exponent(const DisplacementIndex& x, const DisplacementIndex& y) const;
  bool commute(const DisplacementIndex& x, const DisplacementIndex& y) const {
    return commutation_exponent(x, y) == 0;
  }

  /// D_ij = w^{ij/2} X^i Z^j for odd d; bare products X^i Z^j otherwise.
  CMatrix displacement(const DisplacementIndex& idx) const;
  const MonomialOperator& monomial(std::size_t position) const { return ops_[position]; }
  const MonomialOperator& monomial(const DisplacementIndex& idx) const {
    return ops_[position(idx)];
  }

  /// single: {X, Z}; bipartite: {X(x)I, Z(x)I, I(x)X, I(x)Z}.
  std::vector<CMatrix> generators() const;

 private:
  HeisenbergGroup() = default;
  void check(const DisplacementIndex& idx) const;

  int dim_ = 0;
  int modulus_ = 0;
  GroupKind kind_ = GroupKind::single;
  std::vector<DisplacementIndex> indices_;
  std::vector<MonomialOperator> ops_;
};

/// P|k> = |-k mod d> for odd prime d.
struct ParityOperator {
  int dim = 0;
  CMatrix matrix;
};

ParityOperator parity_operator(int d);
/// Orthonormal basis (|k> - |d-k>)/sqrt(2), k = 1..(d-1)/2, of the -1 eigenspace.
std::vector<StateVector> negative_parity_basis(int d);
/// Same basis as the columns of a d x (d-1)/2 matrix.
CMatrix negative_parity_frame(int d);

/// [[a, b], [c, e]] acting on column index vectors mod d.
struct SymplecticMatrix {
  int a = 1, b = 0, c = 0, e = 1;

  std::array<int, 2> apply(int i, int j, int d) const;
  SymplecticMatrix times(const SymplecticMatrix& o, int d) const;
  SymplecticMatrix inverse(int d) const;
  bool operator==(const SymplecticMatrix&) const = default;
};

/// Metaplectic (Weil) unitary U with U D_p U^dag proportional to D_{F p}, d odd prime.
/// Throws ConstructionFailure if the conjugation check exceeds 1e-8.
CMatrix clifford_unitary(int d, const SymplecticMatrix& f);

struct ZaunerUnitary {
  int dim = 0;
  SymplecticMatrix action;
  /// Rescaled so that U^3 = identity.
  CMatrix matrix;
  /// Phase phi of the unscaled metaplectic matrix, U_raw^3 = e^{i phi} I.
  double cube_phase = 0.0;
};

/// The symplectic matrix [[0, -1], [1, -1]].
SymplecticMatrix zauner_symplectic();
ZaunerUnitary zauner_unitary(int d);
/// Any order-3 symplectic matrix (trace -1 mod d).
ZaunerUnitary order3_clifford(int d, const SymplecticMatrix& f);

struct Eigenspace {
  cplx eigenvalue;
  CMatrix basis;  // orthonormal columns
  int dimension() const { return static_cast<int>(basis.cols()); }
};

/// Eigenspaces of an order-3 unitary (U^3 = I), largest first.
std::vector<Eigenspace> order3_eigenspaces(const CMatrix& u);

}  // namespace hfp
