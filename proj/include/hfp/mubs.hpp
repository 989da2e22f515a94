#pragma once

// Maximal abelian subgroups (petals), flowers and the stabilizer MUBs built
// from their joint eigenbases.

#include "hfp/algebra.hpp"

#include <cstddef>
#include <vector>

namespace hfp {

/// Maximal abelian subgroup modulo phases, stored without the identity.
struct Petal {
  std::vector<DisplacementIndex> members;     // sorted, nontrivial
  std::vector<DisplacementIndex> generators;  // one for prime d, two for bipartite d = 4
};

/// Partition of the nontrivial group elements into disjoint petals.
struct Flower {
  std::vector<std::size_t> petals;  // positions in the petal list, ascending
};

/// Orthonormal joint eigenbasis of one petal; columns are basis vectors.
struct Basis {
  CMatrix columns;
  std::size_t petal = 0;

  int dim() const { return static_cast<int>(columns.rows()); }
  CVector column(int k) const { return columns.col(k); }
};

struct MUBasisSet {
  std::vector<Basis> bases;
  std::vector<int> labels;

  int dim() const { return bases.empty() ? 0 : bases.front().dim(); }
  std::size_t size() const { return bases.size(); }
};

/// Exhaustive, duplicate-free petal list sorted by member index order.
std::vector<Petal> enumerate_petals(const HeisenbergGroup& group);
/// All partitions of the nontrivial elements into petals, in lexicographic order.
std::vector<Flower> enumerate_flowers(const HeisenbergGroup& group, const std::vector<Petal>& petals);
std::vector<Flower> enumerate_flowers(const HeisenbergGroup& group);

/// Joint eigenbasis from rank-one character projectors. Columns are ordered
/// by character exponent; each column's first non-zero amplitude is real positive.
Basis petal_eigenbasis(const HeisenbergGroup& group, const Petal& petal, std::size_t petal_position = 0);

MUBasisSet stabilizer_mub(const std::vector<Basis>& petal_bases, const Flower& flower);

/// Max deviation of |<e|f>|^2 from 1/d over pairs from different bases.
double unbiasedness_report(const MUBasisSet& mub);

/// Group, petals, their eigenbases and flowers, built once.
class StabilizerGeometry {
 public:
  static StabilizerGeometry build(int d, GroupKind kind = GroupKind::single);
  /// d = 4 selects the bipartite group, any other supported d the single one.
  static StabilizerGeometry for_dimension(int d);

  const HeisenbergGroup& group() const { return group_; }
  int dim() const { return group_.dim(); }
  const std::vector<Petal>& petals() const { return petals_; }
  const std::vector<Basis>& petal_bases() const { return bases_; }
  const std::vector<Flower>& flowers() const { return flowers_; }
  MUBasisSet mub(std::size_t flower = 0) const;

  /// Every petal eigenvector, deduplicated by fidelity.
  std::vector<StateVector> stabilizer_states() const;

 private:
  explicit StabilizerGeometry(HeisenbergGroup g) : group_(std::move(g)) {}

  HeisenbergGroup group_;
  std::vector<Petal> petals_;
  std::vector<Basis> bases_;
  std::vector<Flower> flowers_;
};

std::vector<StateVector> stabilizer_states(const HeisenbergGroup& group);

}  // namespace hfp
