#pragma once

// Reproductions built on top of the other modules: the real Zauner slice in
// d = 7, orthogonality graphs, the d = 4 basis classification, the table of
// extremal values and the d = 4 two-MUB studies.

#include "hfp/algebra.hpp"
#include "hfp/explore.hpp"
#include "hfp/mubs.hpp"
#include "hfp/states.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hfp {

// ---------------------------------------------------------------------------
// Real Zauner subspace, d = 7

/// Real orthonormal 7 x 3 frame (x, y, z columns) spanning the largest
/// eigenspace of the order-3 Clifford unitary |k> -> |2k>. The z column is e_0.
RMatrix real_zauner_frame();
/// The order-3 unitary whose eigenspace the frame spans.
ZaunerUnitary real_zauner_unitary();

/// Stereographic chart of the upper hemisphere: (X, Y) = (x, y) / (1 + z).
std::array<double, 2> to_chart(const RVector& coefficients);
RVector from_chart(double x, double y);

struct MarkedPoint {
  double x = 0.0, y = 0.0;
  std::string label;  // MUS | SIC | Alltop | max
  double f_sic = 0.0;
  StateVector state;
};

struct GridPoint {
  double x = 0.0, y = 0.0, f_sic = 0.0;
};

struct SubspaceMap {
  int grid = 0;
  std::vector<GridPoint> points;  // only points of the closed unit disk
  std::vector<MarkedPoint> marked;
  double grid_max = 0.0;
  double polished_max = 0.0;
  double max_subspace_residual = 0.0;
};

/// MUS (f_mus = 0 against the stabilizer MUB) inside the real slice.
/// Throws IncompleteSet unless exactly six are found.
std::vector<StateVector> mus_in_real_zauner(int restarts = 400, std::uint64_t seed = 1);
/// Alltop vectors inside the real slice (zero Alltop defect for some petal).
std::vector<StateVector> alltop_in_real_zauner(int restarts = 200, std::uint64_t seed = 1);

SubspaceMap zauner_real_map(int grid_n, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Orthogonality graph

struct OrthogonalityGraph {
  std::vector<StateVector> vertices;
  std::vector<std::pair<int, int>> edges;  // i < j
  std::vector<int> degrees;
  bool regular = false;

  std::size_t edge_count() const { return edges.size(); }
};

/// Vertices are deduplicated by ray first; i ~ j iff |<i|j>|^2 < tol.
OrthogonalityGraph orthogonality_graph(const std::vector<StateVector>& states, double tol = 1e-8);

// ---------------------------------------------------------------------------
// d = 4 basis classification

enum class BasisShape { computational, hadamard, sparse };
const char* to_string(BasisShape shape);

struct BasisClass {
  std::size_t petal = 0;
  BasisShape shape = BasisShape::computational;
  bool maximally_entangled = false;
};

struct Classification {
  std::vector<BasisClass> bases;
  std::map<std::string, int> counts;  // computational, hadamard, sparse, maximally_entangled
};

/// Reduced single-qubit purity of a two-qubit pure state.
double reduced_purity(const CVector& psi);
Classification classify_bases_d4(const StabilizerGeometry& geometry);

// ---------------------------------------------------------------------------
// Extremal values

struct Table1Row {
  std::string state_class;
  double f_mus = 0.0;
  double f_sic = 0.0;
  double expected_f_mus = 0.0;
  double expected_f_sic = 0.0;
  bool pass = false;
};

std::vector<Table1Row> table1(int d, SearchOptions options = {});

// ---------------------------------------------------------------------------
// d = 4: pairs of stabilizer MUBs

struct StingrayRow {
  double f_mus_1 = 0.0;
  double f_mus_2 = 0.0;
  std::string source;  // uniform | near:<anchor> | minimizer
};

struct StingrayData {
  std::vector<StingrayRow> rows;
  double min_sum = 0.0;  // min of f_mus^(1) + f_mus^(2)
};

StingrayData stingray_dataset(std::size_t n, int restarts, std::uint64_t seed);

struct PairBound {
  int first = 0, second = 0;
  double min_max = 0.0;      // min over restarts of max(f_i, f_j) at the surrogate optima
  double lower_bound = 0.0;  // best surrogate value / 2^{1/p}
  int restarts = 0;
};

/// For every pair of flowers, minimizes a soft maximum of the two f_mus values.
std::vector<PairBound> double_mus_bounds(int restarts, std::uint64_t seed, double p = 16.0);

}  // namespace hfp
