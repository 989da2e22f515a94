#pragma once

// Seeded Fubini-Study sampling, Monte Carlo averages, scatter datasets and
// the multi-start penalty optimizer used by every search in the library.

#include "hfp/algebra.hpp"
#include "hfp/mubs.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hfp {

/// Mixes a master seed with a stream/restart number.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Fubini-Study sampler: the state for (seed, counter) is fixed.
class Sampler {
 public:
  Sampler(int dim, std::uint64_t seed, std::uint64_t counter = 0) : dim_(dim), seed_(seed), counter_(counter) {}

  static StateVector at(int dim, std::uint64_t seed, std::uint64_t counter);
  StateVector next() { return at(dim_, seed_, counter_++); }

  int dim() const { return dim_; }
  std::uint64_t counter() const { return counter_; }

 private:
  int dim_;
  std::uint64_t seed_;
  std::uint64_t counter_;
};

inline StateVector sample_fs(Sampler& sampler) { return sampler.next(); }

/// psi + eps * complex Gaussian noise, renormalized.
StateVector perturb(const StateVector& psi, double eps, std::uint64_t seed, std::uint64_t counter);

// ---------------------------------------------------------------------------
// Functionals

/// Real-valued smooth functional on C^d. When `grad` is non-null it receives
/// the packed real gradient of the polynomial extension (see potentials.hpp).
struct Functional {
  std::string name;
  std::function<double(const CVector& psi, CVector* grad)> eval;

  double operator()(const CVector& psi) const { return eval(psi, nullptr); }
};

Functional f_sic_functional(const HeisenbergGroup& group);
Functional f_mus_functional(const MUBasisSet& mub, std::string name = "f_mus");
/// sum_i f_mus over the given MUBs
Functional f_mus_sum_functional(const std::vector<MUBasisSet>& mubs);
/// (sum_i f_i^p)^{1/p}: a smooth stand-in for max_i f_i.
Functional soft_max_functional(const std::vector<MUBasisSet>& mubs, double p = 16.0);
Functional negated(Functional f);
/// sum_i w_i f_i
Functional weighted_sum(std::vector<Functional> terms, std::vector<double> weights, std::string name);

// ---------------------------------------------------------------------------
// Optimization

struct OptimizationProblem {
  int dim = 0;
  Functional objective;
  /// Non-negative functionals with target value 0.
  std::vector<Functional> constraints;
  /// Optional orthonormal frame (d x m); states are frame * coefficients.
  std::optional<CMatrix> frame;
  bool real_coefficients = false;
  std::vector<double> penalty_weights{1.0, 10.0, 100.0, 1e3, 1e4, 1e5};
  int restarts = 1000;
  double gradient_tolerance = 1e-11;
  double stationarity_tolerance = 1e-6;
  double residual_tolerance = 1e-10;
  int max_iterations = 20000;
};

struct LocalResult {
  CVector psi;
  double objective = 0.0;
  double residual = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t restart = 0;
};

struct OptimizationResult {
  StateVector state;
  double objective = 0.0;
  double residual = 0.0;
  bool converged = false;
  int restarts = 0;
  int converged_restarts = 0;
  int distinct_optima = 0;
  std::vector<double> restart_objectives;
};

struct LineSearch {
  double armijo = 1e-4;
  double shrink = 0.5;
  int max_halvings = 50;
  /// Stop when over stall_window iterations the objective drops by less than
  /// stall_tolerance * (1 + |f|) and the gradient norm does not halve.
  int stall_window = 100;
  double stall_tolerance = 1e-15;
};

/// Projected gradient descent with Barzilai-Borwein trial steps and Armijo
/// backtracking on the unit sphere of coefficients. `start` is in coefficient space.
LocalResult minimize_on_sphere(const Functional& f, CVector start, const std::optional<CMatrix>& frame,
                               bool real_coefficients, double gradient_tolerance, int max_iterations,
                               const LineSearch& ls = {});

/// One restart: penalty stages, then feasibility restoration when constrained.
LocalResult solve_from(const OptimizationProblem& problem, const CVector& start_coefficients);
CVector random_start(const OptimizationProblem& problem, std::uint64_t seed);

/// Every restart's local result, in restart order.
std::vector<LocalResult> optimize_all(const OptimizationProblem& problem, std::uint64_t seed);
OptimizationResult optimize(const OptimizationProblem& problem, std::uint64_t seed);
OptimizationResult summarize(const OptimizationProblem& problem, const std::vector<LocalResult>& runs);

// ---------------------------------------------------------------------------
// Averages and datasets

enum class FsFunctional { f_sic, f_mus };

struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Monte Carlo average over Fubini-Study random states (d = 4 uses the
/// bipartite group and the first stabilizer MUB). Requires n >= 1000.
McEstimate mc_average(FsFunctional which, int d, std::size_t n, std::uint64_t seed);
/// Both functionals from one sample stream.
std::pair<McEstimate, McEstimate> mc_average_both(int d, std::size_t n, std::uint64_t seed);
/// Closed-form Fubini-Study averages. At even d the f_sic average of the
/// clock-shift group is d^2/((d+1)(d+3)); the bipartite group, whose elements
/// all square to the identity, gives 2d(d-1)/((d+1)(d+3)).
double fs_average_closed_form(FsFunctional which, int d, GroupKind kind);
/// Uses the group mc_average samples with: bipartite for d = 4, single otherwise.
double fs_average_closed_form(FsFunctional which, int d);

struct ScatterRow {
  double f_mus = 0.0;
  double f_sic = 0.0;
  std::string anchor;
};

/// One mixture component: "uniform", "near:<anchor>[:eps]" or "segment".
struct MixtureComponent {
  std::string kind;    // uniform | near | segment
  std::string anchor;  // stabilizer | sic | alltop | balanced
  double eps = 0.15;
};

std::vector<MixtureComponent> parse_mixture(const std::string& spec);

/// Equal numbers of rows per component; f_mus is taken against the first MUB.
std::vector<ScatterRow> scatter_dataset(int d, std::size_t n, const std::vector<MixtureComponent>& mixture,
                                        std::uint64_t seed);

/// cos(t) e_0 + sin(t) e_1 for t on an n-point grid of [0, pi/4].
std::vector<ScatterRow> boundary_segment(const StabilizerGeometry& geometry, std::size_t n);

struct Table2Row {
  int mub_count = 0;
  double minimum = 0.0;
  StateVector state;
  int converged_restarts = 0;
};

/// Minima of sum_{i<=k} f_mus^(i), k = 1..6, for the bipartite d = 4 geometry.
std::vector<Table2Row> table2(int restarts, std::uint64_t seed);

}  // namespace hfp
