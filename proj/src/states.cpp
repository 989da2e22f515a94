#include "hfp/states.hpp"

#include "hfp/errors.hpp"
#include "hfp/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

namespace hfp {

const char* to_string(StateLabel label) {
  switch (label) {
    case StateLabel::stabilizer:
      return "stabilizer";
    case StateLabel::sic:
      return "sic";
    case StateLabel::alltop:
      return "alltop";
    case StateLabel::mub_balanced:
      return "mub_balanced";
    case StateLabel::custom:
      break;
  }
  return "custom";
}

namespace {

// Sum over nontrivial p of |a_p|^2 where target_p = 0 and (|a_p|^2 - target_p)^2
// elsewhere, a_p = <psi|D_p|psi>. The linear zero-target terms keep the zeros
// non-degenerate so descent converges quickly.
double overlap_targets(const HeisenbergGroup& group, const std::vector<double>& target, const CVector& psi,
                       CVector* grad) {
  if (grad) *grad = CVector::Zero(psi.size());
  double s = 0.0;
  for (std::size_t k = 1; k < group.size(); ++k) {
    const auto& op = group.monomial(k);
    const cplx a = op.expectation(psi);
    double w = 0.5;
    if (target[k] == 0.0) {
      s += std::norm(a);
    } else {
      w = std::norm(a) - target[k];
      s += w * w;
    }
    if (grad) *grad += (4.0 * w) * (std::conj(a) * op.apply(psi) + a * op.apply_adjoint(psi));
  }
  return s;
}

std::vector<double> alltop_targets(const HeisenbergGroup& group, const Petal& petal) {
  std::vector<double> t(group.size(), 1.0 / group.dim());
  for (const auto& m : petal.members) t[group.position(m)] = 0.0;
  return t;
}

}  // namespace

Functional alltop_defect_functional(const HeisenbergGroup& group, const Petal& petal) {
  auto g = std::make_shared<const HeisenbergGroup>(group);
  auto t = std::make_shared<const std::vector<double>>(alltop_targets(group, petal));
  return {"alltop_defect", [g, t](const CVector& psi, CVector* grad) { return overlap_targets(*g, *t, psi, grad); }};
}

namespace {

// First restart whose objective drops below `threshold`.
std::optional<StateVector> first_hit(const OptimizationProblem& problem, std::uint64_t seed, int restarts,
                                     double threshold) {
  for (int k = 0; k < restarts; ++k) {
    const auto r = solve_from(problem, random_start(problem, derive_seed(seed, static_cast<std::uint64_t>(k))));
    if (problem.objective(r.psi) < threshold) return StateVector(r.psi);
  }
  return std::nullopt;
}

std::vector<std::size_t> sort_order(const RVector& p) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(p.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p(a) < p(b); });
  return idx;
}

double balance_defect_impl(const MUBasisSet& mub, const CVector& psi, CVector* grad) {
  const auto nb = mub.size();
  std::vector<CVector> amp(nb);
  std::vector<RVector> prob(nb);
  std::vector<std::vector<std::size_t>> order(nb);
  for (std::size_t z = 0; z < nb; ++z) {
    amp[z] = mub.bases[z].columns.adjoint() * psi;
    prob[z] = amp[z].cwiseAbs2();
    order[z] = sort_order(prob[z]);
  }
  const auto d = static_cast<std::size_t>(mub.dim());
  // dD/dp per basis, in original (unsorted) positions
  std::vector<RVector> dp(nb, RVector::Zero(static_cast<Eigen::Index>(d)));
  double s = 0.0;
  for (std::size_t z = 1; z < nb; ++z) {
    for (std::size_t k = 0; k < d; ++k) {
      const auto iz = static_cast<Eigen::Index>(order[z][k]);
      const auto i0 = static_cast<Eigen::Index>(order[0][k]);
      const double diff = prob[z](iz) - prob[0](i0);
      s += diff * diff;
      dp[z](iz) += 2.0 * diff;
      dp[0](i0) -= 2.0 * diff;
    }
  }
  if (grad) {
    *grad = CVector::Zero(psi.size());
    for (std::size_t z = 0; z < nb; ++z) {
      *grad += mub.bases[z].columns * (2.0 * dp[z].cast<cplx>().cwiseProduct(amp[z]));
    }
  }
  return s;
}

Rational rational(long long num, long long den) { return {num, den}; }

long long ll(int x) { return static_cast<long long>(x); }

}  // namespace

StateVector sic_fiducial_d3(double sigma) {
  const double s = std::clamp(sigma, 0.0, 2.0 * kPi / 6.0);
  CVector v(3);
  v << 0.0, 1.0, -std::polar(1.0, s);
  return StateVector(v);
}

StateVector sic_fiducial(int d, SearchOptions options) {
  if (d != 2 && d != 3 && d != 5 && d != 7) throw UnsupportedDimension("sic_fiducial: d must be 2, 3, 5 or 7");
  if (d == 2) {
    const double theta = std::acos(1.0 / std::sqrt(3.0));
    CVector v(2);
    v << std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), kPi / 4.0);
    return StateVector(v);
  }
  const auto group = HeisenbergGroup::build(d);
  OptimizationProblem problem;
  problem.dim = d;
  problem.objective = f_sic_functional(group);
  problem.gradient_tolerance = 1e-13;
  if (auto hit = first_hit(problem, options.seed, options.restarts, 1e-12)) return hit->phase_fixed();
  throw SearchFailure("sic_fiducial: no restart reached f_sic < 1e-12 in d = " + std::to_string(d));
}

StateVector alltop_fiducial(int d) {
  if (d < 5 || !is_prime(d)) throw UnsupportedDimension("alltop_fiducial: d must be a prime >= 5");
  CVector v(d);
  for (int k = 0; k < d; ++k) v(k) = root_of_unity(d, ll(k) * k * k);
  return StateVector(v);
}

double alltop_defect(const HeisenbergGroup& group, const Petal& petal, const CVector& psi) {
  return overlap_targets(group, alltop_targets(group, petal), psi, nullptr);
}

StateVector alltop_fiducial_d3(SearchOptions options) {
  const auto geometry = StabilizerGeometry::build(3);
  OptimizationProblem problem;
  problem.dim = 3;
  problem.objective = alltop_defect_functional(geometry.group(), geometry.petals().front());
  problem.gradient_tolerance = 1e-13;
  if (auto hit = first_hit(problem, options.seed, options.restarts, 1e-14)) return hit->phase_fixed();
  throw SearchFailure("alltop_fiducial_d3: no restart reached the Alltop orbit structure");
}

StateVector alltop_fiducial_d4(SearchOptions options) {
  const auto geometry = StabilizerGeometry::build(4, GroupKind::bipartite);
  std::vector<MUBasisSet> all;
  for (std::size_t f = 0; f < geometry.flowers().size(); ++f) all.push_back(geometry.mub(f));
  OptimizationProblem problem;
  problem.dim = 4;
  problem.objective = f_mus_sum_functional(all);
  problem.restarts = options.restarts;
  const auto result = optimize(problem, options.seed);
  const auto orbit = orbit_structure(geometry, result.state.amplitudes());
  if (orbit.defect > 1e-12) throw SearchFailure("alltop_fiducial_d4: minimizer has no Alltop orbit structure");
  return result.state.phase_fixed();
}

OrbitStructure orbit_structure(const StabilizerGeometry& geometry, const CVector& psi) {
  const auto& group = geometry.group();
  OrbitStructure out;
  out.defect = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < geometry.petals().size(); ++z) {
    const double v = alltop_defect(group, geometry.petals()[z], psi);
    if (v < out.defect) {
      out.defect = v;
      out.petal = z;
    }
  }
  // Cosets of the petal (with identity) partition the group; each coset's orbit is one basis.
  const auto& petal = geometry.petals()[out.petal];
  std::vector<DisplacementIndex> sub{group.indices().front()};
  sub.insert(sub.end(), petal.members.begin(), petal.members.end());
  std::vector<bool> used(group.size(), false);
  const int d = group.dim();
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (used[k]) continue;
    Basis b;
    b.columns.resize(d, d);
    b.petal = out.petal;
    int col = 0;
    for (const auto& s : sub) {
      const auto pos = group.position(group.compose(group.indices()[k], s));
      used[pos] = true;
      b.columns.col(col++) = group.monomial(pos).apply(psi);
    }
    out.orbit_bases.labels.push_back(static_cast<int>(out.orbit_bases.bases.size()));
    out.orbit_bases.bases.push_back(std::move(b));
  }
  return out;
}

double balance_defect(const MUBasisSet& mub, const CVector& psi) { return balance_defect_impl(mub, psi, nullptr); }

Functional balance_defect_functional(const MUBasisSet& mub) {
  auto m = std::make_shared<const MUBasisSet>(mub);
  return {"balance_defect", [m](const CVector& psi, CVector* grad) { return balance_defect_impl(*m, psi, grad); }};
}

bool is_mus(const MUBasisSet& mub, const CVector& psi, double tol) {
  const double target = 2.0 / (mub.dim() + 1);
  for (double p : basis_purities(mub, psi)) {
    if (std::abs(p - target) > tol) return false;
  }
  return true;
}

double negative_parity_residual(const HeisenbergGroup& group, const CVector& psi) {
  if (group.kind() != GroupKind::single || group.dim() % 2 == 0) {
    throw UnsupportedDimension("negative_parity_residual requires odd prime d");
  }
  const CMatrix parity = parity_operator(group.dim()).matrix;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < group.size(); ++k) {
    const auto& op = group.monomial(k);
    const CVector v = op.apply(parity * op.apply_adjoint(psi));
    best = std::min(best, (v + psi).norm());
  }
  return best;
}

bool insert_distinct(std::vector<StateVector>& set, const CVector& psi, double tol) {
  for (const auto& s : set) {
    if (same_ray(s.amplitudes(), psi, tol)) return false;
  }
  set.emplace_back(psi);
  return true;
}

BalancedSearch find_mub_balanced(int d, SearchOptions options) {
  if (d != 3 && d != 4 && d != 7 && d != 11) throw UnsupportedDimension("find_mub_balanced: d must be 3, 4, 7 or 11");
  const auto geometry = StabilizerGeometry::for_dimension(d);
  OptimizationProblem problem;
  problem.dim = d;
  problem.objective = balance_defect_functional(geometry.mub(0));
  problem.gradient_tolerance = 1e-13;
  problem.restarts = options.restarts;
  BalancedSearch out;
  if (d != 4) {
    problem.frame = negative_parity_frame(d);
    out.expected = d == 3 ? 1 : d * (d - 1) / 2;
  }
  out.restarts = options.restarts;
  std::vector<std::pair<double, StateVector>> hits;
  for (const auto& r : optimize_all(problem, options.seed)) {
    const double v = problem.objective(r.psi);
    if (v < kBalancedTolerance) hits.emplace_back(v, StateVector(r.psi).phase_fixed());
  }
  out.hits = static_cast<int>(hits.size());
  // Deterministic reduce: best first, then dedupe.
  std::stable_sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [v, s] : hits) {
    if (insert_distinct(out.states, s.amplitudes())) out.defects.push_back(v);
  }
  if (out.states.empty()) throw SearchFailure("find_mub_balanced: no restart reached a balanced state");
  out.complete = out.expected == 0 || static_cast<int>(out.states.size()) >= out.expected;
  return out;
}

namespace {

StateVector balanced_state(int d, SearchOptions options) {
  if (d == 3) return sic_fiducial_d3(0.0);
  if (d != 4 && d != 7 && d != 11) throw UnsupportedDimension("no balanced anchor state in d = " + std::to_string(d));
  const auto geometry = StabilizerGeometry::for_dimension(d);
  OptimizationProblem problem;
  problem.dim = d;
  problem.objective = balance_defect_functional(geometry.mub(0));
  problem.gradient_tolerance = 1e-13;
  if (d != 4) problem.frame = negative_parity_frame(d);
  if (auto hit = first_hit(problem, options.seed, options.restarts, kBalancedTolerance)) return hit->phase_fixed();
  throw SearchFailure("balanced_state: no restart reached a balanced state");
}

StateVector alltop_any(int d, SearchOptions options) {
  if (d == 3) return alltop_fiducial_d3(options);
  if (d == 4) return alltop_fiducial_d4(options);
  return alltop_fiducial(d);
}

}  // namespace

std::vector<NamedState> catalog(int d, SearchOptions options) {
  const long long n = d;
  std::vector<NamedState> out;
  out.push_back({StateLabel::stabilizer, d, StateVector::basis(d, 0), rational(n * (n - 1), n + 1),
                 rational((n - 1) * (n - 1), n * (n + 1))});
  if (d == 2 || d == 3 || d == 5 || d == 7) {
    out.push_back({StateLabel::sic, d, sic_fiducial(d, options), rational(0, 1), rational(0, 1)});
  }
  if (d != 2) {
    const auto psi = alltop_any(d, options);
    std::optional<Rational> fm;
    if (d != 4) fm = rational((n - 1) * (n - 1), n * n * n * (n + 1));
    out.push_back({StateLabel::alltop, d, psi, rational(n - 1, n * (n + 1)), fm});
  }
  if (d == 3) out.push_back({StateLabel::mub_balanced, d, sic_fiducial_d3(0.0), rational(0, 1), rational(0, 1)});
  if (d == 4) out.push_back({StateLabel::mub_balanced, d, balanced_state(4, options), rational(8, 25), rational(0, 1)});
  if (d == 7) out.push_back({StateLabel::mub_balanced, d, balanced_state(7, options), rational(7, 8), rational(0, 1)});
  return out;
}

StateVector anchor_state(const std::string& name, int d, std::uint64_t seed) {
  const SearchOptions options{200, seed};
  if (name == "stabilizer") return StateVector::basis(d, 0);
  if (name == "sic") return sic_fiducial(d, options);
  if (name == "alltop") return alltop_any(d, options);
  if (name == "balanced") return balanced_state(d, options);
  throw UnknownAnchorState("unknown anchor state '" + name + "'");
}

}  // namespace hfp
