#include "hfp/analysis.hpp"

#include "hfp/errors.hpp"
#include "hfp/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hfp {

namespace {

constexpr int kZaunerDim = 7;

RVector canonical_sign(RVector c) {
  if (c(2) < 0) c = -c;
  return c;
}

// Real-frame problem on the slice: coefficients are real and 3-dimensional.
OptimizationProblem slice_problem(Functional objective, int restarts) {
  OptimizationProblem problem;
  problem.dim = kZaunerDim;
  problem.objective = std::move(objective);
  problem.frame = real_zauner_frame().cast<cplx>();
  problem.real_coefficients = true;
  problem.restarts = restarts;
  problem.gradient_tolerance = 1e-13;
  return problem;
}

RVector slice_coefficients(const CVector& psi) {
  const RMatrix frame = real_zauner_frame();
  // Real states only up to a global phase: rotate the largest amplitude onto the real axis.
  Eigen::Index k = 0;
  psi.cwiseAbs().maxCoeff(&k);
  const CVector v = psi * std::polar(1.0, -std::arg(psi(k)));
  return canonical_sign((frame.transpose() * v.real()).normalized());
}

std::vector<StateVector> collect_hits(const OptimizationProblem& problem, std::uint64_t seed, double threshold) {
  std::vector<StateVector> out;
  for (const auto& r : optimize_all(problem, seed)) {
    if (problem.objective(r.psi) < threshold) insert_distinct(out, StateVector(r.psi).phase_fixed().amplitudes());
  }
  return out;
}

}  // namespace

ZaunerUnitary real_zauner_unitary() { return order3_clifford(kZaunerDim, SymplecticMatrix{2, 0, 0, 4}); }

RMatrix real_zauner_frame() {
  static const RMatrix frame = [] {
    const auto u = real_zauner_unitary();
    const auto spaces = order3_eigenspaces(u.matrix);
    const CMatrix& basis = spaces.front().basis;
    const CMatrix proj = basis * basis.adjoint();
    if (proj.imag().cwiseAbs().maxCoeff() > 1e-10) {
      throw SubspaceConstructionFailure("largest order-3 eigenspace is not invariant under conjugation");
    }
    const RMatrix re = proj.real();
    // Gram-Schmidt on projected computational vectors, in index order.
    std::vector<RVector> cols;
    for (int k = 0; k < kZaunerDim && static_cast<int>(cols.size()) < basis.cols(); ++k) {
      RVector v = re.col(k);
      for (const auto& c : cols) v -= c.dot(v) * c;
      if (v.norm() > 1e-8) cols.push_back(v.normalized());
    }
    if (static_cast<int>(cols.size()) != 3) throw SubspaceConstructionFailure("real Zauner slice is not 3-dimensional");
    RMatrix f(kZaunerDim, 3);
    f.col(0) = cols[1];
    f.col(1) = cols[2];
    f.col(2) = cols[0];
    return f;
  }();
  return frame;
}

std::array<double, 2> to_chart(const RVector& coefficients) {
  const RVector c = canonical_sign(coefficients.normalized());
  return {c(0) / (1.0 + c(2)), c(1) / (1.0 + c(2))};
}

RVector from_chart(double x, double y) {
  const double r2 = x * x + y * y;
  RVector c(3);
  c << 2.0 * x, 2.0 * y, 1.0 - r2;
  return c / (1.0 + r2);
}

std::vector<StateVector> mus_in_real_zauner(int restarts, std::uint64_t seed) {
  const auto geometry = StabilizerGeometry::build(kZaunerDim);
  const auto problem = slice_problem(f_mus_functional(geometry.mub(0)), restarts);
  auto found = collect_hits(problem, seed, 1e-14);
  if (found.size() != 6) {
    throw IncompleteSet("expected 6 MUS in the real Zauner slice, found " + std::to_string(found.size()));
  }
  return found;
}

std::vector<StateVector> alltop_in_real_zauner(int restarts, std::uint64_t seed) {
  const auto geometry = StabilizerGeometry::build(kZaunerDim);
  std::vector<StateVector> out;
  for (std::size_t z = 0; z < geometry.petals().size(); ++z) {
    const auto problem = slice_problem(alltop_defect_functional(geometry.group(), geometry.petals()[z]), restarts);
    for (const auto& s : collect_hits(problem, derive_seed(seed, z), 1e-14)) insert_distinct(out, s.amplitudes());
  }
  return out;
}

SubspaceMap zauner_real_map(int grid_n, std::uint64_t seed) {
  if (grid_n < 2) throw ConfigError("zauner_real_map: grid must have at least 2 points per side");
  const auto geometry = StabilizerGeometry::build(kZaunerDim);
  const auto& group = geometry.group();
  const RMatrix frame = real_zauner_frame();
  const CMatrix u = real_zauner_unitary().matrix;

  SubspaceMap map;
  map.grid = grid_n;
  map.grid_max = -std::numeric_limits<double>::infinity();
  RVector best;
  for (int i = 0; i < grid_n; ++i) {
    const double x = -1.0 + 2.0 * i / (grid_n - 1);
    for (int j = 0; j < grid_n; ++j) {
      const double y = -1.0 + 2.0 * j / (grid_n - 1);
      if (x * x + y * y > 1.0 + 1e-12) continue;
      const RVector c = from_chart(x, y);
      const CVector psi = (frame * c).cast<cplx>();
      map.max_subspace_residual = std::max(map.max_subspace_residual, (u * psi - psi).norm());
      const double v = f_sic(group, psi);
      map.points.push_back({x, y, v});
      if (v > map.grid_max) {
        map.grid_max = v;
        best = c;
      }
    }
  }

  auto mark = [&](const StateVector& s, const std::string& label) {
    const auto xy = to_chart(slice_coefficients(s.amplitudes()));
    map.marked.push_back({xy[0], xy[1], label, f_sic(group, s), s});
  };

  const LocalResult polished = minimize_on_sphere(negated(f_sic_functional(group)), best.cast<cplx>(),
                                                  frame.cast<cplx>(), true, 1e-12, 20000);
  map.polished_max = f_sic(group, polished.psi);
  mark(StateVector(polished.psi), "max");
  for (const auto& s : mus_in_real_zauner(400, seed)) mark(s, f_sic(group, s) < 1e-8 ? "SIC" : "MUS");
  for (const auto& s : alltop_in_real_zauner(200, derive_seed(seed, 1))) mark(s, "Alltop");
  return map;
}

// ---------------------------------------------------------------------------

OrthogonalityGraph orthogonality_graph(const std::vector<StateVector>& states, double tol) {
  OrthogonalityGraph g;
  for (const auto& s : states) insert_distinct(g.vertices, s.amplitudes());
  const auto n = static_cast<int>(g.vertices.size());
  g.degrees.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (fidelity(g.vertices[i], g.vertices[j]) < tol) {
        g.edges.emplace_back(i, j);
        ++g.degrees[i];
        ++g.degrees[j];
      }
    }
  }
  g.regular = std::adjacent_find(g.degrees.begin(), g.degrees.end(), std::not_equal_to<>()) == g.degrees.end();
  return g;
}

// ---------------------------------------------------------------------------

const char* to_string(BasisShape shape) {
  switch (shape) {
    case BasisShape::computational:
      return "computational";
    case BasisShape::hadamard:
      return "hadamard";
    case BasisShape::sparse:
      return "sparse";
  }
  return "?";
}

double reduced_purity(const CVector& psi) {
  if (psi.size() != 4) throw DimensionMismatch("reduced_purity: expected a two-qubit state");
  Eigen::Matrix2cd m;
  m << psi(0), psi(1), psi(2), psi(3);
  const Eigen::Matrix2cd rho = m * m.adjoint();
  return (rho * rho).trace().real();
}

Classification classify_bases_d4(const StabilizerGeometry& geometry) {
  if (geometry.dim() != 4 || geometry.group().kind() != GroupKind::bipartite) {
    throw UnsupportedDimension("classify_bases_d4 requires the bipartite d = 4 geometry");
  }
  constexpr double tol = 1e-10;
  Classification out;
  for (const char* key : {"computational", "hadamard", "sparse", "maximally_entangled"}) out.counts[key] = 0;
  for (const auto& basis : geometry.petal_bases()) {
    const RMatrix mag = basis.columns.cwiseAbs();
    const auto zeros = (mag.array() < tol).count();
    const auto ones = ((mag.array() - 1.0).abs() < tol).count();
    const bool flat = ((mag.array() - 0.5).abs() < tol).all();
    BasisClass c;
    c.petal = basis.petal;
    if (ones == 4 && zeros == 12) {
      c.shape = BasisShape::computational;
    } else if (flat) {
      c.shape = BasisShape::hadamard;
    } else if (zeros >= 8) {
      c.shape = BasisShape::sparse;
    } else {
      throw UnclassifiableBasis("petal basis " + std::to_string(basis.petal) + " fits no category");
    }
    c.maximally_entangled = true;
    for (int k = 0; k < 4; ++k) {
      if (std::abs(reduced_purity(basis.column(k)) - 0.5) > tol) c.maximally_entangled = false;
    }
    ++out.counts[to_string(c.shape)];
    if (c.maximally_entangled) ++out.counts["maximally_entangled"];
    out.bases.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Table1Row> table1(int d, SearchOptions options) {
  if (d != 2 && d != 3 && d != 5 && d != 7) throw UnsupportedDimension("table1: d must be 2, 3, 5 or 7");
  const auto geometry = StabilizerGeometry::build(d);
  const auto mub = geometry.mub(0);
  const double n = d;
  std::vector<Table1Row> rows;
  auto add = [&](const std::string& name, const StateVector& s, double em, double es, double tol_mus,
                 double tol_sic) {
    Table1Row r{name, f_mus(mub, s), f_sic(geometry.group(), s), em, es, false};
    r.pass = std::abs(r.f_mus - em) < tol_mus && std::abs(r.f_sic - es) < tol_sic;
    rows.push_back(r);
  };
  add("stabilizer", StateVector::basis(d, 0), (n - 1) * (n - 1) / (n * (n + 1)), n * (n - 1) / (n + 1), 1e-9, 1e-9);
  if (d >= 3) {
    const auto alltop = d == 3 ? alltop_fiducial_d3(options) : alltop_fiducial(d);
    add("alltop", alltop, (n - 1) * (n - 1) / (n * n * n * (n + 1)), (n - 1) / (n * (n + 1)), 1e-9, 1e-9);
  }
  add("sic", sic_fiducial(d, options), 0.0, 0.0, 1e-10, 1e-12);
  return rows;
}

// ---------------------------------------------------------------------------

StingrayData stingray_dataset(std::size_t n, int restarts, std::uint64_t seed) {
  const auto geometry = StabilizerGeometry::build(4, GroupKind::bipartite);
  const std::vector<MUBasisSet> pair{geometry.mub(0), geometry.mub(1)};
  StingrayData out;
  auto row = [&](const CVector& psi, const std::string& source) {
    out.rows.push_back({f_mus(pair[0], psi), f_mus(pair[1], psi), source});
  };
  const std::vector<std::pair<std::string, std::optional<StateVector>>> sources{
      {"uniform", std::nullopt},
      {"near:stabilizer", StateVector::basis(4, 0)},
      {"near:alltop", alltop_fiducial_d4({200, seed})},
  };
  const std::size_t per = n / sources.size();
  for (std::size_t c = 0; c < sources.size(); ++c) {
    const auto stream = derive_seed(seed, c);
    const std::size_t count = c + 1 == sources.size() ? n - per * (sources.size() - 1) : per;
    for (std::size_t i = 0; i < count; ++i) {
      const auto& anchor = sources[c].second;
      row((anchor ? perturb(*anchor, 0.15, stream, i) : Sampler::at(4, stream, i)).amplitudes(), sources[c].first);
    }
  }
  OptimizationProblem problem;
  problem.dim = 4;
  problem.objective = f_mus_sum_functional(pair);
  problem.restarts = restarts;
  const auto runs = optimize_all(problem, derive_seed(seed, 99));
  for (const auto& r : runs) {
    if (r.gradient_norm < problem.stationarity_tolerance) row(r.psi, "minimizer");
  }
  out.min_sum = summarize(problem, runs).objective;
  return out;
}

std::vector<PairBound> double_mus_bounds(int restarts, std::uint64_t seed, double p) {
  const auto geometry = StabilizerGeometry::build(4, GroupKind::bipartite);
  const auto nf = static_cast<int>(geometry.flowers().size());
  std::vector<PairBound> out;
  for (int i = 0; i < nf; ++i) {
    for (int j = i + 1; j < nf; ++j) {
      const std::vector<MUBasisSet> pair{geometry.mub(i), geometry.mub(j)};
      OptimizationProblem problem;
      problem.dim = 4;
      problem.objective = soft_max_functional(pair, p);
      problem.restarts = restarts;
      problem.gradient_tolerance = 1e-10;
      PairBound b{i, j, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), restarts};
      for (const auto& r : optimize_all(problem, derive_seed(seed, static_cast<std::uint64_t>(i * nf + j)))) {
        b.min_max = std::min(b.min_max, std::max(f_mus(pair[0], r.psi), f_mus(pair[1], r.psi)));
        b.lower_bound = std::min(b.lower_bound, r.objective);
      }
      b.lower_bound /= std::pow(2.0, 1.0 / p);
      out.push_back(b);
    }
  }
  return out;
}

}  // namespace hfp
