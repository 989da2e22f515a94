#include "hfp/explore.hpp"

#include "hfp/errors.hpp"
#include "hfp/potentials.hpp"
#include "hfp/states.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace hfp {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

CVector gaussian_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = cplx(re, im);
  }
  return v;
}

}  // namespace

StateVector Sampler::at(int dim, std::uint64_t seed, std::uint64_t counter) {
  std::mt19937_64 rng(derive_seed(seed, counter));
  return StateVector(gaussian_vector(dim, rng));
}

StateVector perturb(const StateVector& psi, double eps, std::uint64_t seed, std::uint64_t counter) {
  std::mt19937_64 rng(derive_seed(seed ^ 0x5DEECE66DULL, counter));
  return StateVector(psi.amplitudes() + (eps / std::sqrt(2.0)) * gaussian_vector(psi.dim(), rng));
}

// ---------------------------------------------------------------------------

Functional f_sic_functional(const HeisenbergGroup& group) {
  auto g = std::make_shared<const HeisenbergGroup>(group);
  return {"f_sic", [g](const CVector& psi, CVector* grad) {
            if (!grad) return f_sic(*g, psi);
            double v = 0.0;
            *grad = raw_gradient_f_sic(*g, psi, &v);
            return v;
          }};
}

Functional f_mus_functional(const MUBasisSet& mub, std::string name) {
  auto m = std::make_shared<const MUBasisSet>(mub);
  return {std::move(name), [m](const CVector& psi, CVector* grad) {
            if (!grad) return f_mus(*m, psi);
            double v = 0.0;
            *grad = raw_gradient_f_mus(*m, psi, &v);
            return v;
          }};
}

Functional f_mus_sum_functional(const std::vector<MUBasisSet>& mubs) {
  std::vector<Functional> terms;
  for (std::size_t i = 0; i < mubs.size(); ++i) terms.push_back(f_mus_functional(mubs[i]));
  return weighted_sum(std::move(terms), std::vector<double>(mubs.size(), 1.0), "f_mus_sum");
}

Functional soft_max_functional(const std::vector<MUBasisSet>& mubs, double p) {
  auto ms = std::make_shared<const std::vector<MUBasisSet>>(mubs);
  return {"soft_max_f_mus", [ms, p](const CVector& psi, CVector* grad) {
            const auto n = ms->size();
            std::vector<double> vals(n);
            std::vector<CVector> grads(grad ? n : 0);
            for (std::size_t i = 0; i < n; ++i) {
              vals[i] = grad ? 0.0 : f_mus((*ms)[i], psi);
              if (grad) grads[i] = raw_gradient_f_mus((*ms)[i], psi, &vals[i]);
            }
            const double top = *std::max_element(vals.begin(), vals.end());
            if (!(top > 0.0)) {
              if (grad) *grad = CVector::Zero(psi.size());
              return 0.0;
            }
            double s = 0.0;
            for (double v : vals) s += std::pow(v / top, p);
            if (grad) {
              *grad = CVector::Zero(psi.size());
              const double outer = std::pow(s, 1.0 / p - 1.0);
              for (std::size_t i = 0; i < n; ++i) *grad += (outer * std::pow(vals[i] / top, p - 1.0)) * grads[i];
            }
            return top * std::pow(s, 1.0 / p);
          }};
}

Functional negated(Functional f) {
  auto inner = std::make_shared<Functional>(std::move(f));
  return {"-" + inner->name, [inner](const CVector& psi, CVector* grad) {
            const double v = inner->eval(psi, grad);
            if (grad) *grad = -*grad;
            return -v;
          }};
}

Functional weighted_sum(std::vector<Functional> terms, std::vector<double> weights, std::string name) {
  if (terms.size() != weights.size()) throw ConfigError("weighted_sum: terms and weights differ in length");
  auto t = std::make_shared<const std::vector<Functional>>(std::move(terms));
  auto w = std::make_shared<const std::vector<double>>(std::move(weights));
  return {std::move(name), [t, w](const CVector& psi, CVector* grad) {
            double total = 0.0;
            if (grad) *grad = CVector::Zero(psi.size());
            CVector g;
            for (std::size_t i = 0; i < t->size(); ++i) {
              const double v = (*t)[i].eval(psi, grad ? &g : nullptr);
              total += (*w)[i] * v;
              if (grad) *grad += (*w)[i] * g;
            }
            return total;
          }};
}

// ---------------------------------------------------------------------------

namespace {

struct SphereObjective {
  const Functional& f;
  const std::optional<CMatrix>& frame;
  bool real;

  CVector state(const CVector& x) const { return frame ? CVector(*frame * x) : x; }

  // Value and tangent gradient in coefficient space.
  double operator()(const CVector& x, CVector& tangent) const {
    CVector g;
    const double v = f.eval(state(x), &g);
    tangent = frame ? CVector(frame->adjoint() * g) : g;
    if (real) tangent = tangent.real().cast<cplx>();
    tangent -= x.dot(tangent).real() * x;
    return v;
  }
};

CVector normalized_coefficients(CVector x, bool real) {
  if (real) x = x.real().cast<cplx>();
  const double n = x.norm();
  if (!(n > 0.0)) throw Error("optimizer: zero start vector");
  return x / n;
}

}  // namespace

LocalResult minimize_on_sphere(const Functional& f, CVector start, const std::optional<CMatrix>& frame,
                               bool real_coefficients, double gradient_tolerance, int max_iterations,
                               const LineSearch& ls) {
  const SphereObjective obj{f, frame, real_coefficients};
  CVector x = normalized_coefficients(std::move(start), real_coefficients);
  CVector t;
  double v = obj(x, t);
  double gn = t.norm();
  double alpha = gn > 0 ? 0.1 / gn : 1.0;

  LocalResult r;
  int it = 0;
  CVector xn, tn;
  std::vector<double> values, gnorms;
  for (; it < max_iterations; ++it) {
    if (gn < gradient_tolerance) break;
    values.push_back(v);
    gnorms.push_back(gn);
    const double band = ls.stall_tolerance * (1.0 + std::abs(v));
    if (it >= ls.stall_window) {
      const auto w0 = static_cast<std::size_t>(it - ls.stall_window);
      const double best_g = *std::min_element(gnorms.begin() + static_cast<std::ptrdiff_t>(w0), gnorms.end());
      if (values[w0] - v <= band && best_g > 0.5 * gnorms[w0]) break;
    }
    double step = alpha;
    bool accepted = false;
    double vn = v;
    for (int h = 0; h <= ls.max_halvings; ++h) {
      xn = (x - step * t).normalized();
      vn = obj(xn, tn);
      // Armijo, or at roundoff level a step that still shrinks the gradient.
      if (vn <= v - ls.armijo * step * gn * gn || (vn <= v + band && tn.norm() < gn)) {
        accepted = true;
        break;
      }
      step *= ls.shrink;
    }
    if (!accepted) break;
    // Barzilai-Borwein trial step for the next iteration
    const CVector s = xn - x;
    const CVector y = tn - t;
    const double sy = s.dot(y).real();
    alpha = sy > 0 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e10) : std::min(2.0 * step, 1e10);
    x = std::move(xn);
    t = std::move(tn);
    v = vn;
    gn = t.norm();
  }
  r.psi = obj.state(x);
  r.objective = v;
  r.gradient_norm = gn;
  r.iterations = it;
  r.converged = gn < gradient_tolerance;
  return r;
}

CVector random_start(const OptimizationProblem& problem, std::uint64_t seed) {
  const CVector psi = Sampler::at(problem.dim, seed, 0).amplitudes();
  CVector x = problem.frame ? CVector(problem.frame->adjoint() * psi) : psi;
  return normalized_coefficients(std::move(x), problem.real_coefficients);
}

LocalResult solve_from(const OptimizationProblem& problem, const CVector& start_coefficients) {
  if (problem.frame && problem.frame->rows() != problem.dim) {
    throw DimensionMismatch("optimizer: frame rows differ from problem dimension");
  }
  auto coefficients = [&](const CVector& psi) {
    return problem.frame ? CVector(problem.frame->adjoint() * psi) : psi;
  };
  LocalResult r;
  if (problem.constraints.empty()) {
    r = minimize_on_sphere(problem.objective, start_coefficients, problem.frame, problem.real_coefficients,
                           problem.gradient_tolerance, problem.max_iterations);
    r.residual = 0.0;
    r.converged = r.gradient_norm < problem.stationarity_tolerance;
    return r;
  }

  CVector x = start_coefficients;
  std::vector<Functional> terms{problem.objective};
  terms.insert(terms.end(), problem.constraints.begin(), problem.constraints.end());
  for (double mu : problem.penalty_weights) {
    std::vector<double> w(terms.size(), mu);
    w[0] = 1.0;
    const auto penalized = weighted_sum(terms, w, "penalized");
    r = minimize_on_sphere(penalized, x, problem.frame, problem.real_coefficients, problem.gradient_tolerance,
                           problem.max_iterations);
    x = coefficients(r.psi);
  }
  // Feasibility restoration: descend the constraint sum alone from the penalty optimum.
  const auto feasibility = weighted_sum(problem.constraints, std::vector<double>(problem.constraints.size(), 1.0),
                                        "feasibility");
  r = minimize_on_sphere(feasibility, x, problem.frame, problem.real_coefficients, 0.0, problem.max_iterations);
  r.objective = problem.objective(r.psi);
  r.residual = 0.0;
  for (const auto& c : problem.constraints) r.residual = std::max(r.residual, c(r.psi));
  r.converged = r.residual < problem.residual_tolerance;
  return r;
}

std::vector<LocalResult> optimize_all(const OptimizationProblem& problem, std::uint64_t seed) {
  if (problem.restarts < 1) throw ConfigError("optimizer: restarts must be positive");
  std::vector<LocalResult> runs;
  runs.reserve(static_cast<std::size_t>(problem.restarts));
  for (int k = 0; k < problem.restarts; ++k) {
    auto r = solve_from(problem, random_start(problem, derive_seed(seed, static_cast<std::uint64_t>(k))));
    r.restart = static_cast<std::size_t>(k);
    runs.push_back(std::move(r));
  }
  return runs;
}

OptimizationResult summarize(const OptimizationProblem& problem, const std::vector<LocalResult>& runs) {
  const bool constrained = !problem.constraints.empty();
  OptimizationResult out;
  out.restarts = static_cast<int>(runs.size());
  const LocalResult* best = nullptr;
  std::vector<double> values;
  for (const auto& r : runs) {
    out.restart_objectives.push_back(r.objective);
    if (r.converged) ++out.converged_restarts;
    if (constrained && !r.converged) continue;
    values.push_back(r.objective);
    if (!best || r.objective < best->objective) best = &r;
  }
  if (!best) throw NoFeasiblePoint("no restart reached the constraint residual tolerance");
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] - values[i - 1] > 1e-8 * std::max(1.0, std::abs(values[i]))) ++out.distinct_optima;
  }
  out.state = StateVector(best->psi);
  out.objective = problem.objective(out.state.amplitudes());
  out.residual = best->residual;
  out.converged = best->converged;
  return out;
}

OptimizationResult optimize(const OptimizationProblem& problem, std::uint64_t seed) {
  return summarize(problem, optimize_all(problem, seed));
}

// ---------------------------------------------------------------------------

std::pair<McEstimate, McEstimate> mc_average_both(int d, std::size_t n, std::uint64_t seed) {
  if (n < 1000) throw ConfigError("mc_average: at least 1000 samples required");
  const auto geometry = StabilizerGeometry::for_dimension(d);
  const auto mub = geometry.mub(0);
  double s1 = 0, q1 = 0, s2 = 0, q2 = 0;
  Sampler sampler(d, seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto psi = sampler.next();
    const double a = f_sic(geometry.group(), psi);
    const double b = f_mus(mub, psi);
    s1 += a;
    q1 += a * a;
    s2 += b;
    q2 += b * b;
  }
  auto finish = [n](double s, double q) {
    const double nn = static_cast<double>(n);
    const double mean = s / nn;
    const double var = std::max(0.0, (q - nn * mean * mean) / (nn - 1.0));
    return McEstimate{mean, std::sqrt(var / nn), n};
  };
  return {finish(s1, q1), finish(s2, q2)};
}

McEstimate mc_average(FsFunctional which, int d, std::size_t n, std::uint64_t seed) {
  const auto both = mc_average_both(d, n, seed);
  return which == FsFunctional::f_sic ? both.first : both.second;
}

double fs_average_closed_form(FsFunctional which, int d, GroupKind kind) {
  const double x = d;
  if (which == FsFunctional::f_mus) return 4.0 * (x - 1.0) / ((x + 3.0) * (x + 2.0) * (x + 1.0));
  if (kind == GroupKind::bipartite) return 2.0 * x * (x - 1.0) / ((x + 3.0) * (x + 1.0));
  if (d % 2) return x * (x - 1.0) / ((x + 2.0) * (x + 1.0));
  return x * x / ((x + 3.0) * (x + 1.0));
}

double fs_average_closed_form(FsFunctional which, int d) {
  return fs_average_closed_form(which, d, d == 4 ? GroupKind::bipartite : GroupKind::single);
}

// ---------------------------------------------------------------------------

std::vector<MixtureComponent> parse_mixture(const std::string& spec) {
  std::vector<MixtureComponent> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string p;
    while (std::getline(is, p, ':')) parts.push_back(p);
    MixtureComponent c;
    c.kind = parts[0];
    if (c.kind == "uniform" || c.kind == "segment") {
      if (parts.size() != 1) throw ConfigError("mixture: '" + item + "' takes no arguments");
    } else if (c.kind == "near") {
      if (parts.size() < 2 || parts.size() > 3) throw ConfigError("mixture: expected near:<anchor>[:eps]");
      c.anchor = parts[1];
      if (parts.size() == 3) {
        try {
          c.eps = std::stod(parts[2]);
        } catch (const std::exception&) {
          throw ConfigError("mixture: bad noise scale '" + parts[2] + "'");
        }
      }
    } else {
      throw ConfigError("mixture: unknown component '" + c.kind + "'");
    }
    out.push_back(c);
  }
  if (out.empty()) throw ConfigError("mixture: empty specification");
  return out;
}

std::vector<ScatterRow> boundary_segment(const StabilizerGeometry& geometry, std::size_t n) {
  const int d = geometry.dim();
  const auto mub = geometry.mub(0);
  std::vector<ScatterRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n > 1 ? (kPi / 4.0) * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    CVector v = CVector::Zero(d);
    v(0) = std::cos(t);
    v(1) = std::sin(t);
    rows.push_back({f_mus(mub, v), f_sic(geometry.group(), v), "segment"});
  }
  return rows;
}

std::vector<ScatterRow> scatter_dataset(int d, std::size_t n, const std::vector<MixtureComponent>& mixture,
                                        std::uint64_t seed) {
  if (mixture.empty()) throw ConfigError("scatter_dataset: empty mixture");
  const auto geometry = StabilizerGeometry::for_dimension(d);
  const auto mub = geometry.mub(0);
  const std::size_t per = n / mixture.size();
  std::vector<ScatterRow> rows;
  rows.reserve(n);
  for (std::size_t c = 0; c < mixture.size(); ++c) {
    const auto& comp = mixture[c];
    const std::size_t count = c + 1 == mixture.size() ? n - per * (mixture.size() - 1) : per;
    const std::uint64_t stream = derive_seed(seed, c);
    if (comp.kind == "segment") {
      for (auto& row : boundary_segment(geometry, count)) rows.push_back(std::move(row));
      continue;
    }
    std::optional<StateVector> anchor;
    std::string label = "uniform";
    if (comp.kind == "near") {
      anchor = anchor_state(comp.anchor, d, seed);
      label = comp.anchor;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const StateVector psi = anchor ? perturb(*anchor, comp.eps, stream, i) : Sampler::at(d, stream, i);
      rows.push_back({f_mus(mub, psi), f_sic(geometry.group(), psi), label});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::vector<Table2Row> table2(int restarts, std::uint64_t seed) {
  const auto geometry = StabilizerGeometry::build(4, GroupKind::bipartite);
  std::vector<MUBasisSet> all;
  for (std::size_t f = 0; f < geometry.flowers().size(); ++f) all.push_back(geometry.mub(f));
  std::vector<Table2Row> rows;
  for (std::size_t k = 1; k <= all.size(); ++k) {
    OptimizationProblem problem;
    problem.dim = 4;
    problem.objective = f_mus_sum_functional({all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k)});
    problem.restarts = restarts;
    const auto result = optimize(problem, derive_seed(seed, k));
    rows.push_back({static_cast<int>(k), result.objective, result.state, result.converged_restarts});
  }
  return rows;
}

}  // namespace hfp
