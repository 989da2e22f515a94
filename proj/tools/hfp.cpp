// hfp: command-line front end for the Heisenberg frame-potential library.

#include "hfp/analysis.hpp"
#include "hfp/errors.hpp"
#include "hfp/explore.hpp"
#include "hfp/io.hpp"
#include "hfp/mubs.hpp"
#include "hfp/potentials.hpp"
#include "hfp/states.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <iostream>
#include <string>
#include <vector>

using namespace hfp;
using io::json;

namespace {

struct RunConfig {
  std::string command;
  int dim = 0;  // 0: not given
  std::string kind = "auto";
  std::uint64_t seed = 1;
  int restarts = 0;  // 0: command default
  std::string out;
  std::string spec;

  int flower = 0;
  std::string state;
  std::size_t n = 60000;
  std::string mix;
  std::string functional = "fsic";
  int grid = 400;
  std::string in;
  double tol = 1e-8;
  int figure = 0;
  int table = 0;

  // explore optimize
  std::string objective = "f_sic";
  std::vector<std::string> constraints;
  std::vector<int> mubs{0};
  std::string frame = "none";
  bool real_coefficients = false;
};

json to_json(const RunConfig& c) {
  return {{"command", c.command},     {"dim", c.dim},
          {"kind", c.kind},           {"seed", c.seed},
          {"restarts", c.restarts},   {"out", c.out},
          {"flower", c.flower},       {"state", c.state},
          {"n", c.n},                 {"mix", c.mix},
          {"functional", c.functional}, {"grid", c.grid},
          {"in", c.in},               {"tol", c.tol},
          {"figure", c.figure},       {"table", c.table},
          {"objective", c.objective}, {"constraints", c.constraints},
          {"mubs", c.mubs},           {"frame", c.frame},
          {"real_coefficients", c.real_coefficients}};
}

template <class T>
void override_from(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void apply_spec(RunConfig& c) {
  if (c.spec.empty()) return;
  json j;
  try {
    std::ifstream in(c.spec);
    if (!in) throw ConfigError("cannot open spec file '" + c.spec + "'");
    j = json::parse(in);
    override_from(j, "dim", c.dim);
    override_from(j, "kind", c.kind);
    override_from(j, "seed", c.seed);
    override_from(j, "restarts", c.restarts);
    override_from(j, "out", c.out);
    override_from(j, "flower", c.flower);
    override_from(j, "state", c.state);
    override_from(j, "n", c.n);
    override_from(j, "mix", c.mix);
    override_from(j, "functional", c.functional);
    override_from(j, "grid", c.grid);
    override_from(j, "in", c.in);
    override_from(j, "tol", c.tol);
    override_from(j, "figure", c.figure);
    override_from(j, "table", c.table);
    override_from(j, "objective", c.objective);
    override_from(j, "constraints", c.constraints);
    override_from(j, "mubs", c.mubs);
    override_from(j, "frame", c.frame);
    override_from(j, "real_coefficients", c.real_coefficients);
  } catch (const json::exception& e) {
    throw ConfigError("spec file '" + c.spec + "': " + e.what());
  }
}

int require_dim(const RunConfig& c) {
  if (c.dim <= 0) throw ConfigError("--dim is required");
  return c.dim;
}

StabilizerGeometry geometry_for(const RunConfig& c) {
  require_dim(c);
  if (c.kind == "auto") return StabilizerGeometry::for_dimension(c.dim);
  if (c.kind == "single") return StabilizerGeometry::build(c.dim, GroupKind::single);
  if (c.kind == "bipartite") return StabilizerGeometry::build(c.dim, GroupKind::bipartite);
  throw ConfigError("unknown group kind '" + c.kind + "'");
}

int restarts_or(const RunConfig& c, int fallback) { return c.restarts > 0 ? c.restarts : fallback; }

void emit(const RunConfig& c, const std::string& text, const std::string& default_name = "") {
  std::string path = c.out;
  if (!path.empty() && std::filesystem::is_directory(path) && !default_name.empty()) {
    path = (std::filesystem::path(path) / default_name).string();
  }
  if (path.empty()) {
    std::cout << text;
  } else {
    io::write_atomic(path, text);
  }
}

void emit_json(const RunConfig& c, const json& j) { emit(c, j.dump(2) + "\n"); }

json state_json(const StateVector& s) { return io::to_json(s.amplitudes()); }

// ---------------------------------------------------------------------------
// Acceptance-style checks for reproduce

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;

  void add(std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  bool all() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
  json to_json() const {
    json a = json::array();
    for (const auto& c : checks) a.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return a;
  }
};

std::string num(double x) { return io::format_double(x); }

std::string out_dir(const RunConfig& c) {
  const std::string dir = c.out.empty() ? "out" : c.out;
  std::filesystem::create_directories(dir);
  return dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string scatter_csv(const std::vector<ScatterRow>& rows) {
  io::Csv csv({"f_mus", "f_sic", "anchor"});
  for (const auto& r : rows) csv.row({num(r.f_mus), num(r.f_sic), r.anchor});
  return csv.str();
}

void check_scatter(Report& report, const std::vector<ScatterRow>& rows, int d) {
  const double coef = inequality_coefficient(d);
  double worst = std::numeric_limits<double>::infinity();
  bool segment = false;
  for (const auto& r : rows) {
    worst = std::min(worst, r.f_sic - coef * r.f_mus);
    segment = segment || r.anchor == "segment";
  }
  report.add("scatter inequality gap >= -1e-10", worst >= -1e-10, "min gap " + num(worst));
  report.add("boundary segment family present", segment, segment ? "yes" : "no");
}

// ---------------------------------------------------------------------------

int cmd_mub_dump(const RunConfig& c) {
  const auto g = geometry_for(c);
  if (c.flower < 0) throw IndexOutOfRange("flower index must be non-negative");
  const auto mub = g.mub(static_cast<std::size_t>(c.flower));
  json bases = json::array();
  for (std::size_t z = 0; z < mub.size(); ++z) {
    bases.push_back({{"label", mub.labels[z]}, {"petal", mub.bases[z].petal}, {"columns", io::to_json(mub.bases[z].columns)}});
  }
  emit_json(c, {{"dim", g.dim()},
                {"flower", c.flower},
                {"flowers", g.flowers().size()},
                {"bases", bases},
                {"unbiasedness_deviation", unbiasedness_report(mub)}});
  return 0;
}

int cmd_potentials_eval(const RunConfig& c) {
  if (c.state.empty()) throw ConfigError("potentials eval needs --state");
  const auto g = geometry_for(c);
  const auto psi = io::read_state(c.state);
  if (psi.dim() != g.dim()) throw DimensionMismatch("state dimension differs from --dim");
  const auto r = inequality_report(g, psi.amplitudes());
  json j{{"f_sic", r.f_sic},
         {"f_mus_per_mub", r.f_mus_per_mub},
         {"coefficient", r.coefficient},
         {"inequality_lhs", r.inequality_lhs},
         {"inequality_rhs", r.inequality_rhs},
         {"gap", r.gap},
         {"saturated", r.saturated}};
  if (g.dim() % 2 == 1) {
    json deltas = json::array();
    for (const auto& b : g.mub(0).bases) deltas.push_back(autocorrelations(probability_vector(b, psi)).delta);
    j["delta"] = deltas;
    j["simplex_member"] = simplex_membership(g.mub(0), psi.amplitudes()).member;
  }
  emit_json(c, j);
  return 0;
}

int cmd_states_catalog(const RunConfig& c) {
  const auto g = geometry_for(c);
  json a = json::array();
  for (const auto& s : catalog(c.dim, {restarts_or(c, 200), c.seed})) {
    json e{{"label", to_string(s.label)},
           {"amplitudes", state_json(s.vector)},
           {"f_sic", f_sic(g.group(), s.vector)},
           {"f_mus", f_mus(g.mub(0), s.vector)}};
    if (s.expected_f_sic) e["expected_f_sic"] = s.expected_f_sic->value();
    if (s.expected_f_mus) e["expected_f_mus"] = s.expected_f_mus->value();
    a.push_back(e);
  }
  emit_json(c, {{"dim", c.dim}, {"states", a}});
  return 0;
}

std::string balanced_csv(const BalancedSearch& b, int d) {
  std::vector<std::string> header;
  for (int k = 0; k < d; ++k) {
    header.push_back("re_" + std::to_string(k));
    header.push_back("im_" + std::to_string(k));
  }
  header.push_back("defect");
  io::Csv csv(header);
  for (std::size_t i = 0; i < b.states.size(); ++i) {
    std::vector<std::string> row;
    for (int k = 0; k < d; ++k) {
      row.push_back(num(b.states[i][k].real()));
      row.push_back(num(b.states[i][k].imag()));
    }
    row.push_back(num(b.defects[i]));
    csv.row(row);
  }
  return csv.str();
}

int cmd_states_balanced(const RunConfig& c) {
  const auto b = find_mub_balanced(require_dim(c), {restarts_or(c, 2000), c.seed});
  emit(c, balanced_csv(b, c.dim));
  std::cerr << "balanced states: " << b.states.size() << " distinct from " << b.hits << " hits in " << b.restarts
            << " restarts";
  if (b.expected) std::cerr << " (expected " << b.expected << ")";
  std::cerr << "\n";
  if (!b.complete) {
    std::cerr << "IncompleteSet: fewer distinct balanced states than expected\n";
    return 1;
  }
  return 0;
}

int cmd_explore_scatter(const RunConfig& c) {
  const std::string mix = c.mix.empty() ? "uniform,near:stabilizer,near:sic" : c.mix;
  const auto rows = scatter_dataset(require_dim(c), c.n, parse_mixture(mix), c.seed);
  emit(c, scatter_csv(rows));
  return 0;
}

Functional named_functional(const std::string& name, const StabilizerGeometry& g, const std::vector<int>& mubs) {
  std::vector<MUBasisSet> sets;
  for (int m : mubs) {
    if (m < 0) throw IndexOutOfRange("negative MUB index");
    sets.push_back(g.mub(static_cast<std::size_t>(m)));
  }
  if (name == "f_sic") return f_sic_functional(g.group());
  if (name == "neg_f_sic") return negated(f_sic_functional(g.group()));
  if (name == "f_mus") return f_mus_sum_functional(sets);
  if (name == "soft_max_f_mus") return soft_max_functional(sets);
  if (name == "balance_defect") return balance_defect_functional(sets.front());
  throw ConfigError("unknown functional '" + name + "'");
}

int cmd_explore_optimize(const RunConfig& c) {
  const auto g = geometry_for(c);
  OptimizationProblem p;
  p.dim = g.dim();
  p.objective = named_functional(c.objective, g, c.mubs);
  for (const auto& name : c.constraints) p.constraints.push_back(named_functional(name, g, c.mubs));
  if (c.frame == "negative_parity") {
    p.frame = negative_parity_frame(c.dim);
  } else if (c.frame == "real_zauner") {
    if (c.dim != 7) throw UnsupportedDimension("real_zauner frame exists for d = 7 only");
    p.frame = real_zauner_frame().cast<cplx>();
  } else if (c.frame != "none") {
    throw ConfigError("unknown frame '" + c.frame + "'");
  }
  p.real_coefficients = c.real_coefficients;
  p.restarts = restarts_or(c, 1000);
  const auto r = optimize(p, c.seed);
  emit_json(c, {{"objective", r.objective},
                {"residual", r.residual},
                {"converged", r.converged},
                {"restarts", r.restarts},
                {"converged_restarts", r.converged_restarts},
                {"distinct_optima", r.distinct_optima},
                {"state", state_json(r.state)},
                {"config", to_json(c)}});
  return 0;
}

int cmd_explore_fs_average(const RunConfig& c) {
  FsFunctional which;
  if (c.functional == "fsic") {
    which = FsFunctional::f_sic;
  } else if (c.functional == "fmus") {
    which = FsFunctional::f_mus;
  } else {
    throw ConfigError("--functional must be fsic or fmus");
  }
  const auto m = mc_average(which, require_dim(c), c.n, c.seed);
  const double exact = fs_average_closed_form(which, c.dim);
  emit_json(c, {{"functional", c.functional},
                {"dim", c.dim},
                {"mean", m.mean},
                {"standard_error", m.standard_error},
                {"samples", m.samples},
                {"closed_form", exact},
                {"z_score", (m.mean - exact) / m.standard_error}});
  return 0;
}

json map_sidecar(const SubspaceMap& map) {
  json marked = json::array();
  for (const auto& m : map.marked) {
    marked.push_back({{"x", m.x}, {"y", m.y}, {"label", m.label}, {"f_sic", m.f_sic}, {"state", state_json(m.state)}});
  }
  return {{"grid", map.grid},
          {"grid_max", map.grid_max},
          {"polished_max", map.polished_max},
          {"max_subspace_residual", map.max_subspace_residual},
          {"marked", marked}};
}

std::string map_csv(const SubspaceMap& map) {
  io::Csv csv({"x", "y", "f_sic"});
  for (const auto& p : map.points) csv.row({num(p.x), num(p.y), num(p.f_sic)});
  return csv.str();
}

int cmd_analysis_zauner_map(const RunConfig& c) {
  const auto map = zauner_real_map(c.grid, c.seed);
  const std::string path = c.out.empty() ? "map.csv" : c.out;
  io::write_atomic(path, map_csv(map));
  io::write_json(std::filesystem::path(path).replace_extension(".json").string(), map_sidecar(map));
  return 0;
}

int cmd_analysis_graph(const RunConfig& c) {
  if (c.in.empty()) throw ConfigError("analysis graph needs --in");
  const auto g = orthogonality_graph(io::read_states_csv(c.in), c.tol);
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  emit_json(c, {{"vertices", g.vertices.size()},
                {"edge_count", g.edge_count()},
                {"degrees", g.degrees},
                {"regular", g.regular},
                {"edges", edges}});
  return 0;
}

json table1_json(const std::vector<Table1Row>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"class", r.state_class},
                 {"f_mus", r.f_mus},
                 {"f_sic", r.f_sic},
                 {"expected_f_mus", r.expected_f_mus},
                 {"expected_f_sic", r.expected_f_sic},
                 {"pass", r.pass}});
  }
  return a;
}

int cmd_analysis_table1(const RunConfig& c) {
  const auto rows = table1(require_dim(c), {restarts_or(c, 200), c.seed});
  emit_json(c, {{"dim", c.dim}, {"rows", table1_json(rows)}});
  for (const auto& r : rows) {
    if (!r.pass) return 1;
  }
  return 0;
}

json classification_json(const Classification& cl) {
  json bases = json::array();
  for (const auto& b : cl.bases) {
    bases.push_back({{"petal", b.petal}, {"shape", to_string(b.shape)}, {"maximally_entangled", b.maximally_entangled}});
  }
  return {{"counts", cl.counts}, {"bases", bases}};
}

int cmd_analysis_classify(const RunConfig& c) {
  emit_json(c, classification_json(classify_bases_d4(StabilizerGeometry::build(4, GroupKind::bipartite))));
  return 0;
}

// ---------------------------------------------------------------------------

Report reproduce_figure(const RunConfig& c, json& extra) {
  const std::string dir = out_dir(c);
  Report report;
  switch (c.figure) {
    case 2: {
      const auto rows = scatter_dataset(5, c.n, parse_mixture("uniform,near:stabilizer,near:sic,segment"), c.seed);
      io::write_atomic(join(dir, "figure2.csv"), scatter_csv(rows));
      check_scatter(report, rows, 5);
      break;
    }
    case 3: {
      const auto rows =
          scatter_dataset(7, c.n, parse_mixture("uniform,near:stabilizer,near:sic,near:balanced,segment"), c.seed);
      io::write_atomic(join(dir, "figure3.csv"), scatter_csv(rows));
      check_scatter(report, rows, 7);
      const auto b = find_mub_balanced(7, {restarts_or(c, 2000), c.seed});
      io::write_atomic(join(dir, "figure3_balanced.csv"), balanced_csv(b, 7));
      const auto g = orthogonality_graph(b.states);
      report.add("21 distinct balanced states", b.states.size() == 21, std::to_string(b.states.size()));
      report.add("orthogonality graph regular", g.regular,
                 "degree " + std::to_string(g.degrees.empty() ? 0 : g.degrees.front()) + ", edges " +
                     std::to_string(g.edge_count()));
      extra["graph"] = {{"vertices", g.vertices.size()}, {"edge_count", g.edge_count()}, {"degrees", g.degrees}};
      break;
    }
    case 4: {
      const auto map = zauner_real_map(c.grid, c.seed);
      io::write_atomic(join(dir, "figure4_map.csv"), map_csv(map));
      io::write_json(join(dir, "figure4_marked.json"), map_sidecar(map));
      int mus = 0, sic = 0, alltop = 0;
      bool alltop_values = true;
      for (const auto& m : map.marked) {
        if (m.label == "MUS" || m.label == "SIC") ++mus;
        if (m.label == "SIC") ++sic;
        if (m.label == "Alltop") {
          ++alltop;
          alltop_values = alltop_values && std::abs(m.f_sic - 3.0 / 28.0) <= 1e-9;
        }
      }
      report.add("grid max 5.24 +- 0.01", std::abs(map.grid_max - 5.24) <= 0.01 + 1e-12, num(map.grid_max));
      report.add("6 MUS, 2 SIC", mus == 6 && sic == 2, std::to_string(mus) + " MUS, " + std::to_string(sic) + " SIC");
      report.add("6 Alltop at 3/28", alltop == 6 && alltop_values, std::to_string(alltop));
      break;
    }
    case 5: {
      const auto g = StabilizerGeometry::build(4, GroupKind::bipartite);
      const auto cl = classify_bases_d4(g);
      io::write_json(join(dir, "figure5.json"), classification_json(cl));
      report.add("15 petals, 6 flowers", g.petals().size() == 15 && g.flowers().size() == 6,
                 std::to_string(g.petals().size()) + ", " + std::to_string(g.flowers().size()));
      report.add("60 stabilizer states", g.stabilizer_states().size() == 60,
                 std::to_string(g.stabilizer_states().size()));
      auto cnt = cl.counts;
      report.add("1 computational, 8 Hadamard, 6 sparse",
                 cnt["computational"] == 1 && cnt["hadamard"] == 8 && cnt["sparse"] == 6,
                 std::to_string(cnt["computational"]) + "/" + std::to_string(cnt["hadamard"]) + "/" +
                     std::to_string(cnt["sparse"]));
      report.add("6 maximally entangled", cnt["maximally_entangled"] == 6, std::to_string(cnt["maximally_entangled"]));
      break;
    }
    case 6: {
      const auto rows = scatter_dataset(4, c.n, parse_mixture("uniform,near:stabilizer,near:alltop,near:balanced,segment"),
                                        c.seed);
      io::write_atomic(join(dir, "figure6.csv"), scatter_csv(rows));
      check_scatter(report, rows, 4);
      double top = 0.0;
      for (const auto& r : rows) top = std::max(top, r.f_sic);
      report.add("f_sic <= 12/5", top <= 12.0 / 5.0 + 1e-10, num(top));
      break;
    }
    case 7: {
      const auto data = stingray_dataset(c.n, restarts_or(c, 1000), c.seed);
      io::Csv csv({"f_mus_1", "f_mus_2", "source"});
      for (const auto& r : data.rows) csv.row({num(r.f_mus_1), num(r.f_mus_2), r.source});
      io::write_atomic(join(dir, "figure7.csv"), csv.str());
      report.add("min f1 + f2 = 0.0041666666 +- 1e-6", std::abs(data.min_sum - 0.0041666666) <= 1e-6,
                 num(data.min_sum));
      break;
    }
    default:
      throw ConfigError("--figure must be one of 2..7");
  }
  return report;
}

Report reproduce_table(const RunConfig& c, json& extra) {
  const std::string dir = out_dir(c);
  Report report;
  if (c.table == 1) {
    std::vector<int> dims{2, 3, 5, 7};
    if (c.dim != 0) dims = {c.dim};
    json all = json::object();
    for (int d : dims) {
      const auto rows = table1(d, {restarts_or(c, 200), c.seed});
      all[std::to_string(d)] = table1_json(rows);
      for (const auto& r : rows) {
        report.add("d=" + std::to_string(d) + " " + r.state_class, r.pass,
                   "(" + num(r.f_mus) + ", " + num(r.f_sic) + ")");
      }
    }
    io::write_json(join(dir, "table1.json"), all);
    extra["rows"] = all;
  } else if (c.table == 2) {
    const double expected[] = {0.0, 0.0041666666, 0.0102012357, 0.01875, 0.046875, 0.075};
    const auto rows = table2(restarts_or(c, 1000), c.seed);
    io::Csv csv({"mub_count", "minimum", "converged_restarts"});
    for (const auto& r : rows) {
      csv.row({std::to_string(r.mub_count), num(r.minimum), std::to_string(r.converged_restarts)});
      report.add("k=" + std::to_string(r.mub_count), std::abs(r.minimum - expected[r.mub_count - 1]) <= 1e-6,
                 num(r.minimum));
    }
    io::write_atomic(join(dir, "table2.csv"), csv.str());
  } else {
    throw ConfigError("--table must be 1 or 2");
  }
  return report;
}

int cmd_reproduce(const RunConfig& c) {
  if ((c.figure == 0) == (c.table == 0)) throw ConfigError("reproduce needs exactly one of --figure or --table");
  json extra = json::object();
  const Report report = c.figure ? reproduce_figure(c, extra) : reproduce_table(c, extra);
  for (const auto& ch : report.checks) {
    std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.name << " [" << ch.detail << "]\n";
  }
  io::write_json(join(out_dir(c), c.figure ? "figure" + std::to_string(c.figure) + "_summary.json"
                                           : "table" + std::to_string(c.table) + "_summary.json"),
                 {{"checks", report.to_json()}, {"pass", report.all()}, {"extra", extra}, {"config", to_json(c)}});
  for (const auto& ch : report.checks) {
    if (!ch.pass) {
      std::cerr << "failed check: " << ch.name << " [" << ch.detail << "]\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame potentials, stabilizer MUBs and special states over finite Heisenberg groups"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  app.add_option("--dim", c.dim, "Hilbert space dimension");
  app.add_option("--kind", c.kind, "Group kind: auto, single or bipartite");
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--out", c.out, "Output file (or directory for reproduce)");
  app.add_option("--spec", c.spec, "JSON config file overriding flags");
  app.add_option("--restarts", c.restarts, "Restart budget");

  auto* mub = app.add_subcommand("mub", "Stabilizer MUBs");
  mub->require_subcommand(1);
  auto* mub_dump = mub->add_subcommand("dump", "Dump the bases of one flower");
  mub_dump->add_option("--flower", c.flower);

  auto* pot = app.add_subcommand("potentials", "Frame potentials");
  pot->require_subcommand(1);
  auto* pot_eval = pot->add_subcommand("eval", "Evaluate a state");
  pot_eval->add_option("--state", c.state, "JSON or CSV state file")->required();

  auto* st = app.add_subcommand("states", "Special states");
  st->require_subcommand(1);
  auto* st_catalog = st->add_subcommand("catalog", "Named states with their potentials");
  auto* st_balanced = st->add_subcommand("balanced", "MUB-balanced state search");

  auto* ex = app.add_subcommand("explore", "Sampling and optimization");
  ex->require_subcommand(1);
  auto* ex_scatter = ex->add_subcommand("scatter", "(f_mus, f_sic) scatter dataset");
  ex_scatter->add_option("--n", c.n);
  ex_scatter->add_option("--mix", c.mix, "e.g. uniform,near:stabilizer,near:sic:0.1,segment");
  auto* ex_opt = ex->add_subcommand("optimize", "Run a multi-start optimization from --spec");
  auto* ex_fs = ex->add_subcommand("fs-average", "Monte Carlo Fubini-Study average");
  ex_fs->add_option("--n", c.n);
  ex_fs->add_option("--functional", c.functional, "fsic or fmus");

  auto* an = app.add_subcommand("analysis", "Reproductions");
  an->require_subcommand(1);
  auto* an_map = an->add_subcommand("zauner-map", "Real Zauner slice map, d = 7");
  an_map->add_option("--grid", c.grid);
  auto* an_graph = an->add_subcommand("graph", "Orthogonality graph of states from CSV");
  an_graph->add_option("--in", c.in)->required();
  an_graph->add_option("--tol", c.tol);
  auto* an_t1 = an->add_subcommand("table1", "Extremal values for one dimension");
  auto* an_cl = an->add_subcommand("classify-d4", "Shapes of the 15 two-qubit stabilizer bases");

  auto* rep = app.add_subcommand("reproduce", "Rerun a figure or table pipeline with checks");
  rep->add_option("--figure", c.figure);
  rep->add_option("--table", c.table);
  rep->add_option("--grid", c.grid);
  rep->add_option("--n", c.n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
    sub = sub->get_subcommands().front();
    c.command += (c.command.empty() ? "" : " ") + sub->get_name();
  }

  try {
    apply_spec(c);
    std::cerr << to_json(c).dump() << "\n";
    if (mub_dump->parsed()) return cmd_mub_dump(c);
    if (pot_eval->parsed()) return cmd_potentials_eval(c);
    if (st_catalog->parsed()) return cmd_states_catalog(c);
    if (st_balanced->parsed()) return cmd_states_balanced(c);
    if (ex_scatter->parsed()) return cmd_explore_scatter(c);
    if (ex_opt->parsed()) return cmd_explore_optimize(c);
    if (ex_fs->parsed()) return cmd_explore_fs_average(c);
    if (an_map->parsed()) return cmd_analysis_zauner_map(c);
    if (an_graph->parsed()) return cmd_analysis_graph(c);
    if (an_t1->parsed()) return cmd_analysis_table1(c);
    if (an_cl->parsed()) return cmd_analysis_classify(c);
    if (rep->parsed()) return cmd_reproduce(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedDimension& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
