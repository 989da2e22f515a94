#include "hfp/io.hpp"

#include "hfp/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hfp::io {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_numbers(const std::string& line, bool& ok) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  ok = true;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) ok = false;
    } catch (const std::exception&) {
      ok = false;
    }
  }
  return out;
}

}  // namespace

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

CVector vector_from_json(const json& j) {
  const json& a = j.is_object() ? j.at("amplitudes") : j;
  if (!a.is_array() || a.empty()) throw ConfigError("state JSON: expected a non-empty array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!a[k].is_array() || a[k].size() != 2) throw ConfigError("state JSON: amplitude is not an [re, im] pair");
    v(static_cast<Eigen::Index>(k)) = cplx(a[k][0].get<double>(), a[k][1].get<double>());
  }
  return v;
}

StateVector read_state(const std::string& path) {
  const std::string text = slurp(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return StateVector(vector_from_json(json::parse(text)));
    } catch (const json::exception& e) {
      throw ConfigError("state file '" + path + "': " + e.what());
    }
  }
  std::vector<cplx> amps;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    bool ok = false;
    const auto nums = parse_numbers(line, ok);
    if (!ok || nums.size() != 2) {
      if (amps.empty()) continue;  // header
      throw ConfigError("state file '" + path + "': expected re,im per line");
    }
    amps.emplace_back(nums[0], nums[1]);
  }
  if (amps.empty()) throw ConfigError("state file '" + path + "' holds no amplitudes");
  return StateVector(Eigen::Map<CVector>(amps.data(), static_cast<Eigen::Index>(amps.size())));
}

std::vector<StateVector> read_states_csv(const std::string& path) {
  std::stringstream ss(slurp(path));
  std::string line;
  std::vector<StateVector> out;
  while (std::getline(ss, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    bool ok = false;
    const auto nums = parse_numbers(line, ok);
    if (!ok) {
      if (out.empty()) continue;
      throw ConfigError("states file '" + path + "': non-numeric row");
    }
    if (nums.size() < 2) throw ConfigError("states file '" + path + "': too few columns");
    CVector v(static_cast<Eigen::Index>(nums.size() / 2));
    for (std::size_t k = 0; k < nums.size() / 2; ++k) v(static_cast<Eigen::Index>(k)) = cplx(nums[2 * k], nums[2 * k + 1]);
    out.emplace_back(v);
  }
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Csv::Csv(std::vector<std::string> header) : columns_(header.size()) { row(header); }

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("csv: row width differs from header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
  return *this;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

void write_json(const std::string& path, const json& j) { write_atomic(path, j.dump(2) + "\n"); }

}  // namespace hfp::io
