#pragma once

// JSON/CSV serialization and atomic file output.

#include "hfp/algebra.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hfp::io {

using json = nlohmann::json;

/// Row-major array of [re, im] pairs.
json to_json(const CMatrix& m);
/// Array of [re, im] pairs.
json to_json(const CVector& v);
CVector vector_from_json(const json& j);

/// A state file is JSON ({"amplitudes": [[re, im], ...]} or a bare array of
/// pairs) or CSV with one "re,im" line per amplitude.
StateVector read_state(const std::string& path);
/// Reads every state of a CSV file whose rows are re_0,im_0,re_1,im_1,...
/// A non-numeric header line is skipped; with an odd column count the last
/// column (e.g. a defect value) is ignored.
std::vector<StateVector> read_states_csv(const std::string& path);

/// 17 significant digits, '.' decimal separator.
std::string format_double(double x);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<std::string>& cells);
  const std::string& str() const { return text_; }

  static std::string cell(double x) { return format_double(x); }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);
void write_json(const std::string& path, const json& j);

}  // namespace hfp::io
