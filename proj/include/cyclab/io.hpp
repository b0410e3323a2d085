#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclab/alpha.hpp"
#include "cyclab/cyclic.hpp"
#include "cyclab/gauss.hpp"
#include "cyclab/measure.hpp"
#include "cyclab/rohlin.hpp"

namespace cyclab {

using json = nlohmann::json;

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

// {"atoms":[{"re":..,"im":..,"w":..}, ...]}
DiscreteMeasure measure_from_json(const json& j);
json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure read_measure(const std::filesystem::path& path);

// {"values":[{"re":..,"im":..}, ...]}, positional against the measure.
SampledFunction function_from_json(const json& j, const DiscreteMeasure& mu);
json function_to_json(const SampledFunction& f);
json values_to_json(const std::vector<Complex>& v);
SampledFunction read_function(const std::filesystem::path& path, const DiscreteMeasure& mu);

// {"dim":d,"step":h,"origin":[..],"values":[..]} with optional "shape";
// without it the grid is a cube of side round(size^(1/d)).
GaussGrid grid_from_json(const json& j);
json grid_to_json(const GaussGrid& g);

json decomposition_to_json(const AlphaDecomposition& d);
// Rebinning against mu; the stored measure id must match.
AlphaDecomposition decomposition_from_json(const json& j, const DiscreteMeasure& mu);

// Written in the function-file layout ("values"), plus level, M, q_sup, delta.
json rho_to_json(const RhoWeight& rho);
RhoWeight rho_from_json(const json& j, const DiscreteMeasure& mu);

json multiplicity_to_json(const MultiplicityReport& rep, const RohlinLayers& layers);

std::string format_real(double x);  // shortest text that reads back to the same double

/// CSV with a fixed header; reals are written with 17 significant digits.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_.size(); }

  static std::string real(double x);
  static std::string integer(long long x);
  static std::string boolean(bool b) { return b ? "true" : "false"; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cyclab
