#include "cyclab/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace cyclab {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

namespace {

double get_real(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw ConfigError(fmt::format("missing numeric field '{}'", key));
  return j.at(key).get<double>();
}

const json& get_array(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array())
    throw ConfigError(fmt::format("missing array field '{}'", key));
  return j.at(key);
}

std::string hex_id(std::uint64_t id) { return fmt::format("{:016x}", id); }

std::vector<std::size_t> index_list(const json& j) {
  std::vector<std::size_t> v;
  for (const auto& x : j) v.push_back(x.get<std::size_t>());
  return v;
}

}  // namespace

DiscreteMeasure measure_from_json(const json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : get_array(j, "atoms")) {
    const double re = get_real(a, "re"), im = a.contains("im") ? get_real(a, "im") : 0.0, w = get_real(a, "w");
    if (!std::isfinite(re) || !std::isfinite(im)) throw ConfigError("atom coordinates must be finite");
    atoms.push_back(Atom{PlanePoint(re, im), w});
  }
  return DiscreteMeasure(std::move(atoms));
}

json measure_to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"re", a.point.re}, {"im", a.point.im}, {"w", a.weight}});
  return json{{"atoms", std::move(atoms)}};
}

DiscreteMeasure read_measure(const std::filesystem::path& path) { return measure_from_json(read_json(path)); }

SampledFunction function_from_json(const json& j, const DiscreteMeasure& mu) {
  std::vector<Complex> v;
  for (const auto& x : get_array(j, "values")) {
    if (x.is_number()) v.emplace_back(x.get<double>(), 0.0);
    else v.emplace_back(get_real(x, "re"), x.contains("im") ? get_real(x, "im") : 0.0);
  }
  return SampledFunction(std::move(v), mu);
}

json values_to_json(const std::vector<Complex>& v) {
  json arr = json::array();
  for (auto c : v) arr.push_back({{"re", c.real()}, {"im", c.imag()}});
  return arr;
}

json function_to_json(const SampledFunction& f) { return json{{"values", values_to_json(f.values())}}; }

SampledFunction read_function(const std::filesystem::path& path, const DiscreteMeasure& mu) {
  return function_from_json(read_json(path), mu);
}

GaussGrid grid_from_json(const json& j) {
  GaussGrid g;
  if (!j.contains("dim")) throw ConfigError("grid file lacks 'dim'");
  g.dim = j.at("dim").get<int>();
  g.step = get_real(j, "step");
  for (const auto& x : get_array(j, "origin")) g.origin.push_back(x.get<double>());
  for (const auto& x : get_array(j, "values")) g.values.push_back(x.get<double>());
  if (j.contains("shape")) {
    for (const auto& x : j.at("shape")) g.shape.push_back(x.get<int>());
  } else {
    if (g.dim < 1) throw ConfigError("grid dimension must be positive");
    const auto side = static_cast<int>(std::lround(std::pow(static_cast<double>(g.values.size()), 1.0 / g.dim)));
    g.shape.assign(static_cast<std::size_t>(g.dim), side);
  }
  g.validate();
  return g;
}

json grid_to_json(const GaussGrid& g) {
  return json{{"dim", g.dim}, {"step", g.step}, {"origin", g.origin}, {"shape", g.shape}, {"values", g.values}};
}

json decomposition_to_json(const AlphaDecomposition& d) {
  json levels = json::array();
  for (std::size_t k = 0; k < d.levels.size(); ++k) {
    const auto& lv = d.levels[k];
    levels.push_back({{"level", k + 1},
                      {"cells", lv.cells},
                      {"slits", lv.slits},
                      {"slit_columns", lv.slit_columns},
                      {"channel_cells", lv.channel_cells},
                      {"pitch", lv.pitch},
                      {"budget", lv.budget},
                      {"removed_mass", lv.removed_mass},
                      {"coverage", lv.coverage},
                      {"within_budget", lv.within_budget}});
  }
  json coverage = json::array();
  for (std::size_t k = 0; k < d.levels.size(); ++k)
    coverage.push_back({{"level", k + 1}, {"coverage", d.levels[k].coverage}, {"removed_mass", d.levels[k].removed_mass}});
  return json{{"grid",
               {{"origin", {d.grid.origin.re, d.grid.origin.im}}, {"step", d.grid.step}, {"nx", d.grid.nx}, {"ny", d.grid.ny}}},
              {"eps", d.eps},
              {"total_mass", d.total_mass},
              {"never_covered_mass", d.never_covered_mass()},
              {"measure_id", hex_id(d.measure_id)},
              {"region", d.region},
              {"exempt", d.exempt},
              {"coverage", std::move(coverage)},
              {"levels", std::move(levels)}};
}

AlphaDecomposition decomposition_from_json(const json& j, const DiscreteMeasure& mu) {
  try {
    const auto& g = j.at("grid");
    GridSpec grid;
    grid.origin = PlanePoint(g.at("origin").at(0).get<double>(), g.at("origin").at(1).get<double>());
    grid.step = g.at("step").get<double>();
    grid.nx = g.at("nx").get<int>();
    grid.ny = g.at("ny").get<int>();
    if (j.at("measure_id").get<std::string>() != hex_id(mu.id()))
      throw BindingError("decomposition file was built for another measure");
    // Rebin to recover cell masses and atom cells.
    AlphaDecomposition d = decomposition_from_cells(mu, grid, {});
    d.levels.clear();
    d.eps = j.at("eps").get<double>();
    d.exempt = index_list(j.at("exempt"));
    for (const auto& l : j.at("levels")) {
      AlphaLevel lv;
      lv.cells = index_list(l.at("cells"));
      lv.slits = index_list(l.at("slits"));
      for (const auto& c : l.at("slit_columns")) lv.slit_columns.push_back(c.get<int>());
      lv.channel_cells = index_list(l.at("channel_cells"));
      lv.pitch = l.at("pitch").get<int>();
      lv.budget = l.at("budget").get<double>();
      lv.removed_mass = l.at("removed_mass").get<double>();
      lv.coverage = l.at("coverage").get<double>();
      lv.within_budget = l.at("within_budget").get<bool>();
      for (auto c : lv.cells)
        if (c >= grid.cells()) throw ConfigError("decomposition cell index out of range");
      d.levels.push_back(std::move(lv));
    }
    return d;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed decomposition file: {}", e.what()));
  }
}

json rho_to_json(const RhoWeight& rho) {
  std::vector<Complex> v(rho.values.begin(), rho.values.end());
  return json{{"values", values_to_json(v)},
              {"level", rho.level},
              {"M", rho.M},
              {"q_sup", rho.q_sup},
              {"delta", rho.delta},
              {"measure_id", hex_id(rho.measure_id)}};
}

RhoWeight rho_from_json(const json& j, const DiscreteMeasure& mu) {
  RhoWeight rho;
  rho.measure_id = mu.id();
  const auto f = function_from_json(j, mu);
  for (auto c : f.values()) rho.values.push_back(c.real());
  if (j.contains("level")) rho.level = j.at("level").get<std::vector<int>>();
  if (j.contains("M")) rho.M = j.at("M").get<std::vector<double>>();
  if (j.contains("q_sup")) rho.q_sup = j.at("q_sup").get<std::vector<double>>();
  if (j.contains("delta")) rho.delta = j.at("delta").get<std::vector<double>>();
  return rho;
}

json multiplicity_to_json(const MultiplicityReport& rep, const RohlinLayers& layers) {
  json local = json::array();
  for (const auto& l : rep.local) local.push_back({{"z", {{"re", l.z.real()}, {"im", l.z.imag()}}}, {"m", l.m}});
  json lay = json::array();
  for (std::size_t k = 0; k < layers.layers.size(); ++k)
    lay.push_back({{"layer", k + 1}, {"measure", measure_to_json(layers.layers[k])}});
  return json{{"local", std::move(local)},
              {"mp", rep.mp},
              {"infinite", rep.infinite},
              {"continuous_part", nullptr},
              {"layers", std::move(lay)},
              {"assignment", layers.assignment}};
}

std::string format_real(double x) { return json(x).dump(); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw ContractError("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

std::string CsvTable::real(double x) { return fmt::format("{:.17g}", x); }

std::string CsvTable::integer(long long x) { return fmt::format("{}", x); }

}  // namespace cyclab
