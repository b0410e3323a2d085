// Umbrella command line for the cyclab library.
//
// Exit codes: 0 success, 2 a tolerance verdict failed, 3 bad configuration or
// input, 1 anything else.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cyclab/alpha.hpp"
#include "cyclab/approx.hpp"
#include "cyclab/cyclic.hpp"
#include "cyclab/gauss.hpp"
#include "cyclab/io.hpp"
#include "cyclab/pipeline.hpp"
#include "cyclab/rohlin.hpp"

using namespace cyclab;

namespace {

constexpr int kOk = 0;
constexpr int kVerdict = 2;
constexpr int kConfig = 3;

// Flag values from JSON: {"flag": value, "subcommand": {"flag": value}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}\n"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw CLI::ConversionError(fmt::format("config file: {}", e.what()));
    }
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void walk(const json& j, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
      if (v.is_object()) {
        auto p = parents;
        p.push_back(key);
        walk(v, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (v.is_array()) {
        for (const auto& x : v) item.inputs.push_back(scalar(x));
      } else {
        item.inputs.push_back(scalar(v));
      }
      out.push_back(std::move(item));
    }
  }
};

NormSpec norm_from_flag(const std::string& s) {
  if (s == "sup" || s == "inf") return NormSpec::sup();
  try {
    std::size_t used = 0;
    const double p = std::stod(s, &used);
    if (used == s.size() && p > 0.0 && std::isfinite(p)) return NormSpec::lp(p);
  } catch (const std::exception&) {
  }
  throw ConfigError(fmt::format("--norm expects a positive number or 'sup', got '{}'", s));
}

void emit(const std::string& out, const json& j) {
  if (out.empty() || out == "-") std::cout << j.dump(2) << "\n";
  else write_json(out, j);
}

// Parsed flag storage for every subcommand.
struct Flags {
  std::string measure, fn, out, report, weight_fn, target, decomp, grid, norm = "2", preset, experiment, out_dir;
  double p = 2.0, c = 2.0, eps = 0.05, tol = 1e-3, step = 0.01;
  int degree_max = 30, k = 0, levels = 4, degree_cap = 12, degree_step = 1;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> seed_override;
};

int cmd_measure_validate(const Flags& f) {
  try {
    const auto mu = read_measure(f.measure);
    emit("", {{"valid", true}, {"atoms", mu.size()}, {"total_mass", mu.total_mass()}, {"id", fmt::format("{:016x}", mu.id())}});
    return kOk;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    emit("", {{"valid", false}, {"reason", e.what()}});
    return kVerdict;
  }
}

int cmd_measure_pushforward(const Flags& f) {
  const auto mu = read_measure(f.measure);
  const auto phi = read_function(f.fn, mu);
  emit(f.out, measure_to_json(pushforward(mu, phi)));
  return kOk;
}

int cmd_measure_reweight(const Flags& f) {
  const auto mu = read_measure(f.measure);
  const auto h = read_function(f.fn, mu);
  emit(f.out, measure_to_json(reweight_measure(mu, h, f.p)));
  return kOk;
}

int cmd_approx(const Flags& f) {
  const auto mu = read_measure(f.measure);
  const auto target = read_function(f.fn, mu);
  std::optional<SampledFunction> w;
  if (!f.weight_fn.empty()) w = read_function(f.weight_fn, mu);
  const auto degrees = degree_range(f.degree_max);
  const auto prof = density_profile(target, mu, norm_from_flag(f.norm), degrees, w ? &*w : nullptr);
  CsvTable csv({"degree", "residual", "converged"});
  for (const auto& pt : prof)
    csv.add({CsvTable::integer(pt.degree), CsvTable::real(pt.residual), CsvTable::boolean(pt.converged)});
  if (f.report.empty()) std::cout << csv.str();
  else csv.write(f.report);
  return kOk;
}

int cmd_gauss_bound(const Flags& f) {
  const auto r = verify_remainder_sup(f.k, f.step);
  emit("", {{"k", r.k},
            {"bound", r.bound},
            {"cap", r.cap},
            {"empirical_sup", r.empirical_sup},
            {"argmax", r.argmax},
            {"majorant_argmax", r.majorant_argmax},
            {"within_bound", r.within_bound}});
  return r.within_bound && r.bound <= r.cap + 1e-9 ? kOk : kVerdict;
}

int cmd_gauss_approx(const Flags& f) {
  const auto grid = grid_from_json(read_json(f.target));
  if (f.degree_step < 1) throw ConfigError("--degree-step must be positive");
  std::vector<int> degrees;
  for (int d = 0; d <= f.degree_max; d += f.degree_step) degrees.push_back(d);
  const auto fits = gaussian_weighted_sup_profile(grid, f.c, degrees);
  CsvTable csv({"degree", "sup_error", "converged", "lower_bound", "tail_bound"});
  for (const auto& g : fits)
    csv.add({CsvTable::integer(g.degree), CsvTable::real(g.sup_error), CsvTable::boolean(g.converged),
             CsvTable::real(g.lower_bound), CsvTable::real(g.tail_bound)});
  if (f.report.empty()) std::cout << csv.str();
  else csv.write(f.report);
  return kOk;
}

GridSpec parse_grid(const DiscreteMeasure& mu, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) parts.push_back(tok);
  if (parts.size() != 3) throw ConfigError("--grid expects nx,ny,step");
  try {
    return GridSpec::centered_on(mu, std::stoi(parts[0]), std::stoi(parts[1]), std::stod(parts[2]));
  } catch (const std::invalid_argument&) {
    throw ConfigError("--grid expects nx,ny,step");
  }
}

int cmd_alpha_decompose(const Flags& f) {
  const auto mu = read_measure(f.measure);
  const auto d = slit_decomposition(mu, parse_grid(mu, f.grid), f.eps, f.levels);
  emit(f.out, decomposition_to_json(d));
  return kOk;
}

int cmd_cyclic_build_rho(const Flags& f) {
  const auto mu = read_measure(f.measure);
  const auto d = decomposition_from_json(read_json(f.decomp), mu);
  const auto rho = build_rho_pipeline(d, mu, f.degree_cap);
  emit(f.out, rho_to_json(rho));
  return kOk;
}

int cmd_cyclic_test(const Flags& f) {
  const auto mu = read_measure(f.measure);
  std::optional<RhoWeight> rho;
  SampledFunction h = SampledFunction::constant(mu, 1.0);
  if (!f.weight_fn.empty()) {
    const auto j = read_json(f.weight_fn);
    h = function_from_json(j, mu);
    if (j.contains("M")) rho = rho_from_json(j, mu);
  }
  const auto targets = default_targets(mu, f.seed);
  const auto rep = cyclicity_test(mu, h, NormSpec::lp(f.p), targets, f.degree_max, f.tol, rho ? &*rho : nullptr);
  CsvTable csv({"target", "degree", "residual", "relative", "converged"});
  for (const auto& r : rep.rows)
    csv.add({r.target, CsvTable::integer(r.degree), CsvTable::real(r.residual), CsvTable::real(r.relative),
             CsvTable::boolean(r.converged)});
  if (f.report.empty()) std::cout << csv.str();
  else csv.write(f.report);
  std::cerr << fmt::format("cyclic: {}{}{}\n", rep.cyclic ? "yes" : "no",
                           rep.zero_at_atom ? " (weight vanishes at an atom)" : "",
                           rep.bound_violated ? " (|h| exceeds C rho somewhere)" : "");
  return rep.cyclic ? kOk : kVerdict;
}

int cmd_mult_analyze(const Flags& f) {
  const auto mu = read_measure(f.measure);
  const auto phi = read_function(f.fn, mu);
  const auto layers = rohlin_decompose(mu, phi);
  emit(f.out, multiplicity_to_json(local_multiplicity(mu, phi), layers));
  return kOk;
}

int finish_pipeline(ExperimentConfig cfg, const Flags& f) {
  if (f.seed_override) {
    cfg.seed = *f.seed_override;
    cfg.generator.seed = cfg.seed;
  }
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (!f.experiment.empty()) {
    const auto summary = std::filesystem::weakly_canonical(std::filesystem::path(cfg.out_dir) / (cfg.name + ".json"));
    if (summary == std::filesystem::weakly_canonical(f.experiment))
      throw ConfigError("the report would overwrite the experiment file; change its name or out_dir");
  }
  const auto r = run_pipeline(cfg);
  std::cerr << fmt::format("wrote {} and {}\n", r.csv_path.string(), r.json_path.string());
  if (r.exit_code != 0) std::cerr << "error: " << r.error << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclab: weighted polynomial approximation, cyclic vectors and multiplicity on discrete measures"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with flag values, nested by subcommand");
  app.set_version_flag("--version", kVersion);

  Flags f;
  std::function<int()> action;
  auto bind = [&](CLI::App* sub, int (*fn)(const Flags&)) {
    sub->callback([&action, &f, fn] { action = [&f, fn] { return fn(f); }; });
  };

  auto* measure = app.add_subcommand("measure", "Measure files")->require_subcommand(1);
  auto* mv = measure->add_subcommand("validate", "Check a measure file");
  mv->add_option("--measure", f.measure)->required();
  bind(mv, cmd_measure_validate);
  auto* mp = measure->add_subcommand("pushforward", "Image measure phi(mu)");
  mp->add_option("--measure", f.measure)->required();
  mp->add_option("--fn", f.fn, "phi, as a function file")->required();
  mp->add_option("--out", f.out);
  bind(mp, cmd_measure_pushforward);
  auto* mr = measure->add_subcommand("reweight", "Measure |h|^p mu");
  mr->add_option("--measure", f.measure)->required();
  mr->add_option("--fn", f.fn, "h, as a function file")->required();
  mr->add_option("--p", f.p)->check(CLI::PositiveNumber);
  mr->add_option("--out", f.out);
  bind(mr, cmd_measure_reweight);

  auto* approx = app.add_subcommand("approx", "Residual of a target against {p(z) w} by degree");
  approx->add_option("--measure", f.measure)->required();
  approx->add_option("--fn", f.fn, "target function file")->required();
  approx->add_option("--norm", f.norm, "p > 0 or sup");
  approx->add_option("--degree-max", f.degree_max)->check(CLI::NonNegativeNumber);
  approx->add_option("--weight-fn", f.weight_fn, "weight w (default 1)");
  approx->add_option("--report", f.report, "CSV output (default stdout)");
  bind(approx, cmd_approx);

  auto* gauss = app.add_subcommand("gauss", "Gaussian-weight approximation")->require_subcommand(1);
  auto* gb = gauss->add_subcommand("bound", "Taylor remainder bound for e^{-t}");
  gb->add_option("--k", f.k)->required()->check(CLI::NonNegativeNumber);
  gb->add_option("--step", f.step, "grid step in t")->check(CLI::PositiveNumber);
  bind(gb, cmd_gauss_bound);
  auto* ga = gauss->add_subcommand("approx", "Sup-norm profile of p e^{-c|x|^2} against a grid target");
  ga->add_option("--target", f.target, "grid file")->required();
  ga->add_option("--c", f.c)->check(CLI::PositiveNumber);
  ga->add_option("--degree-max", f.degree_max)->check(CLI::NonNegativeNumber);
  ga->add_option("--degree-step", f.degree_step);
  ga->add_option("--report", f.report);
  bind(ga, cmd_gauss_approx);

  auto* alpha = app.add_subcommand("alpha", "Alpha-set decompositions")->require_subcommand(1);
  auto* ad = alpha->add_subcommand("decompose", "Slit decomposition on a cell grid");
  ad->add_option("--measure", f.measure)->required();
  ad->add_option("--grid", f.grid, "nx,ny,step (centered on the atoms)")->required();
  ad->add_option("--eps", f.eps)->check(CLI::PositiveNumber);
  ad->add_option("--levels", f.levels)->check(CLI::PositiveNumber);
  ad->add_option("--out", f.out);
  bind(ad, cmd_alpha_decompose);

  auto* cyclic = app.add_subcommand("cyclic", "Cyclic vectors")->require_subcommand(1);
  auto* cb = cyclic->add_subcommand("build-rho", "Weight rho from a decomposition");
  cb->add_option("--decomp", f.decomp)->required();
  cb->add_option("--measure", f.measure)->required();
  cb->add_option("--degree-cap", f.degree_cap)->check(CLI::PositiveNumber);
  cb->add_option("--out", f.out);
  bind(cb, cmd_cyclic_build_rho);
  auto* ct = cyclic->add_subcommand("test", "Cyclicity test of a weight; exit 2 when not cyclic");
  ct->add_option("--measure", f.measure)->required();
  ct->add_option("--weight-fn", f.weight_fn, "weight h (default 1); a rho file enables the |h| <= rho check");
  ct->add_option("--p", f.p)->check(CLI::PositiveNumber);
  ct->add_option("--degree-max", f.degree_max)->check(CLI::NonNegativeNumber);
  ct->add_option("--tol", f.tol)->check(CLI::PositiveNumber);
  ct->add_option("--seed", f.seed);
  ct->add_option("--report", f.report);
  bind(ct, cmd_cyclic_test);

  auto* mult = app.add_subcommand("mult", "Multiplicity")->require_subcommand(1);
  auto* ma = mult->add_subcommand("analyze", "Local multiplicity and layers of phi");
  ma->add_option("--measure", f.measure)->required();
  ma->add_option("--fn", f.fn, "phi")->required();
  ma->add_option("--out", f.out);
  bind(ma, cmd_mult_analyze);

  auto* preset = app.add_subcommand("preset", "Run a named experiment");
  preset->add_option("name", f.preset)->required()->check(CLI::IsMember(preset_names()));
  preset->add_option("--out-dir", f.out_dir);
  preset->add_option("--seed", f.seed_override);
  preset->callback([&] { action = [&] { return finish_pipeline(preset_config(f.preset), f); }; });

  auto* run = app.add_subcommand("run", "Run an experiment file");
  run->add_option("--experiment", f.experiment, "experiment JSON (name, seed, generator, stages, out_dir)")->required();
  run->add_option("--out-dir", f.out_dir);
  run->add_option("--seed", f.seed_override);
  run->callback([&] {
    action = [&] { return finish_pipeline(ExperimentConfig::from_json(read_json(f.experiment)), f); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  try {
    return action ? action() : kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
