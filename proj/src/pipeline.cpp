#include "cyclab/pipeline.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "cyclab/alpha.hpp"
#include "cyclab/approx.hpp"
#include "cyclab/cyclic.hpp"
#include "cyclab/gauss.hpp"
#include "cyclab/io.hpp"
#include "cyclab/ortho_basis.hpp"
#include "cyclab/rohlin.hpp"

namespace cyclab {

namespace {

const std::vector<std::string> kOps = {"profile", "alpha", "rho", "cyclic", "stirling", "gauss", "mult"};

NormSpec parse_norm(const std::string& s) {
  if (s == "sup" || s == "inf") return NormSpec::sup();
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("bad norm '{}': expected a positive number or 'sup'", s));
  }
  if (used != s.size() || !(p > 0.0) || !std::isfinite(p)) throw ConfigError(fmt::format("bad norm '{}'", s));
  return NormSpec::lp(p);
}

std::string norm_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return format_real(v.get<double>());
  throw ConfigError("norm must be a number or \"sup\"");
}

template <class T>
void take(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(fmt::format("config field '{}' has the wrong type", key));
  }
}

nlohmann::json stage_to_json(const StageConfig& s) {
  return {{"op", s.op},          {"target", s.target}, {"norm", s.norm},       {"weight", s.weight},
          {"degrees", s.degrees}, {"degree_max", s.degree_max},               {"tol", s.tol},
          {"grid_nx", s.grid_nx}, {"grid_ny", s.grid_ny}, {"grid_step", s.grid_step},
          {"eps", s.eps},        {"levels", s.levels}, {"degree_cap", s.degree_cap},
          {"k_max", s.k_max},    {"step", s.step},     {"c", s.c},             {"half", s.half},
          {"power", s.power},    {"trials", s.trials}};
}

StageConfig stage_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("each stage must be an object");
  StageConfig s;
  take(j, "op", s.op);
  if (std::find(kOps.begin(), kOps.end(), s.op) == kOps.end())
    throw ConfigError(fmt::format("unknown stage op '{}'", s.op));
  take(j, "target", s.target);
  if (j.contains("norm")) s.norm = norm_text(j.at("norm"));
  parse_norm(s.norm);
  take(j, "weight", s.weight);
  if (s.weight != "one" && s.weight != "rho") throw ConfigError("stage weight must be 'one' or 'rho'");
  take(j, "degrees", s.degrees);
  take(j, "degree_max", s.degree_max);
  take(j, "tol", s.tol);
  take(j, "grid_nx", s.grid_nx);
  take(j, "grid_ny", s.grid_ny);
  take(j, "grid_step", s.grid_step);
  take(j, "eps", s.eps);
  take(j, "levels", s.levels);
  take(j, "degree_cap", s.degree_cap);
  take(j, "k_max", s.k_max);
  take(j, "step", s.step);
  take(j, "c", s.c);
  take(j, "half", s.half);
  take(j, "power", s.power);
  take(j, "trials", s.trials);
  if (s.degree_max < 0 || s.k_max < 0 || s.levels < 1 || s.degree_cap < 1 || s.trials < 0 || s.power < 1)
    throw ConfigError(fmt::format("stage '{}': counts out of range", s.op));
  for (int d : s.degrees)
    if (d < 0) throw ConfigError("degrees must be nonnegative");
  if (!(s.step > 0.0) || !(s.half > 0.0) || !(s.eps > 0.0) || !(s.tol > 0.0) || s.grid_step < 0.0)
    throw ConfigError(fmt::format("stage '{}': step, half, eps and tol must be positive", s.op));
  return s;
}

nlohmann::json generator_to_json(const GeneratorSpec& g, bool has_measure) {
  if (!has_measure) return {{"kind", "none"}};
  return {{"kind", g.kind}, {"step", g.step}, {"radius", g.radius}, {"n", g.n},   {"a", g.a},
          {"b", g.b},       {"t0", g.t0},     {"t1", g.t1},         {"half", g.half},
          {"normalized", g.normalized}, {"seed", g.seed}};
}

std::string hex_id(std::uint64_t id) { return fmt::format("{:016x}", id); }

SampledFunction make_target(const DiscreteMeasure& mu, const std::string& name) {
  if (name == "conj") return SampledFunction::from(mu, [](Complex z) { return std::conj(z); });
  if (name == "z") return SampledFunction::from(mu, [](Complex z) { return z; });
  if (name == "abs2exp")
    return SampledFunction::from(mu, [](Complex z) { return std::norm(z) * std::exp(-std::abs(z)); });
  if (name.rfind("indicator:", 0) == 0) {
    std::size_t i = 0;
    try {
      i = std::stoul(name.substr(10));
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("bad target '{}'", name));
    }
    if (i >= mu.size()) throw ConfigError(fmt::format("target atom {} out of range", i));
    return SampledFunction::indicator(mu, i);
  }
  throw ConfigError(fmt::format("unknown target '{}'", name));
}

std::vector<int> schedule(const StageConfig& s) {
  return s.degrees.empty() ? degree_range(s.degree_max) : s.degrees;
}

GridSpec auto_grid(const DiscreteMeasure& mu, const StageConfig& s, const GeneratorSpec& g) {
  double xmin = mu.point(0).real(), xmax = xmin, ymin = mu.point(0).imag(), ymax = ymin;
  for (std::size_t i = 1; i < mu.size(); ++i) {
    xmin = std::min(xmin, mu.point(i).real());
    xmax = std::max(xmax, mu.point(i).real());
    ymin = std::min(ymin, mu.point(i).imag());
    ymax = std::max(ymax, mu.point(i).imag());
  }
  double step = s.grid_step;
  if (step == 0.0) {
    step = g.kind == "disc" ? g.step : std::max({xmax - xmin, ymax - ymin, 1e-3}) / 64.0;
  }
  auto fit = [&](double extent) { return static_cast<int>(std::floor(extent / step + 1e-9)) + 1; };
  const int nx = s.grid_nx > 0 ? s.grid_nx : fit(xmax - xmin);
  const int ny = s.grid_ny > 0 ? s.grid_ny : fit(ymax - ymin);
  return GridSpec::centered_on(mu, nx, ny, step);
}

struct RunState {
  explicit RunState(const ExperimentConfig& c) : cfg(c) {}
  const ExperimentConfig& cfg;
  CsvTable csv{{"stage", "series", "x", "quantity", "value"}};
  std::optional<DiscreteMeasure> mu;
  std::optional<AlphaDecomposition> decomp;
  std::optional<RhoWeight> rho;

  void row(const std::string& stage, const std::string& series, const std::string& x, const std::string& q,
           const std::string& v) {
    csv.add({stage, series, x, q, v});
  }
  void real(const std::string& stage, const std::string& series, long long x, const std::string& q, double v) {
    row(stage, series, CsvTable::integer(x), q, CsvTable::real(v));
  }
  const DiscreteMeasure& measure(const std::string& op) const {
    if (!mu) throw ConfigError(fmt::format("stage '{}' needs a measure generator", op));
    return *mu;
  }
};

nlohmann::json run_profile(RunState& st, const StageConfig& s) {
  const auto& mu = st.measure(s.op);
  const auto target = make_target(mu, s.target);
  std::optional<SampledFunction> w;
  if (s.weight == "rho") {
    if (!st.rho) throw ConfigError("profile with weight 'rho' needs an earlier rho stage");
    w = st.rho->as_function();
  }
  const auto degrees = schedule(s);
  const auto prof = density_profile(target, mu, parse_norm(s.norm), degrees, w ? &*w : nullptr);
  const std::string series = fmt::format("{}|{}|{}", s.target, s.norm, s.weight);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : prof) {
    st.real("profile", series, p.degree, "residual", p.residual);
    st.real("profile", series, p.degree, "converged", p.converged ? 1.0 : 0.0);
    pts.push_back({{"degree", p.degree}, {"residual", p.residual}, {"converged", p.converged}, {"rank", p.rank}});
  }
  return {{"series", series}, {"points", pts}};
}

nlohmann::json run_alpha(RunState& st, const StageConfig& s) {
  const auto& mu = st.measure(s.op);
  const auto grid = auto_grid(mu, s, st.cfg.generator);
  st.decomp = slit_decomposition(mu, grid, s.eps, s.levels);
  const auto& d = *st.decomp;
  nlohmann::json lv = nlohmann::json::array();
  for (int n = 1; n <= d.n_levels(); ++n) {
    const auto& L = d.level(n);
    const auto cert = check_complement_connected(d, n);
    const int square = largest_full_square(d.grid, L.cells);
    const std::string x = CsvTable::integer(n);
    st.row("alpha", "level", x, "pitch", CsvTable::integer(L.pitch));
    st.row("alpha", "level", x, "removed_mass", CsvTable::real(L.removed_mass));
    st.row("alpha", "level", x, "coverage", CsvTable::real(L.coverage));
    st.row("alpha", "level", x, "components", CsvTable::integer(cert.components));
    st.row("alpha", "level", x, "largest_square", CsvTable::integer(square));
    lv.push_back({{"level", n},
                  {"pitch", L.pitch},
                  {"budget", L.budget},
                  {"removed_mass", L.removed_mass},
                  {"coverage", L.coverage},
                  {"within_budget", L.within_budget},
                  {"complement_connected", cert.connected},
                  {"largest_square", square}});
  }
  return {{"grid", {{"nx", grid.nx}, {"ny", grid.ny}, {"step", grid.step}}},
          {"never_covered_mass", d.never_covered_mass()},
          {"levels", lv}};
}

nlohmann::json run_rho(RunState& st, const StageConfig& s) {
  const auto& mu = st.measure(s.op);
  if (!st.decomp) throw ConfigError("rho stage needs an earlier alpha stage");
  std::vector<ConjugateFit> fits;
  st.rho = build_rho_pipeline(*st.decomp, mu, s.degree_cap, &fits);
  nlohmann::json lv = nlohmann::json::array();
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const auto n = static_cast<long long>(k + 1);
    const auto& f = fits[k];
    st.real("rho", "level", n, "M", st.rho->M[k]);
    st.real("rho", "level", n, "q_sup", st.rho->q_sup[k]);
    st.real("rho", "level", n, "delta", f.delta);
    st.real("rho", "level", n, "sup_err", f.sup_err);
    st.real("rho", "level", n, "target", f.target);
    st.real("rho", "level", n, "degree", f.degree);
    lv.push_back({{"level", n},
                  {"M", st.rho->M[k]},
                  {"q_sup", st.rho->q_sup[k]},
                  {"delta", f.delta},
                  {"sup_err", f.sup_err},
                  {"target", f.target},
                  {"met", f.met},
                  {"degree", f.degree}});
  }
  double lo = 1.0, hi = 0.0;
  for (double v : st.rho->values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {{"levels", lv}, {"rho_min", lo}, {"rho_max", hi}};
}

nlohmann::json run_cyclic(RunState& st, const StageConfig& s) {
  const auto& mu = st.measure(s.op);
  SampledFunction h = SampledFunction::constant(mu, 1.0);
  if (s.weight == "rho") {
    if (!st.rho) throw ConfigError("cyclic with weight 'rho' needs an earlier rho stage");
    h = st.rho->as_function();
  }
  const auto targets = default_targets(mu, st.cfg.seed);
  const auto rep = cyclicity_test(mu, h, parse_norm(s.norm), targets, s.degree_max, s.tol,
                                  s.weight == "rho" ? &*st.rho : nullptr);
  for (const auto& r : rep.rows) {
    st.real("cyclic", r.target, r.degree, "residual", r.residual);
    st.real("cyclic", r.target, r.degree, "relative", r.relative);
  }
  nlohmann::json fin = nlohmann::json::object();
  for (std::size_t k = 0; k < targets.size(); ++k) fin[targets[k].name] = rep.final_relative[k];
  return {{"weight", s.weight},
          {"cyclic", rep.cyclic},
          {"zero_at_atom", rep.zero_at_atom},
          {"bound_violated", rep.bound_violated},
          {"final_relative", fin}};
}

nlohmann::json run_stirling(RunState& st, const StageConfig& s) {
  bool all = true;
  double worst_shift = 0.0;
  for (int k = 0; k <= s.k_max; ++k) {
    const auto r = verify_remainder_sup(k, s.step);
    st.real("stirling", "k", k, "empirical_sup", r.empirical_sup);
    st.real("stirling", "k", k, "bound", r.bound);
    st.real("stirling", "k", k, "cap", r.cap);
    st.real("stirling", "k", k, "argmax", r.argmax);
    st.real("stirling", "k", k, "majorant_argmax", r.majorant_argmax);
    all = all && r.within_bound && r.bound <= r.cap + 1e-9;
    worst_shift = std::max(worst_shift, std::abs(r.majorant_argmax - (k + 1)));
  }
  return {{"k_max", s.k_max}, {"all_within_bound", all}, {"max_majorant_argmax_shift", worst_shift}};
}

nlohmann::json run_gauss(RunState& st, const StageConfig& s) {
  const auto grid = sample_grid(2, s.half, s.step, [](const std::vector<double>& x) {
    return std::max(0.0, 1.0 - std::hypot(x[0], x[1]));
  });
  const auto degrees = schedule(s);
  const auto fits = gaussian_weighted_sup_profile(grid, s.c, degrees);
  nlohmann::json pts = nlohmann::json::array();
  double best = INFINITY;
  for (const auto& f : fits) {
    st.real("gauss", "hat", f.degree, "sup_error", f.sup_error);
    st.real("gauss", "hat", f.degree, "lower_bound", f.lower_bound);
    best = std::min(best, f.sup_error);
    pts.push_back({{"degree", f.degree}, {"sup_error", f.sup_error}, {"converged", f.converged},
                   {"lower_bound", f.lower_bound}, {"rank", f.rank}});
  }
  return {{"grid_points", grid.size()}, {"best_sup_error", best}, {"points", pts}};
}

nlohmann::json run_mult(RunState& st, const StageConfig& s) {
  const auto& mu = st.measure(s.op);
  const int m = s.power;
  const auto phi = SampledFunction::from(mu, [m](Complex z) { return std::pow(z, m); });
  const auto layers = rohlin_decompose(mu, phi);
  const auto rep = local_multiplicity(mu, phi);
  const auto gens = build_cyclic_set(mu, phi, layers);
  const auto check = verify_cyclic_set(mu, phi, gens, layers);
  for (std::size_t k = 0; k < layers.count(); ++k)
    st.real("mult", "layer", static_cast<long long>(k + 1), "size", static_cast<double>(layers.layers[k].size()));
  st.real("mult", "cyclic_set", check.degree, "max_residual", check.max_residual);
  nlohmann::json ins = nlohmann::json::array();
  for (int d = 1; static_cast<std::size_t>(d) < rep.mp; ++d) {
    const auto r = generator_insufficiency_test(mu, phi, d, s.trials, st.cfg.seed);
    st.real("mult", "insufficiency", d, "estimate", r.estimate);
    st.real("mult", "insufficiency", d, "geometry_bound", r.geometry_bound);
    ins.push_back({{"d", d}, {"estimate", r.estimate}, {"geometry_bound", r.geometry_bound}, {"reason", r.reason}});
  }
  return {{"phi", fmt::format("z^{}", m)},
          {"mp", rep.mp},
          {"fibers", rep.local.size()},
          {"layers", layers.count()},
          {"cyclic_set_degree", check.degree},
          {"cyclic_set_residual", check.max_residual},
          {"cyclic_set_exact", check.exact},
          {"insufficiency", ins}};
}

StageConfig stage(const std::string& op) {
  StageConfig s;
  s.op = op;
  return s;
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages) st.push_back(stage_to_json(s));
  return {{"name", name}, {"seed", seed}, {"generator", generator_to_json(generator, has_measure)},
          {"stages", st}, {"out_dir", out_dir}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  take(j, "name", c.name);
  if (c.name.empty() || c.name.find('/') != std::string::npos) throw ConfigError("config name must be a plain file stem");
  take(j, "seed", c.seed);
  take(j, "out_dir", c.out_dir);
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    auto& s = c.generator;
    take(g, "kind", s.kind);
    c.has_measure = s.kind != "none";
    take(g, "step", s.step);
    take(g, "radius", s.radius);
    take(g, "n", s.n);
    take(g, "a", s.a);
    take(g, "b", s.b);
    take(g, "t0", s.t0);
    take(g, "t1", s.t1);
    take(g, "half", s.half);
    take(g, "normalized", s.normalized);
    s.seed = c.seed;
    take(g, "seed", s.seed);
    // Cheap checks up front so a bad file fails before any stage runs.
    static const std::vector<std::string> kinds = {"none", "disc", "circle", "segment", "spiral", "random"};
    if (std::find(kinds.begin(), kinds.end(), s.kind) == kinds.end())
      throw ConfigError(fmt::format("unknown generator kind '{}'", s.kind));
    if (s.n < 1) throw ConfigError("generator n must be positive");
    if (!(s.step > 0.0) || !(s.radius > 0.0) || !(s.half > 0.0))
      throw ConfigError("generator step, radius and half must be positive");
    if (!(s.b > s.a) || !(s.t1 > s.t0)) throw ConfigError("generator ranges need a < b and t0 < t1");
  }
  if (j.contains("stages")) {
    if (!j.at("stages").is_array()) throw ConfigError("'stages' must be an array");
    for (const auto& s : j.at("stages")) c.stages.push_back(stage_from_json(s));
  }
  return c;
}

std::vector<std::string> preset_names() { return {"bergman", "circle", "stirling", "spiral", "multiplicity-demo"}; }

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "bergman") {
    c.generator.kind = "disc";
    c.generator.step = 1.0 / 64.0;
    auto s = stage("profile");
    s.degree_max = 30;
    c.stages = {s};
  } else if (name == "circle") {
    c.generator.kind = "circle";
    c.generator.n = 512;
    auto p = stage("profile");
    p.degree_max = 40;
    auto cy = stage("cyclic");
    cy.degree_max = 30;
    c.stages = {p, cy};
  } else if (name == "stirling") {
    c.has_measure = false;
    c.generator.kind = "none";
    c.stages = {stage("stirling")};
  } else if (name == "spiral") {
    c.generator.kind = "spiral";
    c.generator.n = 400;
    c.generator.normalized = true;
    auto l2 = stage("profile");
    l2.degree_max = 30;
    auto sup = stage("profile");
    sup.norm = "sup";
    sup.degree_max = 20;
    c.stages = {l2, sup};
  } else if (name == "multiplicity-demo") {
    c.generator.kind = "circle";
    c.generator.n = 24;
    auto m = stage("mult");
    m.power = 3;
    c.stages = {m};
  } else {
    throw ConfigError(fmt::format("unknown preset '{}'", name));
  }
  c.generator.seed = c.seed;
  return c;
}

nlohmann::json build_info() {
  return {{"tool", "cyclab"},
          {"version", kVersion},
          {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
          {"fmt", FMT_VERSION},
          {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                        NLOHMANN_JSON_VERSION_PATCH)}};
}

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
  PipelineResult out;
  const std::filesystem::path dir(cfg.out_dir);
  out.csv_path = dir / (cfg.name + ".csv");
  out.json_path = dir / (cfg.name + ".json");
  RunState st(cfg);
  nlohmann::json stages = nlohmann::json::array();
  const IrlsOptions irls;
  const LawsonOptions lawson;
  nlohmann::json summary = {
      {"build", build_info()},
      {"seed", cfg.seed},
      {"tolerances",
       {{"merge", kDefaultMergeTolerance},
        {"rank", kRankTolerance},
        {"irls_change", irls.change_tol},
        {"irls_max_iter", irls.max_iter},
        {"lawson_gap", lawson.gap_tol},
        {"lawson_max_iter", lawson.max_iter},
        {"stage_tol", [&] {
           nlohmann::json t = nlohmann::json::array();
           for (const auto& s : cfg.stages) t.push_back(s.tol);
           return t;
         }()}}},
      {"config", cfg.to_json()}};
  try {
    if (cfg.has_measure) {
      st.mu = generate_measure(cfg.generator);
      summary["measure"] = {{"atoms", st.mu->size()}, {"total_mass", st.mu->total_mass()}, {"id", hex_id(st.mu->id())}};
    }
    for (const auto& s : cfg.stages) {
      nlohmann::json r;
      if (s.op == "profile") r = run_profile(st, s);
      else if (s.op == "alpha") r = run_alpha(st, s);
      else if (s.op == "rho") r = run_rho(st, s);
      else if (s.op == "cyclic") r = run_cyclic(st, s);
      else if (s.op == "stirling") r = run_stirling(st, s);
      else if (s.op == "gauss") r = run_gauss(st, s);
      else r = run_mult(st, s);
      r["op"] = s.op;
      stages.push_back(std::move(r));
    }
    summary["status"] = "ok";
  } catch (const ConfigError& e) {
    out.exit_code = 3;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.error = e.what();
  }
  if (out.exit_code != 0) {
    summary["status"] = "error";
    summary["error"] = out.error;
  }
  summary["stages"] = std::move(stages);
  out.summary = summary;
  st.csv.write(out.csv_path);
  write_json(out.json_path, summary);
  return out;
}

}  // namespace cyclab
