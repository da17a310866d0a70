#include "cbo/harness.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace cbo::harness {

using nlohmann::json;

namespace {

std::vector<double> as_vector(const json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError(key + ": expected a number or an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError(key + ": expected numeric entries");
    out.push_back(v.get<double>());
  }
  return out;
}

InitSpec init_from_json(const json& j) {
  if (!j.contains("kind")) throw ConfigError("init.kind: missing");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform-box") {
    if (!j.contains("lo") || !j.contains("hi")) throw ConfigError("init: uniform-box needs lo and hi");
    return InitSpec::uniform_box(as_vector(j.at("lo"), "init.lo"), as_vector(j.at("hi"), "init.hi"));
  }
  if (kind == "gaussian") {
    if (!j.contains("mean") || !j.contains("cov_diag")) {
      throw ConfigError("init: gaussian needs mean and cov_diag");
    }
    return InitSpec::gaussian(as_vector(j.at("mean"), "init.mean"),
                              as_vector(j.at("cov_diag"), "init.cov_diag"));
  }
  if (kind == "dirac") {
    if (!j.contains("point")) throw ConfigError("init: dirac needs point");
    return InitSpec::dirac(as_vector(j.at("point"), "init.point"));
  }
  throw ConfigError("init.kind: unknown kind '" + kind + "'");
}

json init_to_json(const InitSpec& s) {
  json j;
  switch (s.kind) {
    case InitSpec::Kind::UniformBox:
      j["kind"] = "uniform-box";
      j["lo"] = s.a;
      j["hi"] = s.b;
      break;
    case InitSpec::Kind::Gaussian:
      j["kind"] = "gaussian";
      j["mean"] = s.a;
      j["cov_diag"] = s.b;
      break;
    case InitSpec::Kind::Dirac:
      j["kind"] = "dirac";
      j["point"] = s.a;
      break;
  }
  return j;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xCBF29CE484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("objective")) throw ConfigError("objective: missing section");
  const auto& jo = j.at("objective");
  if (!jo.contains("name")) throw ConfigError("objective.name: missing");
  cfg.objective_name = jo.at("name").get<std::string>();
  cfg.dim = jo.value("dim", 1);
  if (jo.contains("shift")) cfg.shift = as_vector(jo.at("shift"), "objective.shift");
  if (jo.contains("center")) cfg.center = as_vector(jo.at("center"), "objective.center");

  if (!j.contains("init")) throw ConfigError("init: missing section");
  cfg.init = init_from_json(j.at("init"));

  if (!j.contains("params")) throw ConfigError("params: missing section");
  const auto& jp = j.at("params");
  for (const char* field : {"lambda", "sigma", "alpha", "kappa", "delta", "dt", "steps"}) {
    if (!jp.contains(field)) throw ConfigError(std::string("params.") + field + ": missing");
  }
  cfg.params.lambda = jp.at("lambda").get<double>();
  cfg.params.sigma = jp.at("sigma").get<double>();
  cfg.params.alpha = jp.at("alpha").get<double>();
  cfg.params.kappa = jp.at("kappa").get<double>();
  cfg.params.delta = jp.at("delta").get<double>();
  cfg.params.dt = jp.at("dt").get<double>();
  cfg.params.n_steps = jp.at("steps").get<std::int64_t>();

  cfg.particles = j.value("particles", std::int64_t{100});
  cfg.runs = j.value("runs", 1);
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.tolerance = j.value("tolerance", 0.05);
  cfg.output = j.value("output", std::string{});

  if (j.contains("record")) {
    const auto& jr = j.at("record");
    cfg.record.consensus = jr.value("consensus", false);
    cfg.record.second_moment = jr.value("second_moment", false);
    cfg.record.mean = jr.value("mean", false);
    cfg.record.log_error = jr.value("log_error", false);
    cfg.record.stride = jr.value("stride", std::int64_t{1});
  }
  if (j.contains("growth")) {
    const auto& jg = j.at("growth");
    cfg.growth_override = GrowthBounds{jg.at("c_ell").get<double>(), jg.at("c_u").get<double>(),
                                       jg.at("M").get<double>()};
  }
  if (j.contains("L_m")) cfg.L_m = j.at("L_m").get<double>();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["objective"]["name"] = objective_name;
  j["objective"]["dim"] = dim;
  if (!shift.empty()) j["objective"]["shift"] = shift;
  if (!center.empty()) j["objective"]["center"] = center;
  j["init"] = init_to_json(init);
  j["params"] = {{"lambda", params.lambda}, {"sigma", params.sigma}, {"alpha", params.alpha},
                 {"kappa", params.kappa},   {"delta", params.delta}, {"dt", params.dt},
                 {"steps", params.n_steps}};
  j["particles"] = particles;
  j["runs"] = runs;
  j["seed"] = seed;
  j["tolerance"] = tolerance;
  j["record"] = {{"consensus", record.consensus},
                 {"second_moment", record.second_moment},
                 {"mean", record.mean},
                 {"log_error", record.log_error},
                 {"stride", record.stride}};
  if (growth_override) {
    j["growth"] = {{"c_ell", growth_override->c_ell}, {"c_u", growth_override->c_u},
                   {"M", growth_override->M}};
  }
  if (L_m) j["L_m"] = *L_m;
  return j;
}

Objective ExperimentConfig::make_objective() const {
  if (objective_name == "rastrigin1d") {
    return rastrigin_1d(shift.empty() ? 1.0 : shift[0]);
  }
  if (objective_name == "rastrigin") return rastrigin_nd(dim, shift);
  if (objective_name == "ackley") return ackley_shifted(dim, shift);
  if (objective_name == "biminimizer") return biminimizer_2d();
  if (objective_name == "quadratic") return quadratic(dim, center);
  throw ConfigError("objective.name: unknown objective '" + objective_name + "'");
}

void ExperimentConfig::validate() const {
  const Objective obj = make_objective();
  init.validate(obj.dim);
  params.validate();
  if (particles < 1) throw ConfigError("particles: must be >= 1");
  if (runs < 1) throw ConfigError("runs: must be >= 1");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance: must be > 0");
  if (record.stride < 1) throw ConfigError("record.stride: must be >= 1");
}

std::string ExperimentConfig::hash(std::uint64_t run_seed) const {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  std::uint64_t h = fnv1a(to_json().dump());
  h = fnv1a(std::to_string(run_seed), h);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Objective obj = cfg.make_objective();

  ExperimentSummary summary;
  if (obj.growth || cfg.growth_override) {
    const GrowthBounds g = cfg.growth_override ? *cfg.growth_override : *obj.growth;
    summary.validation = paramcheck::validate_all(
        cfg.params, {g.c_ell, g.c_u, g.M, std::max(cfg.params.alpha, 1e-12)}, obj.dim, cfg.L_m);
  } else {
    summary.validation = paramcheck::skipped_report("objective has no growth constants");
  }

  summary.records.resize(static_cast<std::size_t>(cfg.runs));
  const int runs = cfg.runs;
  std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(dynamic) if (runs > 1)
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
    RunRecord rec;
    try {
      rec = run(cfg.init, cfg.params, obj, cfg.particles, seed, cfg.record, cfg.tolerance);
    } catch (const DivergenceError& e) {
      rec = RunRecord{};
      rec.seed = seed;
      rec.diverged = true;
      rec.diverged_step = e.step();
      rec.success = false;
    } catch (...) {
      // Anything else must not escape the parallel region; rethrown below.
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
    rec.config_hash = cfg.hash(seed);
    summary.records[static_cast<std::size_t>(r)] = std::move(rec);
  }
  if (first_error) std::rethrow_exception(first_error);

  int successes = 0;
  int completed = 0;
  double dist_sum = 0.0;
  for (const auto& rec : summary.records) {
    if (rec.diverged) {
      ++summary.divergences;
      continue;
    }
    ++completed;
    if (rec.success.value_or(false)) ++successes;
    if (rec.final_dist) dist_sum += *rec.final_dist;
  }
  summary.success_rate = static_cast<double>(successes) / static_cast<double>(cfg.runs);
  summary.mean_final_dist = completed > 0 ? dist_sum / completed : std::nan("");
  return summary;
}

SweepSpec SweepSpec::from_json(const json& j) {
  SweepSpec spec;
  spec.base = ExperimentConfig::from_json(j);
  if (!j.contains("sweep")) throw ConfigError("sweep: missing section");
  const auto& js = j.at("sweep");
  if (!js.contains("kappa") || !js.contains("delta")) {
    throw ConfigError("sweep: needs kappa and delta axes");
  }
  spec.kappas = as_vector(js.at("kappa"), "sweep.kappa");
  spec.deltas = as_vector(js.at("delta"), "sweep.delta");
  if (js.contains("particles")) {
    for (const auto& v : js.at("particles")) spec.particle_counts.push_back(v.get<std::int64_t>());
  }
  spec.runs_per_cell = js.value("runs", 30);
  if (spec.kappas.empty() || spec.deltas.empty()) throw ConfigError("sweep: axes must be nonempty");
  if (spec.runs_per_cell < 1) throw ConfigError("sweep.runs: must be >= 1");
  return spec;
}

SweepSpec SweepSpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  return from_json(j);
}

SweepTable run_sweep(const SweepSpec& spec) {
  std::vector<std::int64_t> particle_axis = spec.particle_counts;
  const bool has_particles_axis = !particle_axis.empty();
  if (!has_particles_axis) particle_axis.push_back(spec.base.particles);

  // Cell list in fixed (particles, delta, kappa) order; each cell gets a
  // disjoint seed range derived from (base seed, cell index).
  struct CellJob {
    std::int64_t particles;
    double delta;
    double kappa;
    std::int64_t index;
  };
  std::vector<CellJob> jobs;
  std::int64_t index = 0;
  for (std::int64_t np : particle_axis) {
    for (double dl : spec.deltas) {
      for (double kp : spec.kappas) {
        jobs.push_back({np, dl, kp, index++});
      }
    }
  }

  std::vector<SweepCell> cells(jobs.size());
  const auto n_jobs = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < n_jobs; ++c) {
    const CellJob& job = jobs[static_cast<std::size_t>(c)];
    ExperimentConfig cfg = spec.base;
    cfg.particles = job.particles;
    cfg.params.delta = job.delta;
    cfg.params.kappa = job.kappa;
    cfg.runs = spec.runs_per_cell;
    cfg.seed = spec.base.seed + static_cast<std::uint64_t>(job.index) *
                                     static_cast<std::uint64_t>(spec.runs_per_cell);
    cfg.record = RecordSpec{};
    const ExperimentSummary s = run_experiment(cfg);
    cells[static_cast<std::size_t>(c)] =
        {job.delta, job.kappa, job.particles, s.success_rate, spec.runs_per_cell, s.divergences};
  }

  SweepTable table;
  table.cells = std::move(cells);
  table.particles_axis = has_particles_axis;
  return table;
}

void emit_csv(const SweepTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << (table.particles_axis ? "delta,kappa,particles,rate,runs,divergences\n"
                               : "delta,kappa,rate,runs,divergences\n");
  for (const auto& c : table.cells) {
    out << format_double(c.delta) << ',' << format_double(c.kappa) << ',';
    if (table.particles_axis) out << c.particles << ',';
    out << format_double(c.rate) << ',' << c.runs << ',' << c.divergences << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void emit_csv(const diagnostics::TrajectorySeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const bool scalar = series.dim() == 1;
  out << (scalar ? "time,value\n" : "time,value,axis\n");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (scalar) {
      out << format_double(series.times[i]) << ',' << format_double(series.values[i][0]) << '\n';
    } else {
      for (std::size_t k = 0; k < series.values[i].size(); ++k) {
        out << format_double(series.times[i]) << ',' << format_double(series.values[i][k]) << ','
            << k << '\n';
      }
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

void emit_csv(const ExperimentSummary& summary, int dim, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "seed,success,diverged,diverged_step,final_dist,ess,config_hash";
  for (int k = 0; k < dim; ++k) out << ",m" << k;
  out << '\n';
  for (const auto& r : summary.records) {
    out << r.seed << ',' << (r.success.value_or(false) ? 1 : 0) << ',' << (r.diverged ? 1 : 0)
        << ',' << r.diverged_step << ','
        << (r.final_dist ? format_double(*r.final_dist) : std::string{}) << ','
        << format_double(r.final_ess) << ',' << r.config_hash;
    for (int k = 0; k < dim; ++k) {
      out << ',';
      if (!r.diverged) out << format_double(r.final_consensus[static_cast<std::size_t>(k)]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

SweepTable parse_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv: " + path);
  const bool particles_axis = line.find("particles") != std::string::npos;

  SweepTable table;
  table.particles_axis = particles_axis;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    const std::size_t expect = particles_axis ? 6 : 5;
    if (fields.size() != expect) throw IoError("malformed sweep csv row: " + line);
    SweepCell cell;
    std::size_t at = 0;
    cell.delta = std::stod(fields[at++]);
    cell.kappa = std::stod(fields[at++]);
    cell.particles = particles_axis ? std::stoll(fields[at++]) : 0;
    cell.rate = std::stod(fields[at++]);
    cell.runs = std::stoi(fields[at++]);
    cell.divergences = std::stoi(fields[at++]);
    table.cells.push_back(cell);
  }
  return table;
}

namespace {

void apply_thread_override(int threads) {
  if (threads > 0) {
    omp_set_num_threads(threads);
    return;
  }
  if (const char* env = std::getenv("CBO_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) omp_set_num_threads(t);
  }
}

struct CommonOpts {
  std::string config_path;
  std::int64_t seed = -1;
  int runs = -1;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("config", opts.config_path, "experiment config (JSON)")->required();
  sub->add_option("--seed", opts.seed, "override the base seed");
  sub->add_option("--runs", opts.runs, "override the run count");
  sub->add_option("--out", opts.out, "override the output path");
  sub->add_option("--threads", opts.threads, "worker thread count (default: all cores)");
}

void apply_overrides(ExperimentConfig& cfg, const CommonOpts& opts) {
  if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.runs > 0) cfg.runs = opts.runs;
  if (!opts.out.empty()) cfg.output = opts.out;
}

int cmd_run(const CommonOpts& opts) {
  ExperimentConfig cfg = ExperimentConfig::from_file(opts.config_path);
  apply_overrides(cfg, opts);
  const ExperimentSummary summary = run_experiment(cfg);

  std::cout << "parameter checks:\n" << summary.validation.format();
  std::cout << "runs=" << cfg.runs << " success_rate=" << summary.success_rate
            << " mean_final_dist=" << summary.mean_final_dist
            << " divergences=" << summary.divergences << "\n";
  for (const auto& r : summary.records) {
    std::cout << "  seed=" << r.seed;
    if (r.diverged) {
      std::cout << " diverged_at_step=" << r.diverged_step;
    } else {
      std::cout << " final_consensus=(";
      for (std::size_t k = 0; k < r.final_consensus.size(); ++k) {
        std::cout << (k ? "," : "") << r.final_consensus[k];
      }
      std::cout << ")";
      if (r.final_dist) std::cout << " dist=" << *r.final_dist;
      if (r.success) std::cout << " success=" << (*r.success ? 1 : 0);
    }
    std::cout << " hash=" << r.config_hash << "\n";
  }

  if (!cfg.output.empty()) {
    emit_csv(summary, cfg.make_objective().dim, cfg.output);
    if (cfg.runs == 1 && !summary.records.front().diverged) {
      const RunRecord& r = summary.records.front();
      if (!r.second_moment_series.empty()) {
        emit_csv(diagnostics::moment_series(r), cfg.output + ".second_moment.csv");
      }
      if (!r.consensus_series.empty()) {
        emit_csv(diagnostics::TrajectorySeries(r.times, r.consensus_series, "consensus"),
                 cfg.output + ".consensus.csv");
      }
      if (!r.log_error_series.empty()) {
        std::vector<std::vector<double>> v;
        for (double e : r.log_error_series) v.push_back({e});
        emit_csv(diagnostics::TrajectorySeries(r.times, v, "log_error"),
                 cfg.output + ".log_error.csv");
      }
    }
  }
  return 0;
}

int cmd_sweep(const CommonOpts& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw ConfigError("config file not found: " + opts.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + opts.config_path + ": " + e.what());
  }
  SweepSpec spec = SweepSpec::from_json(j);
  if (opts.seed >= 0) spec.base.seed = static_cast<std::uint64_t>(opts.seed);
  if (opts.runs > 0) spec.runs_per_cell = opts.runs;
  if (!opts.out.empty()) spec.base.output = opts.out;

  const SweepTable table = run_sweep(spec);
  const std::string path = spec.base.output.empty() ? "sweep.csv" : spec.base.output;
  emit_csv(table, path);
  std::cout << "sweep: " << table.cells.size() << " cells x " << spec.runs_per_cell
            << " runs -> " << path << "\n";
  for (const auto& c : table.cells) {
    std::cout << "  delta=" << c.delta << " kappa=" << c.kappa;
    if (table.particles_axis) std::cout << " N=" << c.particles;
    std::cout << " rate=" << c.rate << " divergences=" << c.divergences << "\n";
  }
  return 0;
}

int cmd_check_params(const CommonOpts& opts) {
  ExperimentConfig cfg = ExperimentConfig::from_file(opts.config_path);
  apply_overrides(cfg, opts);
  cfg.validate();
  const Objective obj = cfg.make_objective();

  paramcheck::ValidationReport report;
  if (obj.growth || cfg.growth_override) {
    const GrowthBounds g = cfg.growth_override ? *cfg.growth_override : *obj.growth;
    report = paramcheck::validate_all(
        cfg.params, {g.c_ell, g.c_u, g.M, std::max(cfg.params.alpha, 1e-12)}, obj.dim, cfg.L_m);
  } else {
    report = paramcheck::skipped_report("objective has no growth constants");
  }
  std::cout << report.format();

  if (!cfg.output.empty()) {
    json out;
    for (const auto& c : report.checks) {
      json jc;
      jc["name"] = c.name;
      jc["verdict"] = paramcheck::to_string(c.verdict);
      jc["values"] = c.values;
      jc["note"] = c.note;
      out["checks"].push_back(jc);
    }
    out["overall"] = report.overall_pass() ? "PASS" : "FAIL";
    if (report.constants_available) {
      out["constants"] = {{"b1", report.constants.b1},
                          {"b2", report.constants.b2},
                          {"gamma", report.constants.gamma},
                          {"C2", report.constants.C2}};
    }
    std::ofstream os(cfg.output);
    if (!os) throw IoError("cannot open for writing: " + cfg.output);
    os << out.dump(2) << "\n";
  }
  return 0;
}

int cmd_probe(const CommonOpts& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw ConfigError("config file not found: " + opts.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + opts.config_path + ": " + e.what());
  }
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  apply_overrides(cfg, opts);
  const Objective obj = cfg.make_objective();

  if (!j.contains("probe")) throw ConfigError("probe: missing section");
  const auto& jp = j.at("probe");
  const auto kind = jp.value("kind", std::string{});
  const int n_seeds = opts.runs > 0 ? opts.runs : jp.value("seeds", 20);
  std::vector<std::uint64_t> seeds;
  for (int s = 0; s < n_seeds; ++s) seeds.push_back(cfg.seed + static_cast<std::uint64_t>(s));

  if (kind == "contraction") {
    if (!jp.contains("init_b")) throw ConfigError("probe.init_b: missing for contraction probe");
    const InitSpec init_b = init_from_json(jp.at("init_b"));
    std::vector<double> checkpoints;
    if (jp.contains("checkpoints")) {
      checkpoints = as_vector(jp.at("checkpoints"), "probe.checkpoints");
    } else {
      const double T = cfg.params.horizon();
      checkpoints = {T / 8, T / 4, T / 2, T};
    }
    const auto coupling = jp.value("noise", std::string{"independent"}) == "shared"
                              ? diagnostics::NoiseCoupling::Shared
                              : diagnostics::NoiseCoupling::Independent;
    const auto series = diagnostics::contraction_probe(cfg.params, obj, cfg.init, init_b,
                                                       cfg.particles, seeds, checkpoints, coupling);
    for (std::size_t i = 0; i < series.size(); ++i) {
      std::cout << "t=" << series.times[i] << " w2=" << series.values[i][0] << "\n";
    }
    if (!cfg.output.empty()) emit_csv(series, cfg.output);
    return 0;
  }
  if (kind == "invariant-mean") {
    const double tail = jp.value("tail_fraction", 0.2);
    const auto window = diagnostics::tail_last_fraction(cfg.params.n_steps, tail);
    const auto res = diagnostics::invariant_mean_probe(cfg.params, obj, cfg.init, cfg.particles,
                                                       seeds, window);
    std::cout << "tail steps [" << res.tail_begin << ", " << res.tail_end << ")\n";
    for (std::size_t k = 0; k < res.residual.size(); ++k) {
      std::cout << "axis " << k << ": xbar=" << res.particle_mean_tail[k]
                << " m=" << res.consensus_tail[k] << " residual=" << res.residual[k]
                << " se=" << res.residual_se[k] << "\n";
    }
    return 0;
  }
  if (kind == "moment") {
    ExperimentConfig one = cfg;
    one.record.second_moment = true;
    const RunRecord rec = run(one.init, one.params, obj, one.particles, one.seed, one.record);
    std::optional<double> c2;
    if (obj.growth) {
      const auto tc = paramcheck::compute_theory_constants(
          one.params, {obj.growth->c_ell, obj.growth->c_u, obj.growth->M,
                       std::max(one.params.alpha, 1e-12)}, obj.dim);
      c2 = tc.C2;
      std::cout << "gamma=" << tc.gamma << " C2=" << tc.C2 << "\n";
    }
    const auto series = diagnostics::moment_series(rec, c2);
    std::cout << "initial=" << rec.initial_second_moment
              << " max=" << *std::max_element(rec.second_moment_series.begin(),
                                              rec.second_moment_series.end())
              << " final=" << rec.final_second_moment << "\n";
    if (!cfg.output.empty()) emit_csv(series, cfg.output);
    return 0;
  }
  throw ConfigError("probe.kind: unknown probe '" + kind + "'");
}

}  // namespace

int cli(int argc, const char* const* argv) {
  CLI::App app{"rescaled consensus-based optimization driver"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, check_opts, probe_opts;
  add_common(app.add_subcommand("run", "execute one experiment"), run_opts);
  add_common(app.add_subcommand("sweep", "fill a kappa x delta success-rate table"), sweep_opts);
  add_common(app.add_subcommand("check-params", "evaluate parameter validity conditions"),
             check_opts);
  add_common(app.add_subcommand("probe", "run a diagnostics probe"), probe_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand("run")) {
      apply_thread_override(run_opts.threads);
      return cmd_run(run_opts);
    }
    if (app.got_subcommand("sweep")) {
      apply_thread_override(sweep_opts.threads);
      return cmd_sweep(sweep_opts);
    }
    if (app.got_subcommand("check-params")) {
      apply_thread_override(check_opts.threads);
      return cmd_check_params(check_opts);
    }
    if (app.got_subcommand("probe")) {
      apply_thread_override(probe_opts.threads);
      return cmd_probe(probe_opts);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cbo::harness
