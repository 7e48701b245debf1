/* Copyright 2026 The spinopt Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "spinopt/job.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace spinopt {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

long long get_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

std::vector<double> get_vector(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RealMatrix get_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  RealMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    const auto row = get_vector(v[static_cast<std::size_t>(r)], row_path);
    if (r == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) fail(row_path, "ragged matrix row");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

CouplingSpec parse_coupling(const json* v, CouplingKind kind, const std::string& path) {
  if (!v) return CouplingSpec::nearest_neighbour(kind);
  if (!v->is_object()) fail(path, "expected an object with 'J' or 'matrix'");
  reject_unknown(*v, path, {"J", "matrix"});
  if (const json* m = find(*v, "matrix")) {
    if (find(*v, "J")) fail(path, "give either 'J' or 'matrix', not both");
    RealMatrix j = get_matrix(*m, path + ".matrix");
    if (j.rows() != j.cols()) fail(path + ".matrix", "must be square");
    return CouplingSpec::explicit_matrix(kind, std::move(j));
  }
  const json* j = find(*v, "J");
  return CouplingSpec::nearest_neighbour(kind, j ? get_number(*j, path + ".J") : 1.0);
}

ModelConfig parse_model(const json& v) {
  const std::string path = "model";
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v, path,
                 {"type", "n_qubits", "coupling", "omegas", "gbars", "rabi", "alpha"});
  ModelConfig model;
  const json* type = find(v, "type");
  if (!type || !type->is_string()) fail(path + ".type", "required string");
  try {
    model.kind = parse_model_kind(type->get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(path + ".type", e.what());
  }
  const auto coupling_kind =
      model.kind == ModelKind::electrode ? CouplingKind::heisenberg : CouplingKind::ising;
  model.coupling = parse_coupling(find(v, "coupling"), coupling_kind, path + ".coupling");
  if (const json* g = find(v, "gbars")) model.gbars = get_vector(*g, path + ".gbars");

  if (model.kind == ModelKind::global_field) {
    const json* om = find(v, "omegas");
    if (!om) fail(path + ".omegas", "required for the global-field model");
    model.omegas = get_vector(*om, path + ".omegas");
    if (model.omegas.empty()) fail(path + ".omegas", "need at least one frequency");
    model.n_qubits = static_cast<int>(model.omegas.size());
    if (const json* n = find(v, "n_qubits")) {
      if (get_integer(*n, path + ".n_qubits") != model.n_qubits) {
        fail(path + ".omegas", "expected " + std::to_string(get_integer(*n, "")) +
                                   " values, got " + std::to_string(model.omegas.size()));
      }
    }
  } else {
    const json* n = find(v, "n_qubits");
    if (!n) fail(path + ".n_qubits", "required");
    const auto nq = get_integer(*n, path + ".n_qubits");
    if (nq < 1 || nq > 6) fail(path + ".n_qubits", "must lie in 1..6");
    model.n_qubits = static_cast<int>(nq);
    if (find(v, "omegas")) fail(path + ".omegas", "only valid for the global-field model");
  }
  if (!model.gbars.empty() && static_cast<int>(model.gbars.size()) != model.n_qubits) {
    fail(path + ".gbars", "expected " + std::to_string(model.n_qubits) + " values, got " +
                              std::to_string(model.gbars.size()));
  }
  if (model.coupling.matrix && model.coupling.matrix->rows() != model.n_qubits) {
    fail(path + ".coupling.matrix", "must be " + std::to_string(model.n_qubits) + "x" +
                                        std::to_string(model.n_qubits));
  }
  if (model.kind == ModelKind::electrode) {
    const json* r = find(v, "rabi");
    if (!r) fail(path + ".rabi", "required for the electrode model");
    model.rabi = get_number(*r, path + ".rabi");
  } else if (find(v, "rabi")) {
    fail(path + ".rabi", "only valid for the electrode model");
  }
  if (model.kind == ModelKind::crosstalk) {
    const json* a = find(v, "alpha");
    if (!a) fail(path + ".alpha", "required for the crosstalk model");
    model.alpha = get_matrix(*a, path + ".alpha");
    const Eigen::Index m = 2 * model.n_qubits;
    if (model.alpha.rows() != m || model.alpha.cols() != m) {
      fail(path + ".alpha", "must be " + std::to_string(m) + "x" + std::to_string(m));
    }
  } else if (find(v, "alpha")) {
    fail(path + ".alpha", "only valid for the crosstalk model");
  }
  if (model.kind == ModelKind::basic_nmr || model.kind == ModelKind::crosstalk) {
    if (!model.gbars.empty()) fail(path + ".gbars", "not used by this model");
  }
  return model;
}

InitSpec parse_init(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v, path, {"kind", "value"});
  InitSpec init;
  const json* kind = find(v, "kind");
  if (!kind || !kind->is_string()) fail(path + ".kind", "required string");
  const auto k = kind->get<std::string>();
  if (k == "zero") {
    init.kind = InitSpec::Kind::zero;
  } else if (k == "constant") {
    init.kind = InitSpec::Kind::constant;
  } else if (k == "uniform") {
    init.kind = InitSpec::Kind::uniform_random;
  } else {
    fail(path + ".kind", "expected zero, constant or uniform");
  }
  if (const json* val = find(v, "value")) init.value = get_number(*val, path + ".value");
  if (init.kind == InitSpec::Kind::uniform_random && init.value < 0) {
    fail(path + ".value", "half-width must be >= 0");
  }
  return init;
}

void parse_optimizer(const json& v, JobConfig& job) {
  const std::string path = "optimizer";
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v, path,
                 {"mode", "gradient", "max_iters", "target_infidelity", "epsilon0", "line_search",
                  "amplitude_bound", "seed", "init", "restarts", "workers", "time_limit_s"});
  auto& cfg = job.optimizer;
  if (const json* m = find(v, "mode")) {
    const auto s = m->is_string() ? m->get<std::string>() : std::string();
    if (s == "global") {
      cfg.mode = UpdateMode::global;
    } else if (s == "local") {
      cfg.mode = UpdateMode::local;
    } else {
      fail(path + ".mode", "expected 'global' or 'local'");
    }
  }
  if (const json* g = find(v, "gradient")) {
    const auto s = g->is_string() ? g->get<std::string>() : std::string();
    if (s == "exact") {
      cfg.gradient = GradientForm::exact;
    } else if (s == "first-order") {
      cfg.gradient = GradientForm::first_order;
    } else {
      fail(path + ".gradient", "expected 'exact' or 'first-order'");
    }
  }
  if (const json* x = find(v, "max_iters")) {
    const auto n = get_integer(*x, path + ".max_iters");
    if (n < 1) fail(path + ".max_iters", "must be >= 1");
    cfg.max_iters = static_cast<int>(n);
  }
  if (const json* x = find(v, "target_infidelity")) {
    cfg.target_infidelity = get_number(*x, path + ".target_infidelity");
    if (!(cfg.target_infidelity > 0 && cfg.target_infidelity <= 1)) {
      fail(path + ".target_infidelity", "must lie in (0, 1]");
    }
  }
  if (const json* x = find(v, "epsilon0")) {
    cfg.epsilon0 = get_number(*x, path + ".epsilon0");
    if (!(cfg.epsilon0 > 0)) fail(path + ".epsilon0", "must be > 0");
  }
  if (const json* x = find(v, "line_search")) {
    if (!x->is_boolean()) fail(path + ".line_search", "expected true or false");
    cfg.line_search = x->get<bool>();
  }
  if (const json* x = find(v, "amplitude_bound")) {
    cfg.amplitude_bound = get_number(*x, path + ".amplitude_bound");
    if (*cfg.amplitude_bound < 0) fail(path + ".amplitude_bound", "must be >= 0");
  }
  if (const json* x = find(v, "seed")) {
    const auto s = get_integer(*x, path + ".seed");
    if (s < 0) fail(path + ".seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (const json* x = find(v, "init")) cfg.init = parse_init(*x, path + ".init");
  if (const json* x = find(v, "restarts")) {
    const auto n = get_integer(*x, path + ".restarts");
    if (n < 1) fail(path + ".restarts", "must be >= 1");
    job.restarts = static_cast<std::size_t>(n);
  }
  if (const json* x = find(v, "workers")) {
    const auto n = get_integer(*x, path + ".workers");
    if (n < 1) fail(path + ".workers", "must be >= 1");
    job.workers = static_cast<std::size_t>(n);
  }
  if (const json* x = find(v, "time_limit_s")) {
    cfg.time_limit_s = get_number(*x, path + ".time_limit_s");
    if (cfg.time_limit_s < 0) fail(path + ".time_limit_s", "must be >= 0");
  }
}

std::string format_number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

ModelKind parse_model_kind(const std::string& name) {
  if (name == "basic-nmr") return ModelKind::basic_nmr;
  if (name == "crosstalk") return ModelKind::crosstalk;
  if (name == "global-field") return ModelKind::global_field;
  if (name == "electrode") return ModelKind::electrode;
  throw std::invalid_argument("unknown model '" + name +
                              "' (expected basic-nmr, crosstalk, global-field, electrode)");
}

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::basic_nmr: return "basic-nmr";
    case ModelKind::crosstalk: return "crosstalk";
    case ModelKind::global_field: return "global-field";
    case ModelKind::electrode: return "electrode";
  }
  return "?";
}

JobConfig parse_job_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) fail("config", "top level must be an object");
  reject_unknown(root, "config", {"model", "target", "t_final", "segments", "optimizer", "outputs"});

  JobConfig job;
  const json* model = find(root, "model");
  if (!model) fail("model", "required");
  job.model = parse_model(*model);

  const json* target = find(root, "target");
  if (!target) fail("target", "required");
  if (target->is_string()) {
    job.target = target->get<std::string>();
    try {
      const auto gate = gate_by_name(job.target, job.model.n_qubits);
      if (gate.n_qubits != job.model.n_qubits) {
        fail("target", "gate '" + job.target + "' acts on " + std::to_string(gate.n_qubits) +
                           " qubits but the model has " + std::to_string(job.model.n_qubits));
      }
    } catch (const std::invalid_argument& e) {
      fail("target", e.what());
    }
  } else if (target->is_object()) {
    reject_unknown(*target, "target", {"file"});
    const json* file = find(*target, "file");
    if (!file || !file->is_string()) fail("target.file", "required string path");
    std::filesystem::path p = file->get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) fail("target.file", "file not found: " + p.string());
    job.target = p.string();
    job.target_is_file = true;
  } else {
    fail("target", "expected a gate name or {\"file\": path}");
  }

  if (const json* t = find(root, "t_final")) {
    job.t_final = get_number(*t, "t_final");
    if (!(job.t_final > 0)) fail("t_final", "must be > 0");
  }
  if (const json* k = find(root, "segments")) {
    const auto n = get_integer(*k, "segments");
    if (n < 1) fail("segments", "must be >= 1");
    job.segments = static_cast<int>(n);
  }
  if (const json* opt = find(root, "optimizer")) parse_optimizer(*opt, job);
  if (const json* out = find(root, "outputs")) {
    if (!out->is_string()) fail("outputs", "expected a directory path");
    job.outputs = out->get<std::string>();
    if (job.outputs.is_relative() && !base_dir.empty()) job.outputs = base_dir / job.outputs;
  }
  job.snapshot = root.dump(2);
  return job;
}

JobConfig load_job_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_job_config(ss.str(), path.parent_path());
}

ControlSystem build_system(const ModelConfig& model) {
  switch (model.kind) {
    case ModelKind::basic_nmr:
      return build_basic_nmr(model.coupling, model.n_qubits);
    case ModelKind::crosstalk:
      return build_crosstalk(build_basic_nmr(model.coupling, model.n_qubits), model.alpha);
    case ModelKind::global_field:
      return build_global_field_model(model.omegas, model.gbars, model.coupling);
    case ModelKind::electrode:
      return build_electrode_model(model.rabi, model.gbars, model.n_qubits, model.coupling);
  }
  throw std::invalid_argument("unknown model kind");
}

GateTarget resolve_target(const JobConfig& config) {
  GateTarget target;
  try {
    target = config.target_is_file ? load_gate_csv(config.target)
                                   : gate_by_name(config.target, config.model.n_qubits);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("target: ") + e.what());
  }
  if (target.n_qubits != config.model.n_qubits) {
    throw ConfigError("target: gate acts on " + std::to_string(target.n_qubits) +
                      " qubits but the model has " + std::to_string(config.model.n_qubits));
  }
  if (unitarity_defect(target.matrix) > 1e-10) {
    throw ConfigError("target: matrix is not unitary");
  }
  return target;
}

std::string RunSummary::to_json() const {
  json j;
  j["model"] = model;
  j["target"] = target;
  j["t_F"] = t_final;
  j["K"] = segments;
  j["fidelity"] = fidelity;
  j["gate_error"] = gate_error;
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["wall_time_s"] = wall_time_s;
  j["bandwidth_99"] = bandwidth_99;
  j["restarts"] = restarts;
  j["best_restart"] = best_restart;
  return j.dump(2) + "\n";
}

RunSummary RunSummary::from_json(const std::string& text) {
  RunSummary s;
  try {
    const json j = json::parse(text);
    s.model = j.at("model").get<std::string>();
    s.target = j.at("target").get<std::string>();
    s.t_final = j.at("t_F").get<double>();
    s.segments = j.at("K").get<int>();
    s.fidelity = j.at("fidelity").get<double>();
    s.gate_error = j.at("gate_error").get<double>();
    s.iterations = j.at("iterations").get<int>();
    s.converged = j.at("converged").get<bool>();
    s.wall_time_s = j.at("wall_time_s").get<double>();
    s.bandwidth_99 = j.at("bandwidth_99").get<double>();
    s.restarts = j.value("restarts", std::size_t{0});
    s.best_restart = j.value("best_restart", std::size_t{0});
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("summary JSON: ") + e.what());
  }
  return s;
}

RunRecord run_job(const JobConfig& config) {
  const ControlSystem system = build_system(config.model);
  const GateTarget target = resolve_target(config);

  RestartOutcome outcome = optimize_restarts(system, target, config.t_final, config.segments,
                                             config.optimizer, config.restarts, config.workers);

  RunRecord rec;
  rec.config = config;
  std::filesystem::create_directories(config.outputs);
  rec.field_csv = config.outputs / "field.csv";
  rec.spectrum_csv = config.outputs / "spectrum.csv";
  rec.summary_json = config.outputs / "summary.json";
  write_field_csv(rec.field_csv, outcome.best.control);
  const auto spectrum = control_spectrum(outcome.best.control);
  write_spectrum_csv(rec.spectrum_csv, spectrum);
  write_file_atomic(config.outputs / "config.json", config.snapshot + "\n");

  // The summary is computed from what was written, not from optimizer state.
  const PiecewiseControl stored = read_field_csv(rec.field_csv);
  const ComplexMatrix total = propagate_total(system, stored);
  auto& s = rec.summary;
  s.model = model_kind_name(config.model.kind);
  s.target = target.label;
  s.t_final = config.t_final;
  s.segments = config.segments;
  s.fidelity = fidelity(target, total);
  s.gate_error = gate_error(target, total);
  s.iterations = outcome.best.iterations;
  s.converged = 1.0 - s.fidelity <= config.optimizer.target_infidelity;
  s.wall_time_s = outcome.best.wall_time;
  s.bandwidth_99 = bandwidth_summary(spectrum, 0.99);
  s.restarts = outcome.restarts;
  s.best_restart = outcome.best_index;
  write_file_atomic(rec.summary_json, s.to_json());
  rec.result = std::move(outcome.best);
  return rec;
}

std::vector<SweepCell> sweep(const JobConfig& base, const std::vector<double>& rabi_values,
                             const std::vector<int>& segment_values,
                             const std::vector<std::string>& targets, std::size_t restarts,
                             const std::optional<std::filesystem::path>& cell_dir) {
  if (base.model.kind != ModelKind::electrode) {
    throw ConfigError("model.type: sweep requires the electrode model");
  }
  if (restarts == 0) throw std::invalid_argument("sweep: restarts must be >= 1");
  std::vector<SweepCell> cells;
  for (double rabi : rabi_values) {
    for (int k : segment_values) {
      if (k < 1) throw std::invalid_argument("sweep: segment counts must be >= 1");
      for (const auto& t : targets) cells.push_back({rabi, k, t, 0.0, false, restarts});
    }
  }
  if (cell_dir) std::filesystem::create_directories(*cell_dir);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        auto& cell = cells[i];
        ModelConfig model = base.model;
        model.rabi = cell.rabi;
        const ControlSystem system = build_system(model);
        JobConfig cfg = base;
        cfg.target = cell.target;
        cfg.target_is_file = false;
        const GateTarget target = resolve_target(cfg);
        // restarts within a cell stay sequential; cells are the parallel unit
        const auto outcome = optimize_restarts(system, target, base.t_final, cell.segments,
                                               base.optimizer, restarts, 1);
        cell.best_fidelity = outcome.best.fidelity;
        cell.converged = outcome.best.converged;
        if (cell_dir) {
          const std::string name = "field_omega" + format_number(cell.rabi) + "_K" +
                                   std::to_string(cell.segments) + "_" + cell.target + ".csv";
          write_field_csv(*cell_dir / name, outcome.best.control);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(base.workers, 1, cells.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream out;
  out << "omega,K,target,best_fidelity,converged,restarts\n";
  for (const auto& c : cells) {
    out << format_number(c.rabi) << ',' << c.segments << ',' << c.target << ','
        << format_number(c.best_fidelity) << ',' << (c.converged ? "true" : "false") << ','
        << c.restarts << '\n';
  }
  return out.str();
}

std::string VerifyReport::to_text() const {
  std::ostringstream out;
  out << std::setprecision(15);
  out << "fidelity:            " << fidelity << '\n';
  out << "gate_error:          " << gate_error << '\n';
  out << "max segment defect:  " << max_segment_defect << '\n';
  out << "total defect:        " << total_defect << '\n';
  out << "amplitude bound:     " << (bound_ok ? "ok" : "VIOLATED") << '\n';
  out << "bandwidth_99:        " << bandwidth_99 << '\n';
  if (summary_fidelity) {
    out << "summary fidelity:    " << *summary_fidelity << '\n';
    out << "summary check:       " << (summary_matches ? "match" : "MISMATCH") << '\n';
  }
  return out.str();
}

VerifyReport verify(const std::filesystem::path& field_csv, const JobConfig& config,
                    const std::optional<std::filesystem::path>& summary_json) {
  const ControlSystem system = build_system(config.model);
  const GateTarget target = resolve_target(config);
  const PiecewiseControl control = read_field_csv(field_csv);
  if (control.n_controls() != static_cast<Eigen::Index>(system.n_controls())) {
    throw std::invalid_argument("verify: field file has " + std::to_string(control.n_controls()) +
                                " channels but model '" + model_kind_name(config.model.kind) +
                                "' has " + std::to_string(system.n_controls()) + " controls");
  }
  VerifyReport report;
  const PropagationCache cache = propagate(system, control);
  for (const auto& u : cache.segment_props) {
    report.max_segment_defect = std::max(report.max_segment_defect, unitarity_defect(u));
  }
  report.total_defect = unitarity_defect(cache.total);
  // same product order as run_job's re-evaluation, so the two agree exactly
  const ComplexMatrix total = propagate_total(system, control);
  report.fidelity = fidelity(target, total);
  report.gate_error = gate_error(target, total);
  if (config.optimizer.amplitude_bound && control.values().size() > 0) {
    report.bound_ok = control.values().cwiseAbs().maxCoeff() <= *config.optimizer.amplitude_bound;
  }
  if (control.segments() > 0 && control.is_uniform(1e-9)) {
    report.bandwidth_99 = bandwidth_summary(control_spectrum(control), 0.99);
  }
  if (summary_json) {
    std::ifstream in(*summary_json);
    if (!in) throw std::runtime_error("cannot open summary " + summary_json->string());
    std::stringstream ss;
    ss << in.rdbuf();
    const RunSummary s = RunSummary::from_json(ss.str());
    report.summary_fidelity = s.fidelity;
    report.summary_matches = std::abs(s.fidelity - report.fidelity) <= 1e-10;
  }
  return report;
}

}  // namespace spinopt
