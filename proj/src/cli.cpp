#include "genesol/cli.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace genesol {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void ensure_writable(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path))
    throw PipelineError("output exists (use --force): " + path);
  auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("trajectory file truncated");
  return v;
}

constexpr char kMagic[8] = {'G', 'S', 'T', 'R', 'J', '0', '0', '1'};

}  // namespace

int thread_budget() {
  if (const char* env = std::getenv("GENESOL_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  int workers = std::min<std::size_t>(thread_budget(), n == 0 ? 1 : n);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

// ---- config ----

namespace {

std::map<std::string, std::string> parse_ini(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line, section;
  auto trim = [](std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
  };
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    kv[section.empty() ? key : section + "." + key] = value;
  }
  return kv;
}

double to_double(const std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ConfigError("invalid number for " + key + ": " + it->second);
  }
}

long long to_int(const std::map<std::string, std::string>& kv, const std::string& key,
                 long long fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t pos = 0;
    long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw ConfigError("invalid integer for " + key + ": " + it->second);
  }
}

std::string to_str(const std::map<std::string, std::string>& kv,
                   const std::string& key, const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  auto kv = parse_ini(text);
  ExperimentConfig c;
  c.model_kind = to_str(kv, "model.kind", c.model_kind);
  c.dim = static_cast<int>(to_int(kv, "model.dim", c.dim));
  c.delta = to_double(kv, "model.delta", c.delta);
  c.cells = static_cast<int>(to_int(kv, "grid.cells", c.cells));
  c.period = to_double(kv, "grid.period", c.period);
  c.initial_kind = to_str(kv, "initial.kind", c.initial_kind);
  c.amplitude = to_double(kv, "initial.amplitude", c.amplitude);
  c.wavelength = static_cast<int>(to_int(kv, "initial.wavelength", c.wavelength));
  c.perturb = to_double(kv, "initial.perturb", c.perturb);
  c.initial_path = to_str(kv, "initial.path", c.initial_path);
  c.dt = to_double(kv, "integrator.dt", c.dt);
  c.steps = static_cast<int>(to_int(kv, "integrator.steps", c.steps));
  c.viscosity = to_double(kv, "integrator.viscosity", c.viscosity);
  c.seed = static_cast<std::uint64_t>(to_int(kv, "integrator.seed", c.seed));
  c.block = static_cast<int>(to_int(kv, "coarsen.block", c.block));
  c.basis_max_index = static_cast<int>(to_int(kv, "verify.max_index", c.basis_max_index));
  c.weight_constant = to_double(kv, "verify.weight_constant", c.weight_constant);
  c.tolerance = to_double(kv, "verify.tolerance", c.tolerance);
  c.max_time_samples =
      static_cast<int>(to_int(kv, "verify.max_time_samples", c.max_time_samples));
  c.trajectory_path = to_str(kv, "output.trajectory", c.trajectory_path);
  c.measure_path = to_str(kv, "output.measure", c.measure_path);
  c.report_path = to_str(kv, "output.report", c.report_path);
  c.config_hash = fnv1a(text);

  if (c.model_kind != "quadratic" && c.model_kind != "perturbed")
    throw ConfigError("model.kind must be quadratic or perturbed");
  if (c.dim < 1 || c.dim > 3) throw ConfigError("model.dim must be 1..3");
  if (c.cells < 4) throw ConfigError("grid.cells must be >= 4");
  if (!(c.period > 0)) throw ConfigError("grid.period must be > 0");
  if (c.initial_kind != "manufactured" && c.initial_kind != "oscillatory" &&
      c.initial_kind != "file")
    throw ConfigError("initial.kind must be manufactured, oscillatory, or file");
  if (c.initial_kind == "file" && !std::filesystem::exists(c.initial_path))
    throw ConfigError("initial.path does not exist: " + c.initial_path);
  if (c.steps < 1) throw ConfigError("integrator.steps must be >= 1");
  if (c.viscosity < 0) throw ConfigError("integrator.viscosity must be >= 0");
  if (c.block < 1) throw ConfigError("coarsen.block must be >= 1");
  if (!(c.tolerance > 0)) throw ConfigError("verify.tolerance must be > 0");
  return c;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_text(buf.str());
}

ConvexElasticModel ExperimentConfig::model() const {
  return model_kind == "perturbed" ? perturbed_quadratic_model(dim, delta)
                                   : quadratic_elastic_model(dim);
}

TorusGrid ExperimentConfig::grid() const {
  return TorusGrid::uniform(dim, cells, period);
}

// ---- trajectory file ----

void write_trajectory(const std::string& path, const Trajectory& traj,
                      const TorusGrid& grid, const std::string& model_id, bool force) {
  ensure_writable(path, force);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw PipelineError("cannot write trajectory: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(grid.dim));
  for (int a = 0; a < 3; ++a)
    write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(grid.extent[a]));
  for (int a = 0; a < 3; ++a) write_raw<double>(os, grid.spacing[a]);
  write_raw<double>(os, traj.dt);
  write_raw<std::uint64_t>(os, traj.states.size());
  write_raw<std::uint32_t>(os, static_cast<std::uint32_t>(model_id.size()));
  os.write(model_id.data(), static_cast<std::streamsize>(model_id.size()));
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    write_raw<double>(os, traj.states[n].t);
    write_raw<double>(os, traj.E[n]);
    write_raw<double>(os, traj.dissipation[n]);
    const auto& v = traj.states[n].v.values();
    const auto& F = traj.states[n].F.values();
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(F.data()),
             static_cast<std::streamsize>(F.size() * sizeof(double)));
  }
  if (!os) throw PipelineError("short write: " + path);
}

LoadedTrajectory read_trajectory(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot read trajectory: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw FormatError("bad trajectory magic/version in " + path);
  LoadedTrajectory out;
  TorusGrid g;
  g.dim = static_cast<int>(read_raw<std::uint32_t>(is));
  for (int a = 0; a < 3; ++a)
    g.extent[a] = static_cast<int>(read_raw<std::uint32_t>(is));
  for (int a = 0; a < 3; ++a) g.spacing[a] = read_raw<double>(is);
  if (g.dim < 1 || g.dim > 3) throw FormatError("bad dimension in " + path);
  out.grid = g;
  out.traj.dt = read_raw<double>(is);
  std::uint64_t nodes = read_raw<std::uint64_t>(is);
  std::uint32_t idlen = read_raw<std::uint32_t>(is);
  out.model_id.resize(idlen);
  is.read(out.model_id.data(), idlen);
  if (!is) throw FormatError("trajectory file truncated");
  if (nodes == 0) throw FormatError("empty trajectory: " + path);
  for (std::uint64_t n = 0; n < nodes; ++n) {
    ElasticState s;
    s.t = read_raw<double>(is);
    out.traj.E.push_back(read_raw<double>(is));
    out.traj.dissipation.push_back(read_raw<double>(is));
    s.v = TorusField(g, Rank::Vector);
    s.F = TorusField(g, Rank::Matrix);
    is.read(reinterpret_cast<char*>(s.v.values().data()),
            static_cast<std::streamsize>(s.v.values().size() * sizeof(double)));
    is.read(reinterpret_cast<char*>(s.F.values().data()),
            static_cast<std::streamsize>(s.F.values().size() * sizeof(double)));
    if (!is) throw FormatError("trajectory file truncated");
    out.traj.states.push_back(std::move(s));
  }
  return out;
}

// ---- measures ----

namespace {

ordered_json measure_line(int node, std::size_t cell, const YoungMeasureField& m) {
  ordered_json line;
  line["node"] = node;
  line["cell"] = cell;
  line["gamma"] = m.gamma[cell];
  ordered_json atoms = ordered_json::array();
  for (const auto& a : m.atoms[cell]) {
    ordered_json atom;
    atom["w"] = a.weight;
    atom["s"] = std::vector<double>(a.s.data(), a.s.data() + a.s.size());
    atom["S"] = std::vector<double>(a.S.data(), a.S.data() + a.S.size());
    atoms.push_back(std::move(atom));
  }
  line["atoms"] = std::move(atoms);
  return line;
}

}  // namespace

void write_measures(const std::string& path, const std::vector<CoarseData>& nodes,
                    bool force) {
  ensure_writable(path, force);
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw PipelineError("cannot write measures: " + path);
  for (std::size_t n = 0; n < nodes.size(); ++n)
    for (std::size_t c = 0; c < nodes[n].measure.atoms.size(); ++c)
      os << measure_line(static_cast<int>(n), c, nodes[n].measure).dump() << "\n";
  if (!os) throw PipelineError("short write: " + path);
}

// ---- pipeline ----

namespace {

ElasticState build_initial(const ExperimentConfig& config, std::uint64_t seed) {
  ElasticState init;
  if (config.initial_kind == "manufactured") {
    if (config.dim != 1)
      throw PipelineError("manufactured initial data requires dim = 1");
    init = manufactured_linear_solution(config.grid(), 0.0, config.amplitude);
  } else if (config.initial_kind == "oscillatory") {
    init = oscillatory_initial_data(config.grid(), config.amplitude, config.wavelength);
  } else {
    LoadedTrajectory loaded = read_trajectory(config.initial_path);
    init = loaded.traj.states.back();
    init.t = 0.0;
  }
  if (config.perturb > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, config.perturb);
    for (double& x : init.v.values()) x += gauss(rng);
  }
  return init;
}

struct PipelineResult {
  Trajectory traj;
  std::vector<CoarseData> coarse;
  Varifold varifold;
  double varifold_trace_integral = 0.0;
  ViolationReport evi;
  ViolationReport mvs;
};

PipelineResult execute(const ExperimentConfig& config, std::uint64_t seed) {
  ConvexElasticModel model = config.model();
  TorusGrid grid = config.grid();
  double dt = config.dt > 0 ? config.dt : grid.spacing[0] / 4.0;
  double cap = stable_dt_cap(model, grid);
  if (dt > cap)
    throw PipelineError("solve: dt " + std::to_string(dt) +
                        " exceeds the stability cap " + std::to_string(cap));

  PipelineResult result;
  ElasticState init = build_initial(config, seed);
  result.traj = simulate(model, init, dt, config.steps, config.viscosity);
  if (!result.traj.warnings.empty())
    throw PipelineError("solve: " + result.traj.warnings.front());

  const std::size_t N = result.traj.states.size();
  result.coarse.resize(N);
  parallel_for(N, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t n = lo; n < hi; ++n)
      result.coarse[n] = coarsen(model, result.traj.states[n], config.block);
  });

  // construct: PSD-project the final defect field and decompose it
  {
    const CoarseData& last = result.coarse.back();
    DefectField defect;
    defect.R = last.defect;
    for (std::size_t c = 0; c < defect.R.cells(); ++c) {
      Eigen::MatrixXd M = defect.R.matrix_at(c);
      Eigen::MatrixXd S = 0.5 * (M + M.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      defect.R.set_matrix(c, es.eigenvectors() *
                                 es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                                 es.eigenvectors().transpose());
      result.varifold_trace_integral +=
          defect.R.matrix_at(c).trace();
    }
    result.varifold = build_varifold(defect);
  }

  TestFunctionBasis basis =
      TestFunctionBasis::trigonometric(grid, config.basis_max_index);
  double weight =
      config.weight_constant > 0 ? config.weight_constant : model.M / model.m;
  result.evi = evi_residual_elastic(model, result.traj, basis, weight,
                                    config.max_time_samples);
  result.mvs = mvs_residual_elastic(model, result.coarse, result.traj.dt, basis,
                                    config.max_time_samples);
  return result;
}

ordered_json report_json(const ExperimentConfig& config, std::uint64_t seed,
                         double tolerance_scale, const PipelineResult& result) {
  ordered_json rep;
  rep["format"] = "genesol-report-v1";
  rep["config_hash"] = hash_hex(config.config_hash);
  rep["seed"] = seed;
  rep["tolerances"] = {{"verify", config.tolerance}, {"scale", tolerance_scale}};
  rep["model"] = {{"kind", config.model_kind}, {"dim", config.dim}};
  rep["grid"] = {{"cells", config.cells}, {"period", config.period}};
  rep["integrator"] = {{"dt", result.traj.dt},
                       {"steps", config.steps},
                       {"viscosity", config.viscosity}};
  rep["energy"] = result.traj.E;
  rep["dissipation"] = result.traj.dissipation;
  std::vector<double> surplus_total;
  for (const auto& node : result.coarse) {
    double acc = 0.0;
    for (double s : node.surplus) acc += s * node.measure.grid.cell_volume();
    surplus_total.push_back(acc);
  }
  rep["surplus"] = surplus_total;
  rep["warnings"] = result.traj.warnings;
  rep["evi"] = {{"max_violation", result.evi.max_violation},
                {"argmax",
                 {{"label", result.evi.argmax.label},
                  {"s", result.evi.argmax.s_node},
                  {"t", result.evi.argmax.t_node}}}};
  rep["mvs"] = {{"max_violation", result.mvs.max_violation},
                {"argmax",
                 {{"label", result.mvs.argmax.label},
                  {"s", result.mvs.argmax.s_node},
                  {"t", result.mvs.argmax.t_node}}}};
  rep["varifold"] = {{"atom_count", result.varifold.atoms.size()},
                     {"total_mass", result.varifold.total_mass()},
                     {"trace_sum", result.varifold_trace_integral}};
  return rep;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  std::uint64_t seed = options.seed_override.value_or(config.seed);
  PipelineResult result;
  try {
    result = execute(config, seed);
    write_trajectory(config.trajectory_path, result.traj, config.grid(),
                     config.model_kind, options.force);
    write_measures(config.measure_path, result.coarse, options.force);
    ordered_json rep = report_json(config, seed, options.tolerance_scale, result);
    ensure_writable(config.report_path, options.force);
    std::ofstream os(config.report_path, std::ios::trunc);
    os << rep.dump(2) << "\n";
    if (!os) throw PipelineError("short write: " + config.report_path);
  } catch (const FormatError& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const PipelineError& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const NewtonFailure& e) {
    std::cerr << "pipeline error in stage solve: " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::exception& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return kExitPipeline;
  }

  double tol = config.tolerance * options.tolerance_scale;
  double worst = std::max(result.evi.max_violation, result.mvs.max_violation);
  for (std::size_t n = 1; n < result.traj.E.size(); ++n)
    if (result.traj.E[n] > result.traj.E[n - 1] + 1e-10) {
      std::cerr << "assertion failed: E not non-increasing at node " << n << "\n";
      return kExitAssertion;
    }
  if (worst > tol) {
    std::cerr << "assertion failed: max_violation " << worst << " > tolerance " << tol
              << "\n";
    return kExitAssertion;
  }
  std::cout << "ok: max_violation " << worst << " <= tolerance " << tol << "\n";
  return kExitOk;
}

// ---- verbs on files ----

int report_files(const std::string& path) {
  try {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
      std::ifstream is(path);
      if (!is) throw FormatError("cannot read report: " + path);
      ordered_json rep = ordered_json::parse(is);
      for (const char* key :
           {"format", "config_hash", "tolerances", "energy", "evi", "mvs"})
        if (!rep.contains(key))
          throw FormatError(std::string("report missing field: ") + key);
      if (rep["format"] != "genesol-report-v1")
        throw FormatError("unsupported report format");
      std::cout << "config_hash\t" << rep["config_hash"].get<std::string>() << "\n";
      std::cout << "max_violation\t"
                << std::max(rep["evi"]["max_violation"].get<double>(),
                            rep["mvs"]["max_violation"].get<double>())
                << "\n";
      std::cout << "# node\tenergy\tsurplus\n";
      auto energy = rep["energy"];
      auto surplus = rep.contains("surplus") ? rep["surplus"] : ordered_json::array();
      for (std::size_t n = 0; n < energy.size(); ++n) {
        std::cout << n << "\t" << energy[n].get<double>() << "\t"
                  << (n < surplus.size() ? surplus[n].get<double>() : 0.0) << "\n";
      }
      return kExitOk;
    }
    LoadedTrajectory loaded = read_trajectory(path);
    std::cout << "# node\tt\tE\tdissipation\n";
    for (std::size_t n = 0; n < loaded.traj.states.size(); ++n)
      std::cout << n << "\t" << loaded.traj.states[n].t << "\t" << loaded.traj.E[n]
                << "\t" << loaded.traj.dissipation[n] << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return kExitParse;
  }
}

int verify_trajectory(const std::string& trajectory_path,
                      const ExperimentConfig& config, double tolerance_scale) {
  try {
    LoadedTrajectory loaded = read_trajectory(trajectory_path);
    ConvexElasticModel model = elastic_model_by_id(loaded.model_id, loaded.grid.dim);
    TestFunctionBasis basis =
        TestFunctionBasis::trigonometric(loaded.grid, config.basis_max_index);
    double weight =
        config.weight_constant > 0 ? config.weight_constant : model.M / model.m;
    ViolationReport rep = evi_residual_elastic(model, loaded.traj, basis, weight,
                                               config.max_time_samples);
    double tol = config.tolerance * tolerance_scale;
    std::cout << "max_violation " << rep.max_violation << " (tolerance " << tol
              << ", argmax " << rep.argmax.label << ")\n";
    return rep.max_violation <= tol ? kExitOk : kExitAssertion;
  } catch (const FormatError& e) {
    std::cerr << "verify error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "verify error: " << e.what() << "\n";
    return kExitPipeline;
  }
}

int convert_trajectory(const std::string& trajectory_path, const std::string& target,
                       int block, const std::string& out_path, bool force) {
  try {
    LoadedTrajectory loaded = read_trajectory(trajectory_path);
    ConvexElasticModel model = elastic_model_by_id(loaded.model_id, loaded.grid.dim);
    if (target == "measure") {
      std::vector<CoarseData> nodes(loaded.traj.states.size());
      parallel_for(nodes.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t n = lo; n < hi; ++n)
          nodes[n] = coarsen(model, loaded.traj.states[n], block);
      });
      write_measures(out_path, nodes, force);
      return kExitOk;
    }
    if (target == "varifold") {
      CoarseData last = coarsen(model, loaded.traj.states.back(), block);
      DefectField defect;
      defect.R = last.defect;
      for (std::size_t c = 0; c < defect.R.cells(); ++c) {
        Eigen::MatrixXd M = defect.R.matrix_at(c);
        Eigen::MatrixXd S = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        defect.R.set_matrix(c, es.eigenvectors() *
                                   es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                                   es.eigenvectors().transpose());
      }
      Varifold v = build_varifold(defect);
      ensure_writable(out_path, force);
      std::ofstream os(out_path, std::ios::trunc);
      if (!os) throw PipelineError("cannot write varifold: " + out_path);
      for (const auto& a : v.atoms) {
        ordered_json line;
        line["cell"] = a.cell;
        line["direction"] = std::vector<double>(
            a.direction.data(), a.direction.data() + a.direction.size());
        line["mass"] = a.mass;
        os << line.dump() << "\n";
      }
      return kExitOk;
    }
    std::cerr << "convert error: unknown target " << target << "\n";
    return kExitParse;
  } catch (const FormatError& e) {
    std::cerr << "convert error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "convert error: " << e.what() << "\n";
    return kExitPipeline;
  }
}

}  // namespace genesol
