#ifndef GENESOL_CLI_HPP
#define GENESOL_CLI_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "genesol/coarse_grain.hpp"
#include "genesol/energy_models.hpp"
#include "genesol/evi_verifier.hpp"
#include "genesol/measure_kit.hpp"
#include "genesol/wave_integrator.hpp"

namespace genesol {

// exit codes of the batch driver
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPipeline = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PipelineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// worker cap from GENESOL_THREADS (>= 1; hardware concurrency by default)
int thread_budget();
// static partition of [0, n) over the thread budget; fn(begin, end) per chunk
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// Flat INI-style config, keys addressed as "section.key".
struct ExperimentConfig {
  std::string model_kind = "quadratic";  // quadratic | perturbed
  int dim = 1;
  double delta = 0.1;

  int cells = 64;
  double period = 1.0;

  std::string initial_kind = "manufactured";  // manufactured | oscillatory | file
  double amplitude = 1.0;
  int wavelength = 8;
  double perturb = 0.0;
  std::string initial_path;

  double dt = 0.0;  // 0 -> h/4
  int steps = 100;
  double viscosity = 0.0;
  std::uint64_t seed = 1;

  int block = 1;

  int basis_max_index = 1;
  double weight_constant = 0.0;  // 0 -> M/m of the model
  double tolerance = 1e-6;
  int max_time_samples = 5;

  std::string trajectory_path = "trajectory.bin";
  std::string measure_path = "measure.jsonl";
  std::string report_path = "report.json";

  std::uint64_t config_hash = 0;  // FNV-1a of the config file bytes

  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_text(const std::string& text);
  ConvexElasticModel model() const;
  TorusGrid grid() const;
};

// trajectory container file: magic + header + little-endian doubles,
// component-major per node
void write_trajectory(const std::string& path, const Trajectory& traj,
                      const TorusGrid& grid, const std::string& model_id,
                      bool force = false);
struct LoadedTrajectory {
  Trajectory traj;
  TorusGrid grid;
  std::string model_id;
};
LoadedTrajectory read_trajectory(const std::string& path);

// measures as JSON lines, one cell per line
void write_measures(const std::string& path, const std::vector<CoarseData>& nodes,
                    bool force = false);

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  bool force = false;
  double tolerance_scale = 1.0;
};

// pipeline: solve -> coarsen -> construct -> verify; returns an exit code
int run_experiment(const ExperimentConfig& config, const RunOptions& options);

// verbs on already produced files
int report_files(const std::string& path);
int verify_trajectory(const std::string& trajectory_path,
                      const ExperimentConfig& config, double tolerance_scale = 1.0);
int convert_trajectory(const std::string& trajectory_path, const std::string& target,
                       int block, const std::string& out_path, bool force);

}  // namespace genesol

#endif
