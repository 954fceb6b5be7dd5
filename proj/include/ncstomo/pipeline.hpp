#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncstomo/circulant.hpp"
#include "ncstomo/image.hpp"
#include "ncstomo/linear_map.hpp"
#include "ncstomo/solvers.hpp"

namespace ncstomo {

/// Acquisition geometry in the shape a sinogram sidecar carries, so a
/// reconstruction can rebuild the exact forward operator of the measurement.
struct GeometrySpec {
  std::string kind = "parallel";  // "parallel" or "fan"
  int image_size = 0;
  int angles = 60;
  int detectors = 0;  // 0 picks the default width for the image size

  nlohmann::json to_json() const;
  /// Throws MalformedHeaderError on missing keys, ShapeMismatchError on
  /// out-of-range values.
  static GeometrySpec from_json(const nlohmann::json& j);
};

std::shared_ptr<const ProjectionMap> build_geometry(const GeometrySpec& spec);

/// Data model plus splitting parameters. Defaults are the standard
/// parallel-beam CT settings; default_model_params("pet") swaps in the
/// emission-tomography set.
struct ModelParams {
  std::string model = "ct";  // "ct" or "pet"
  double alpha = 1e-2;
  double beta = 1e-2;
  double gamma = 1.0;
  double lambda = 1.0;
  double dc = 1e-1;
  bool positivity = false;
  int cg_iters = 10;
};

ModelParams default_model_params(const std::string& model);

/// min_x  data(E x - b) + lambda ||D x||_1  (+ indicator(x >= 0))
/// with data = squared error for "ct", Poisson likelihood for "pet"; the
/// gradient block is weighted beta/alpha with its scale folded into the
/// conjugate prox, so the objective stays the unscaled model above.
SplitProblem assemble_problem(const Sinogram& sino,
                              std::shared_ptr<const ProjectionMap> geometry,
                              const ModelParams& p);

/// Circulant surrogate of the measurement normal operator E^T E: the
/// inverse-frequency profile calibrated against E for parallel geometry
/// (DC bin pinned to dc), the empirical row average for fan.
SpectralMask measurement_mask(const GeometrySpec& spec, const ProjectionMap& geometry,
                              double dc, int samples, std::uint64_t seed);

/// Metric mask for the full stacked operator: measurement part plus
/// (beta/alpha)^2 times the periodic Laplacian, plus one per bin for the
/// identity block when positivity is on.
SpectralMask metric_mask(const SpectralMask& measurement, const ModelParams& p);

SolverConfig make_config(const ModelParams& p, int iters, int record_every,
                         std::uint64_t seed, std::optional<SpectralMask> mask);

/// Dispatch on "ncs" | "pdhg" | "admm". pdhg and admm run with the mask
/// dropped (their metrics are gamma I and alpha A^T A by definition).
SolveResult run_named_solver(const std::string& solver, const SplitProblem& prob,
                             const SolverConfig& cfg, int cg_iters,
                             const double* f_star = nullptr,
                             const SolverState* init = nullptr);

struct BenchSolverSpec {
  std::string name;  // "ncs" | "pdhg" | "admm"
  ModelParams params;
  int iters = 0;  // outer-iteration budget for this solver; 0 inherits the shared one
};

struct BenchOutcome {
  Reference reference;
  std::vector<std::string> names;  // run order
  std::map<std::string, SolveResult> runs;
  /// Record axis value of the first row at or below the suboptimality
  /// threshold (outer iterations; cumulative CG iterations for admm),
  /// -1 when never reached.
  std::map<std::string, std::int64_t> iters_to_threshold;
};

/// Shared benchmark protocol: one long splitting run as the reference, then
/// every requested solver from zero with rel_subopt measured against the
/// reference objective.
BenchOutcome run_bench(const Sinogram& sino, const GeometrySpec& geom,
                       const std::vector<BenchSolverSpec>& solvers,
                       const ModelParams& ref_params, int iters,
                       std::int64_t ref_iters, double threshold,
                       const std::optional<SpectralMask>& meas_mask,
                       const std::string& cache_dir = "");

}  // namespace ncstomo
