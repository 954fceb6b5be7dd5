#include "ncstomo/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ncstomo/fanbeam.hpp"
#include "ncstomo/grad.hpp"
#include "ncstomo/io.hpp"
#include "ncstomo/prox.hpp"
#include "ncstomo/radon.hpp"

namespace ncstomo {

nlohmann::json GeometrySpec::to_json() const {
  return {{"kind", kind},
          {"image_size", image_size},
          {"angles", angles},
          {"detectors", detectors}};
}

GeometrySpec GeometrySpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedHeaderError("geometry sidecar entry is not an object");
  for (const char* key : {"kind", "image_size", "angles", "detectors"})
    if (!j.contains(key))
      throw MalformedHeaderError("geometry entry is missing \"" + std::string(key) + "\"");
  GeometrySpec spec;
  try {
    spec.kind = j["kind"].get<std::string>();
    spec.image_size = j["image_size"].get<int>();
    spec.angles = j["angles"].get<int>();
    spec.detectors = j["detectors"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedHeaderError(std::string("geometry entry: ") + e.what());
  }
  if (spec.kind != "parallel" && spec.kind != "fan")
    throw ShapeMismatchError("unknown geometry kind \"" + spec.kind + "\"");
  if (spec.image_size < 1 || spec.angles < 1)
    throw ShapeMismatchError("geometry sizes must be positive");
  return spec;
}

std::shared_ptr<const ProjectionMap> build_geometry(const GeometrySpec& spec) {
  int det = spec.detectors > 0 ? spec.detectors : default_detector_count(spec.image_size);
  if (spec.kind == "parallel")
    return std::make_shared<RadonMap>(spec.image_size, spec.angles, det);
  if (spec.kind == "fan") {
    FanBeamGeometry geom = FanBeamGeometry::defaults(spec.image_size, spec.angles, det);
    return std::make_shared<SparseMap>(build_fanbeam(spec.image_size, geom));
  }
  throw std::invalid_argument("unknown geometry kind \"" + spec.kind + "\"");
}

ModelParams default_model_params(const std::string& model) {
  ModelParams p;
  p.model = model;
  if (model == "ct") return p;
  if (model == "pet") {
    p.alpha = 1e-3;
    p.beta = 1e-3;
    p.gamma = 1e-4;
    p.lambda = 1e-3;
    p.dc = 1e-2;
    return p;
  }
  throw std::invalid_argument("unknown model \"" + model + "\"");
}

SplitProblem assemble_problem(const Sinogram& sino,
                              std::shared_ptr<const ProjectionMap> geometry,
                              const ModelParams& p) {
  if (p.model != "ct" && p.model != "pet")
    throw std::invalid_argument("unknown model \"" + p.model + "\"");
  if (p.alpha <= 0.0 || p.beta <= 0.0)
    throw std::invalid_argument("alpha and beta must be positive");
  if (p.lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (geometry->range_size() != sino.size())
    throw std::invalid_argument("sinogram shape does not match the geometry");
  int n = static_cast<int>(std::lround(std::sqrt(double(geometry->domain_size()))));
  if (static_cast<std::size_t>(n) * n != geometry->domain_size())
    throw std::invalid_argument("geometry domain is not a square image");

  std::vector<SplitBlock> blocks;
  if (p.model == "ct") {
    blocks.push_back({1.0, geometry, std::make_shared<QuadraticConj>(), sino.v});
  } else {
    blocks.push_back(
        {1.0, geometry, std::make_shared<PoissonConj>(sino.v, p.alpha), {}});
  }
  blocks.push_back({p.beta / p.alpha, std::make_shared<GradMap>(n),
                    std::make_shared<ScaledL1Conj>(p.lambda * p.alpha / p.beta),
                    {}});
  if (p.positivity)
    blocks.push_back({1.0, std::make_shared<IdentityMap>(geometry->domain_size()),
                      std::make_shared<NonnegConj>(),
                      {}});
  return SplitProblem(n, std::move(blocks));
}

SpectralMask measurement_mask(const GeometrySpec& spec, const ProjectionMap& geometry,
                              double dc, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("mask estimation needs samples >= 1");
  NormalMap normal(std::shared_ptr<const LinearMap>(&geometry, [](const LinearMap*) {}));
  int n = spec.image_size;
  if (spec.kind == "parallel") {
    double scale = calibrate_scale(normal, radon_mask(n, 1.0, 1.0), samples, seed);
    return radon_mask(n, scale, dc);
  }
  return empirical_mask(normal, n, samples, seed).mask;
}

SpectralMask metric_mask(const SpectralMask& measurement, const ModelParams& p) {
  double w = p.beta / p.alpha;
  SpectralMask mask = measurement + (w * w) * laplacian_mask_2d(measurement.n);
  if (p.positivity)
    for (auto& h : mask.h) h += 1.0;
  return mask;
}

SolverConfig make_config(const ModelParams& p, int iters, int record_every,
                         std::uint64_t seed, std::optional<SpectralMask> mask) {
  SolverConfig cfg;
  cfg.alpha = p.alpha;
  cfg.gamma = p.gamma;
  cfg.mask = std::move(mask);
  cfg.max_iters = iters;
  cfg.record_every = record_every;
  cfg.seed = seed;
  return cfg;
}

SolveResult run_named_solver(const std::string& solver, const SplitProblem& prob,
                             const SolverConfig& cfg, int cg_iters,
                             const double* f_star, const SolverState* init) {
  if (solver == "ncs") return ncs_solve(prob, cfg, f_star, init);
  SolverConfig bare = cfg;
  bare.mask.reset();
  if (solver == "pdhg") return pdhg_solve(prob, bare, f_star, init);
  if (solver == "admm") return admm_cg_solve(prob, bare, cg_iters, f_star, init);
  throw std::invalid_argument("unknown solver \"" + solver + "\"");
}

BenchOutcome run_bench(const Sinogram& sino, const GeometrySpec& geom,
                       const std::vector<BenchSolverSpec>& solvers,
                       const ModelParams& ref_params, int iters,
                       std::int64_t ref_iters, double threshold,
                       const std::optional<SpectralMask>& meas_mask,
                       const std::string& cache_dir) {
  std::shared_ptr<const ProjectionMap> geometry = build_geometry(geom);

  BenchOutcome out;
  {
    SplitProblem prob = assemble_problem(sino, geometry, ref_params);
    std::optional<SpectralMask> mask;
    if (meas_mask) mask = metric_mask(*meas_mask, ref_params);
    SolverConfig cfg = make_config(ref_params, iters, 1, 0, std::move(mask));
    out.reference = compute_reference(prob, cfg, ref_iters, cache_dir);
  }

  for (const BenchSolverSpec& s : solvers) {
    SplitProblem prob = assemble_problem(sino, geometry, s.params);
    std::optional<SpectralMask> mask;
    if (s.name == "ncs" && meas_mask) mask = metric_mask(*meas_mask, s.params);
    SolverConfig cfg =
        make_config(s.params, s.iters > 0 ? s.iters : iters, 1, 0, std::move(mask));
    SolveResult res =
        run_named_solver(s.name, prob, cfg, s.params.cg_iters, &out.reference.objective);

    std::int64_t hit = -1;
    for (const RecordRow& row : res.record.rows)
      if (row.rel_subopt <= threshold) {
        hit = row.iter;
        break;
      }
    out.names.push_back(s.name);
    out.iters_to_threshold[s.name] = hit;
    out.runs.emplace(s.name, std::move(res));
  }
  return out;
}

}  // namespace ncstomo
