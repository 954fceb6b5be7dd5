#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ncstomo/io.hpp"
#include "ncstomo/phantom.hpp"
#include "ncstomo/pipeline.hpp"
#include "ncstomo/sparse.hpp"

#ifndef NCSTOMO_VERSION
#define NCSTOMO_VERSION "0.0.0"
#endif

using namespace ncstomo;
using nlohmann::json;

namespace {

/// Flag combinations the parser accepts but the run cannot honor.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// NCS_THREADS caps internal parallelism; operators in this build are
/// serial, so any cap >= 1 is honored as-is. The value is validated and
/// recorded in the manifest.
int env_thread_cap() {
  const char* raw = std::getenv("NCS_THREADS");
  if (!raw || *raw == '\0') return 1;
  char* end = nullptr;
  long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1)
    throw UsageError("NCS_THREADS must be a positive integer");
  return static_cast<int>(v);
}

class WallTimer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void save_manifest(const std::string& path, const std::string& subcommand,
                   std::uint64_t seed, json params, json inputs, json outputs,
                   double wall_ms) {
  json m = {{"tool", "ncstomo"},       {"version", NCSTOMO_VERSION},
            {"subcommand", subcommand}, {"seed", seed},
            {"threads", env_thread_cap()}, {"params", std::move(params)},
            {"inputs", std::move(inputs)}, {"outputs", std::move(outputs)},
            {"wall_ms", wall_ms}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << m.dump(2) << '\n';
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedHeaderError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw MalformedHeaderError(path + ": " + e.what());
  }
  return j;
}

double json_number(const json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_number())
    throw MalformedHeaderError(where + ": \"" + key + "\" must be a number");
  return j[key].get<double>();
}

// ---------------------------------------------------------------- phantom

struct PhantomArgs {
  int size = 0;
  std::string out, spec, pgm;
};

PhantomSpec load_phantom_spec(const std::string& path, int size) {
  json j = load_json_file(path);
  if (!j.is_object() || !j.contains("ellipses") || !j["ellipses"].is_array())
    throw MalformedHeaderError(path + ": expected {\"ellipses\": [...]}");
  PhantomSpec spec;
  spec.n = size;
  for (const json& e : j["ellipses"]) {
    if (!e.is_object())
      throw MalformedHeaderError(path + ": each ellipse must be an object");
    for (const char* key : {"intensity", "x0", "y0", "a", "b"})
      if (!e.contains(key))
        throw MalformedHeaderError(path + ": ellipse is missing \"" + std::string(key) +
                                   "\"");
    Ellipse el{};
    el.intensity = json_number(e, "intensity", path);
    el.x0 = json_number(e, "x0", path);
    el.y0 = json_number(e, "y0", path);
    el.a = json_number(e, "a", path);
    el.b = json_number(e, "b", path);
    el.rot_deg = e.contains("rot_deg") ? json_number(e, "rot_deg", path) : 0.0;
    spec.ellipses.push_back(el);
  }
  return spec;
}

int cmd_phantom(const PhantomArgs& a) {
  WallTimer timer;
  PhantomSpec spec = a.spec.empty() ? PhantomSpec::shepp_logan(a.size)
                                    : load_phantom_spec(a.spec, a.size);
  ImageGrid img = make_phantom(spec);
  write_image(a.out, img);
  json outputs = {{"image", a.out}};
  if (!a.pgm.empty()) {
    write_pgm(a.pgm, img);
    outputs["pgm"] = a.pgm;
  }
  save_manifest(a.out + ".manifest.json", "phantom", 0,
                {{"size", a.size}, {"spec", a.spec.empty() ? "shepp-logan" : a.spec}},
                a.spec.empty() ? json::object() : json{{"spec", a.spec}}, outputs,
                timer.ms());
  return 0;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string in, geometry = "parallel", noise, out;
  int angles = 60;
  int detectors = 0;
  std::uint64_t seed = 0;
};

struct NoiseChoice {
  std::string kind;
  std::optional<double> value;
};

NoiseChoice parse_noise(const std::string& s) {
  NoiseChoice c;
  std::size_t colon = s.find(':');
  c.kind = s.substr(0, colon);
  if (c.kind != "gaussian" && c.kind != "poisson")
    throw UsageError("--noise must be gaussian[:SIGMA] or poisson:SCALE");
  if (colon != std::string::npos) {
    const std::string raw = s.substr(colon + 1);
    try {
      std::size_t used = 0;
      c.value = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
      throw UsageError("cannot parse noise level \"" + raw + "\"");
    }
  } else if (c.kind == "poisson") {
    throw UsageError("poisson noise needs an exposure scale: poisson:SCALE");
  }
  return c;
}

int cmd_simulate(const SimulateArgs& a) {
  WallTimer timer;
  NoiseChoice noise = parse_noise(a.noise);
  ImageGrid img = read_image(a.in);
  GeometrySpec gs{a.geometry, img.n, a.angles, a.detectors};
  std::shared_ptr<const ProjectionMap> map = build_geometry(gs);
  gs.detectors = map->n_detectors();

  Sinogram sino;
  json noise_json = {{"kind", noise.kind}, {"seed", a.seed}};
  if (noise.kind == "gaussian") {
    double sigma = 0.0;
    if (noise.value) {
      sigma = *noise.value;
    } else {
      // Default amplitude: half a percent of the peak clean measurement.
      for (double v : forward(*map, img.v)) sigma = std::max(sigma, std::abs(v));
      sigma *= 5e-3;
    }
    sino = simulate_ct(img, *map, sigma, a.seed);
    noise_json["sigma"] = sigma;
  } else {
    sino = simulate_pet(img, *map, *noise.value, a.seed);
    noise_json["exposure_scale"] = *noise.value;
  }

  write_sinogram(a.out, sino, {{"geometry", gs.to_json()}, {"noise", noise_json}});
  save_manifest(a.out + ".manifest.json", "simulate", a.seed,
                {{"geometry", gs.to_json()}, {"noise", noise_json}},
                {{"image", a.in}}, {{"sinogram", a.out}}, timer.ms());
  return 0;
}

// ------------------------------------------------------------ reconstruct

struct ReconstructArgs {
  std::string sino, solver, model, mask, out, log, pgm;
  double alpha = 0, beta = 0, gamma = 0, lambda = 0, dc = 0;
  bool has_alpha = false, has_beta = false, has_gamma = false, has_lambda = false,
       has_dc = false;
  bool positivity = false;
  int iters = 100;
  int cg_iters = 0;
  int record_every = 1;
  int mask_samples = 8;
  std::uint64_t seed = 0;
};

GeometrySpec sidecar_geometry(const json& sidecar, const std::string& path) {
  if (!sidecar.contains("geometry"))
    throw MalformedHeaderError(path + ": sidecar carries no geometry entry");
  return GeometrySpec::from_json(sidecar["geometry"]);
}

ModelParams resolve_params(const ReconstructArgs& a) {
  ModelParams p = default_model_params(a.model);
  if (a.has_alpha) p.alpha = a.alpha;
  if (a.has_beta) p.beta = a.beta;
  if (a.has_gamma) p.gamma = a.gamma;
  if (a.has_lambda) p.lambda = a.lambda;
  if (a.has_dc) p.dc = a.dc;
  p.positivity = a.positivity;
  if (a.cg_iters > 0) p.cg_iters = a.cg_iters;
  return p;
}

int cmd_reconstruct(const ReconstructArgs& a) {
  WallTimer timer;
  if (!a.mask.empty() && a.solver != "ncs")
    throw UsageError("--mask only applies to the ncs solver");

  json sidecar;
  Sinogram sino = read_sinogram(a.sino, &sidecar);
  GeometrySpec gs = sidecar_geometry(sidecar, a.sino);
  std::shared_ptr<const ProjectionMap> geometry = build_geometry(gs);
  ModelParams p = resolve_params(a);

  std::optional<SpectralMask> mask;
  std::string mask_source = "none";
  if (a.mask == "auto") {
    mask = metric_mask(measurement_mask(gs, *geometry, p.dc, a.mask_samples, a.seed), p);
    mask_source = gs.kind == "parallel" ? "auto:calibrated-radon" : "auto:empirical";
  } else if (!a.mask.empty()) {
    SpectralMask meas = read_mask(a.mask);
    if (meas.n != gs.image_size)
      throw ShapeMismatchError(a.mask + ": mask size " + std::to_string(meas.n) +
                               " does not match image size " +
                               std::to_string(gs.image_size));
    mask = metric_mask(meas, p);
    mask_source = a.mask;
  }

  SplitProblem prob = assemble_problem(sino, geometry, p);
  SolverConfig cfg = make_config(p, a.iters, a.record_every, a.seed, std::move(mask));
  SolveResult res = run_named_solver(a.solver, prob, cfg, p.cg_iters);

  std::string log = a.log.empty() ? a.out + ".csv" : a.log;
  write_image(a.out, res.state.x);
  write_record_csv(log, res.record);
  json outputs = {{"image", a.out}, {"log", log}};
  if (!a.pgm.empty()) {
    write_pgm(a.pgm, res.state.x);
    outputs["pgm"] = a.pgm;
  }

  json params = {{"solver", a.solver},   {"model", p.model},
                 {"alpha", p.alpha},     {"beta", p.beta},
                 {"gamma", p.gamma},     {"lambda", p.lambda},
                 {"dc", p.dc},           {"iters", a.iters},
                 {"positivity", p.positivity}, {"mask", mask_source},
                 {"mask_samples", a.mask_samples}, {"cg_iters", p.cg_iters},
                 {"record_every", a.record_every}, {"geometry", gs.to_json()}};
  json manifest_extra = {{"objective", res.objective},
                         {"warnings", res.record.warnings}};
  json inputs = {{"sinogram", a.sino}};
  if (mask_source != "none" && a.mask != "auto") inputs["mask"] = a.mask;
  params["result"] = manifest_extra;
  save_manifest(a.out + ".manifest.json", "reconstruct", a.seed, params, inputs,
                outputs, timer.ms());
  for (const std::string& w : res.record.warnings)
    std::cerr << "warning: " << w << '\n';
  return 0;
}

// ------------------------------------------------------------------ bench

struct BenchArgs {
  std::string problem, solvers = "ncs,pdhg,admm", out;
  int iters = 1000;
  std::int64_t ref_iters = 0;
  double threshold = 1e-4;
};

ModelParams override_params(ModelParams p, const json& o, const std::string& where) {
  if (!o.is_object()) throw MalformedHeaderError(where + " must be an object");
  for (auto it = o.begin(); it != o.end(); ++it) {
    const std::string& key = it.key();
    if (key == "alpha")
      p.alpha = json_number(o, "alpha", where);
    else if (key == "beta")
      p.beta = json_number(o, "beta", where);
    else if (key == "gamma")
      p.gamma = json_number(o, "gamma", where);
    else if (key == "dc")
      p.dc = json_number(o, "dc", where);
    else if (key == "cg_iters")
      p.cg_iters = static_cast<int>(json_number(o, "cg_iters", where));
    else
      throw MalformedHeaderError(where + ": unknown key \"" + key + "\"");
  }
  return p;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    if (comma > pos) parts.push_back(s.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return parts;
}

int cmd_bench(const BenchArgs& a) {
  WallTimer timer;
  std::vector<std::string> names = split_csv(a.solvers);
  if (names.empty()) throw UsageError("--solvers must name at least one solver");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] != "ncs" && names[i] != "pdhg" && names[i] != "admm")
      throw UsageError("unknown solver \"" + names[i] + "\"");
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (names[i] == names[j]) throw UsageError("duplicate solver \"" + names[i] + "\"");
  }

  json pj = load_json_file(a.problem);
  if (!pj.is_object() || !pj.contains("sino"))
    throw MalformedHeaderError(a.problem + ": expected an object with \"sino\"");
  std::filesystem::path base_dir = std::filesystem::path(a.problem).parent_path();
  std::string sino_path = (base_dir / pj["sino"].get<std::string>()).string();

  json sidecar;
  Sinogram sino = read_sinogram(sino_path, &sidecar);
  GeometrySpec gs = sidecar_geometry(sidecar, sino_path);
  std::shared_ptr<const ProjectionMap> geometry = build_geometry(gs);

  ModelParams base = default_model_params(pj.value("model", "ct"));
  if (pj.contains("lambda")) base.lambda = json_number(pj, "lambda", a.problem);
  base.positivity = pj.value("positivity", false);
  std::uint64_t seed = pj.value("seed", std::uint64_t{0});

  json solver_overrides = pj.value("solvers", json::object());
  std::vector<BenchSolverSpec> specs;
  for (const std::string& name : names) {
    ModelParams p = base;
    if (solver_overrides.contains(name))
      p = override_params(p, solver_overrides[name], a.problem + ": solvers." + name);
    specs.push_back({name, p});
  }
  ModelParams ref_params = specs.front().params;
  for (const BenchSolverSpec& s : specs)
    if (s.name == "ncs") ref_params = s.params;
  if (pj.contains("reference"))
    ref_params = override_params(ref_params, pj["reference"], a.problem + ": reference");

  std::string mask_mode = pj.value("mask", "auto");
  std::optional<SpectralMask> meas;
  if (mask_mode == "auto") {
    meas = measurement_mask(gs, *geometry, ref_params.dc,
                            static_cast<int>(pj.value("mask_samples", 8)), seed);
  } else if (mask_mode != "none") {
    SpectralMask m = read_mask((base_dir / mask_mode).string());
    if (m.n != gs.image_size)
      throw ShapeMismatchError(mask_mode + ": mask size does not match the image");
    meas = m;
  }

  std::int64_t ref_iters = a.ref_iters > 0 ? a.ref_iters : 50ll * a.iters;
  std::filesystem::path out_dir(a.out);
  std::filesystem::create_directories(out_dir);
  BenchOutcome outcome = run_bench(sino, gs, specs, ref_params, a.iters, ref_iters,
                                   a.threshold, meas, (out_dir / "cache").string());

  json summary = {{"threshold", a.threshold},
                  {"reference",
                   {{"iters", ref_iters},
                    {"objective", outcome.reference.objective},
                    {"converged", outcome.reference.converged}}},
                  {"solvers", json::object()}};
  if (!outcome.reference.converged)
    summary["reference"]["warning"] =
        "reference objective was still changing by more than 1e-12 relative";
  json outputs = {{"summary", (out_dir / "summary.json").string()}};
  for (const std::string& name : outcome.names) {
    const SolveResult& res = outcome.runs.at(name);
    std::string csv = (out_dir / (name + ".csv")).string();
    write_record_csv(csv, res.record);
    outputs[name + "_csv"] = csv;
    std::int64_t hit = outcome.iters_to_threshold.at(name);
    summary["solvers"][name] = {
        {"iters_to_threshold", hit < 0 ? json(nullptr) : json(hit)},
        {"axis", name == "admm" ? "cg_iterations" : "iterations"},
        {"final_objective", res.objective},
        {"final_rel_subopt", res.record.rows.back().rel_subopt},
        {"warnings", res.record.warnings}};
  }
  {
    std::ofstream out(out_dir / "summary.json", std::ios::trunc);
    if (!out) throw IoError("cannot write bench summary");
    out << summary.dump(2) << '\n';
  }

  json params = {{"problem", a.problem}, {"solvers", a.solvers},
                 {"iters", a.iters},     {"ref_iters", ref_iters},
                 {"threshold", a.threshold}, {"mask", mask_mode},
                 {"model", base.model},  {"lambda", base.lambda},
                 {"positivity", base.positivity}};
  save_manifest((out_dir / "manifest.json").string(), "bench", seed, params,
                {{"problem", a.problem}, {"sinogram", sino_path}}, outputs, timer.ms());
  return 0;
}

// -------------------------------------------------------------- est. mask

struct EstimateMaskArgs {
  std::string op, in, out;
  int size = 0;
  int angles = 60;
  int detectors = 0;
  int samples = 16;
  std::uint64_t seed = 0;
};

int cmd_estimate_mask(const EstimateMaskArgs& a) {
  WallTimer timer;
  if (a.samples < 1) throw UsageError("--samples must be at least 1");

  std::shared_ptr<const ProjectionMap> map;
  int n = 0;
  if (a.op == "file") {
    if (a.in.empty()) throw UsageError("--operator file needs --in with a coo file");
    auto sparse = std::make_shared<SparseMap>(read_coo(a.in));
    n = sparse->n();
    if (a.size > 0 && a.size != n)
      throw UsageError("--size disagrees with the operator's image size");
    map = sparse;
  } else {
    if (a.size < 1) throw UsageError("--size is required for generated geometry");
    n = a.size;
    map = build_geometry({a.op, a.size, a.angles, a.detectors});
  }

  EmpiricalMask em = empirical_mask(NormalMap(map), n, a.samples, a.seed);
  json diag = {{"operator", a.op},
               {"samples", a.samples},
               {"seed", a.seed},
               {"dead_bin_count", em.dead_bins.size()}};
  write_mask(a.out, em.mask, {{"diagnostics", diag}});

  json params = {{"operator", a.op},   {"size", n},
                 {"angles", a.angles}, {"detectors", a.detectors},
                 {"samples", a.samples}};
  json inputs = a.op == "file" ? json{{"coo", a.in}} : json::object();
  params["dead_bin_count"] = em.dead_bins.size();
  save_manifest(a.out + ".manifest.json", "estimate-mask", a.seed, params, inputs,
                {{"mask", a.out}}, timer.ms());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tomographic reconstruction with near-circulant splitting"};
  app.set_version_flag("--version", NCSTOMO_VERSION);
  app.require_subcommand(1);

  PhantomArgs ph;
  CLI::App* phantom = app.add_subcommand("phantom", "rasterize an ellipse phantom");
  phantom->add_option("--size", ph.size, "image side length")->required();
  phantom->add_option("--out", ph.out, "output image path")->required();
  phantom->add_option("--spec", ph.spec, "json ellipse list (default: shepp-logan)");
  phantom->add_option("--pgm", ph.pgm, "also export an 8-bit preview");

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "project an image and add noise");
  simulate->add_option("--in", sim.in, "input image")->required();
  simulate->add_option("--geometry", sim.geometry, "parallel or fan")
      ->check(CLI::IsMember({"parallel", "fan"}));
  simulate->add_option("--angles", sim.angles, "number of views")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--detectors", sim.detectors, "bins per view (0 = auto)");
  simulate->add_option("--noise", sim.noise, "gaussian[:SIGMA] or poisson:SCALE")
      ->required();
  simulate->add_option("--seed", sim.seed, "rng seed");
  simulate->add_option("--out", sim.out, "output sinogram path")->required();

  ReconstructArgs rec;
  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "solve the regularized inverse problem");
  reconstruct->add_option("--sino", rec.sino, "input sinogram")->required();
  reconstruct->add_option("--solver", rec.solver, "ncs, pdhg, or admm")
      ->required()
      ->check(CLI::IsMember({"ncs", "pdhg", "admm"}));
  reconstruct->add_option("--model", rec.model, "ct or pet")
      ->required()
      ->check(CLI::IsMember({"ct", "pet"}));
  CLI::Option* o_alpha = reconstruct->add_option("--alpha", rec.alpha, "dual step size");
  CLI::Option* o_beta = reconstruct->add_option("--beta", rec.beta, "gradient weight");
  CLI::Option* o_gamma = reconstruct->add_option("--gamma", rec.gamma, "metric shift");
  CLI::Option* o_lambda =
      reconstruct->add_option("--lambda", rec.lambda, "tv regularization weight");
  CLI::Option* o_dc = reconstruct->add_option("--dc", rec.dc, "mask dc bin value");
  reconstruct->add_option("--iters", rec.iters, "iteration count")
      ->check(CLI::NonNegativeNumber);
  reconstruct->add_flag("--positivity", rec.positivity, "constrain x >= 0");
  reconstruct->add_option("--mask", rec.mask, "auto or a mask file (ncs only)");
  reconstruct->add_option("--cg-iters", rec.cg_iters, "inner cg iterations (admm)")
      ->check(CLI::PositiveNumber);
  reconstruct->add_option("--record-every", rec.record_every, "record row spacing")
      ->check(CLI::PositiveNumber);
  reconstruct->add_option("--mask-samples", rec.mask_samples, "probes for auto masks")
      ->check(CLI::PositiveNumber);
  reconstruct->add_option("--seed", rec.seed, "rng seed");
  reconstruct->add_option("--out", rec.out, "output image path")->required();
  reconstruct->add_option("--log", rec.log, "convergence csv (default OUT.csv)");
  reconstruct->add_option("--pgm", rec.pgm, "also export an 8-bit preview");

  BenchArgs ben;
  CLI::App* bench = app.add_subcommand("bench", "compare solvers against a reference");
  bench->add_option("--problem", ben.problem, "problem description json")->required();
  bench->add_option("--solvers", ben.solvers, "comma-separated solver list");
  bench->add_option("--iters", ben.iters, "iterations per solver")
      ->check(CLI::PositiveNumber);
  bench->add_option("--ref-iters", ben.ref_iters, "reference iterations (0 = 50x)");
  bench->add_option("--threshold", ben.threshold, "relative suboptimality target");
  bench->add_option("--out", ben.out, "output directory")->required();

  EstimateMaskArgs est;
  CLI::App* estimate =
      app.add_subcommand("estimate-mask", "probe a normal operator's circulant part");
  estimate->add_option("--operator", est.op, "parallel, fan, or file")
      ->required()
      ->check(CLI::IsMember({"parallel", "fan", "file"}));
  estimate->add_option("--in", est.in, "coo operator file (with --operator file)");
  estimate->add_option("--size", est.size, "image side length");
  estimate->add_option("--angles", est.angles, "number of views");
  estimate->add_option("--detectors", est.detectors, "bins per view (0 = auto)");
  estimate->add_option("--samples", est.samples, "number of probe images");
  estimate->add_option("--seed", est.seed, "rng seed");
  estimate->add_option("--out", est.out, "output mask path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    env_thread_cap();
    rec.has_alpha = o_alpha->count() > 0;
    rec.has_beta = o_beta->count() > 0;
    rec.has_gamma = o_gamma->count() > 0;
    rec.has_lambda = o_lambda->count() > 0;
    rec.has_dc = o_dc->count() > 0;
    if (phantom->parsed()) return cmd_phantom(ph);
    if (simulate->parsed()) return cmd_simulate(sim);
    if (reconstruct->parsed()) return cmd_reconstruct(rec);
    if (bench->parsed()) return cmd_bench(ben);
    if (estimate->parsed()) return cmd_estimate_mask(est);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return 4;
  } catch (const IoError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
