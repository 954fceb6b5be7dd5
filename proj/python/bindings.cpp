#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncstomo/circulant.hpp"
#include "ncstomo/image.hpp"
#include "ncstomo/phantom.hpp"
#include "ncstomo/pipeline.hpp"
#include "ncstomo/solvers.hpp"

namespace py = pybind11;
using namespace ncstomo;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

ImageGrid image_from_array(const DoubleArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1) || a.shape(0) < 1)
    throw std::invalid_argument("image must be a square 2-D array");
  ImageGrid img(static_cast<int>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (int i = 0; i < img.n; ++i)
    for (int j = 0; j < img.n; ++j) img.at(i, j) = r(i, j);
  return img;
}

py::array_t<double> image_to_array(const ImageGrid& img) {
  py::array_t<double> a({img.n, img.n});
  auto w = a.mutable_unchecked<2>();
  for (int i = 0; i < img.n; ++i)
    for (int j = 0; j < img.n; ++j) w(i, j) = img.at(i, j);
  return a;
}

Sinogram sino_from_array(const DoubleArray& a, const ProjectionMap& geometry) {
  if (a.ndim() != 2)
    throw std::invalid_argument("sinogram must be a 2-D array (angles, detectors)");
  if (a.shape(0) != geometry.n_angles() || a.shape(1) != geometry.n_detectors())
    throw std::invalid_argument("sinogram shape does not match the geometry");
  Sinogram s(geometry.n_angles(), geometry.n_detectors());
  auto r = a.unchecked<2>();
  for (int i = 0; i < s.n_angles; ++i)
    for (int j = 0; j < s.n_det; ++j) s.at(i, j) = r(i, j);
  return s;
}

py::array_t<double> sino_to_array(const Sinogram& s) {
  py::array_t<double> a({s.n_angles, s.n_det});
  auto w = a.mutable_unchecked<2>();
  for (int i = 0; i < s.n_angles; ++i)
    for (int j = 0; j < s.n_det; ++j) w(i, j) = s.at(i, j);
  return a;
}

py::array_t<std::complex<double>> mask_to_array(const SpectralMask& m) {
  py::array_t<std::complex<double>> a({m.n, m.n});
  auto w = a.mutable_unchecked<2>();
  for (int j = 0; j < m.n; ++j)
    for (int k = 0; k < m.n; ++k) w(j, k) = m.at(j, k);
  return a;
}

SpectralMask mask_from_array(const ComplexArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1) || a.shape(0) < 1)
    throw std::invalid_argument("mask must be a square 2-D complex array");
  SpectralMask m(static_cast<int>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (int j = 0; j < m.n; ++j)
    for (int k = 0; k < m.n; ++k) m.at(j, k) = r(j, k);
  return m;
}

py::array_t<double> records_to_array(const std::vector<RecordRow>& rows) {
  py::array_t<double> a({static_cast<py::ssize_t>(rows.size()), py::ssize_t{5}});
  auto w = a.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(rows.size()); ++i) {
    const RecordRow& r = rows[static_cast<std::size_t>(i)];
    w(i, 0) = static_cast<double>(r.iter);
    w(i, 1) = r.objective;
    w(i, 2) = r.rel_subopt;
    w(i, 3) = r.seminorm_step;
    w(i, 4) = r.wall_ms;
  }
  return a;
}

struct PyGeometry {
  GeometrySpec spec;
  std::shared_ptr<const ProjectionMap> map;

  PyGeometry(const std::string& kind, int image_size, int angles, int detectors) {
    spec.kind = kind;
    spec.image_size = image_size;
    spec.angles = angles;
    spec.detectors = detectors;
    map = build_geometry(spec);
  }
};

struct PyResult {
  py::array_t<double> image;
  double objective = 0.0;
  py::array_t<double> records;
  std::vector<std::string> warnings;
  std::int64_t iters = 0;
};

ModelParams resolve_params(const std::string& model, std::optional<double> alpha,
                           std::optional<double> beta, std::optional<double> gamma,
                           std::optional<double> lam, std::optional<double> dc,
                           bool positivity, std::optional<int> cg_iters) {
  ModelParams p = default_model_params(model);
  if (alpha) p.alpha = *alpha;
  if (beta) p.beta = *beta;
  if (gamma) p.gamma = *gamma;
  if (lam) p.lambda = *lam;
  if (dc) p.dc = *dc;
  if (cg_iters) p.cg_iters = *cg_iters;
  p.positivity = positivity;
  return p;
}

PyResult reconstruct(const DoubleArray& sino_arr, const PyGeometry& g,
                     const std::string& model, const std::string& solver, int iters,
                     std::optional<double> alpha, std::optional<double> beta,
                     std::optional<double> gamma, std::optional<double> lam,
                     std::optional<double> dc, bool positivity,
                     std::optional<int> cg_iters, const py::object& mask,
                     int mask_samples, std::uint64_t seed, int record_every) {
  if (iters < 0) throw std::invalid_argument("iters must be nonnegative");
  ModelParams p = resolve_params(model, alpha, beta, gamma, lam, dc, positivity, cg_iters);
  Sinogram sino = sino_from_array(sino_arr, *g.map);

  std::optional<SpectralMask> metric;
  if (!mask.is_none()) {
    if (solver != "ncs")
      throw std::invalid_argument("mask only applies to the ncs solver");
    SpectralMask meas;
    if (py::isinstance<py::str>(mask)) {
      if (mask.cast<std::string>() != "auto")
        throw std::invalid_argument("mask must be None, \"auto\", or a complex array");
      meas = measurement_mask(g.spec, *g.map, p.dc, mask_samples, seed);
    } else {
      meas = mask_from_array(mask.cast<ComplexArray>());
      if (meas.n != g.spec.image_size)
        throw std::invalid_argument("mask size does not match the geometry");
    }
    metric = metric_mask(meas, p);
  }

  SplitProblem prob = assemble_problem(sino, g.map, p);
  SolverConfig cfg = make_config(p, iters, record_every, seed, metric);
  SolveResult res = [&] {
    py::gil_scoped_release release;
    return run_named_solver(solver, prob, cfg, p.cg_iters);
  }();

  PyResult out;
  out.image = image_to_array(res.state.x);
  out.objective = res.objective;
  out.records = records_to_array(res.record.rows);
  out.warnings = res.record.warnings;
  out.iters = res.state.iter;
  return out;
}

}  // namespace

PYBIND11_MODULE(ncstomo, m) {
  m.doc() = "Tomographic reconstruction by near-circulant splitting";
  m.attr("__version__") = NCSTOMO_VERSION;

  py::register_exception<DivergenceError>(m, "DivergenceError");

  py::class_<Ellipse>(m, "Ellipse")
      .def(py::init([](double intensity, double x0, double y0, double a, double b,
                       double rot_deg) {
             return Ellipse{intensity, x0, y0, a, b, rot_deg};
           }),
           py::arg("intensity"), py::arg("x0"), py::arg("y0"), py::arg("a"),
           py::arg("b"), py::arg("rot_deg") = 0.0)
      .def_readwrite("intensity", &Ellipse::intensity)
      .def_readwrite("x0", &Ellipse::x0)
      .def_readwrite("y0", &Ellipse::y0)
      .def_readwrite("a", &Ellipse::a)
      .def_readwrite("b", &Ellipse::b)
      .def_readwrite("rot_deg", &Ellipse::rot_deg)
      .def("__repr__", [](const Ellipse& e) {
        return "Ellipse(intensity=" + std::to_string(e.intensity) +
               ", x0=" + std::to_string(e.x0) + ", y0=" + std::to_string(e.y0) +
               ", a=" + std::to_string(e.a) + ", b=" + std::to_string(e.b) +
               ", rot_deg=" + std::to_string(e.rot_deg) + ")";
      });

  m.def(
      "shepp_logan",
      [](int n) { return image_to_array(make_phantom(PhantomSpec::shepp_logan(n))); },
      py::arg("n"), "Classic head phantom on an n x n grid, peak intensity 2.");

  m.def(
      "make_phantom",
      [](int n, const std::vector<Ellipse>& ellipses) {
        return image_to_array(make_phantom(PhantomSpec{n, ellipses}));
      },
      py::arg("n"), py::arg("ellipses"),
      "Rasterize additive ellipse indicators sampled at pixel centers.");

  py::class_<PyGeometry>(m, "Geometry")
      .def(py::init<const std::string&, int, int, int>(), py::arg("kind") = "parallel",
           py::arg("image_size") = 0, py::arg("angles") = 60, py::arg("detectors") = 0,
           "Acquisition geometry; detectors=0 picks the default width.")
      .def_property_readonly("kind", [](const PyGeometry& g) { return g.spec.kind; })
      .def_property_readonly("image_size",
                             [](const PyGeometry& g) { return g.spec.image_size; })
      .def_property_readonly("n_angles",
                             [](const PyGeometry& g) { return g.map->n_angles(); })
      .def_property_readonly("n_detectors",
                             [](const PyGeometry& g) { return g.map->n_detectors(); })
      .def(
          "forward",
          [](const PyGeometry& g, const DoubleArray& image) {
            ImageGrid img = image_from_array(image);
            if (img.n != g.spec.image_size)
              throw std::invalid_argument("image size does not match the geometry");
            Sinogram s(g.map->n_angles(), g.map->n_detectors());
            py::gil_scoped_release release;
            g.map->forward(img.v, s.v);
            py::gil_scoped_acquire acquire;
            return sino_to_array(s);
          },
          py::arg("image"), "Project an image to a (angles, detectors) sinogram.")
      .def(
          "adjoint",
          [](const PyGeometry& g, const DoubleArray& sino) {
            Sinogram s = sino_from_array(sino, *g.map);
            ImageGrid img(g.spec.image_size);
            py::gil_scoped_release release;
            g.map->adjoint(s.v, img.v);
            py::gil_scoped_acquire acquire;
            return image_to_array(img);
          },
          py::arg("sino"), "Backproject a sinogram to an image.")
      .def("__repr__", [](const PyGeometry& g) {
        return "Geometry(kind=\"" + g.spec.kind +
               "\", image_size=" + std::to_string(g.spec.image_size) +
               ", angles=" + std::to_string(g.map->n_angles()) +
               ", detectors=" + std::to_string(g.map->n_detectors()) + ")";
      });

  m.def(
      "simulate_ct",
      [](const DoubleArray& image, const PyGeometry& g, double sigma, std::uint64_t seed) {
        ImageGrid img = image_from_array(image);
        if (img.n != g.spec.image_size)
          throw std::invalid_argument("image size does not match the geometry");
        return sino_to_array(simulate_ct(img, *g.map, sigma, seed));
      },
      py::arg("image"), py::arg("geometry"), py::arg("sigma") = 0.0, py::arg("seed") = 0,
      "Project and add independent Gaussian noise per bin.");

  m.def(
      "simulate_pet",
      [](const DoubleArray& image, const PyGeometry& g, double exposure_scale,
         std::uint64_t seed) {
        ImageGrid img = image_from_array(image);
        if (img.n != g.spec.image_size)
          throw std::invalid_argument("image size does not match the geometry");
        return sino_to_array(simulate_pet(img, *g.map, exposure_scale, seed));
      },
      py::arg("image"), py::arg("geometry"), py::arg("exposure_scale") = 1.0,
      py::arg("seed") = 0, "Draw Poisson counts with mean exposure_scale * projection.");

  m.def(
      "default_params",
      [](const std::string& model) {
        ModelParams p = default_model_params(model);
        py::dict d;
        d["model"] = p.model;
        d["alpha"] = p.alpha;
        d["beta"] = p.beta;
        d["gamma"] = p.gamma;
        d["lambda"] = p.lambda;
        d["dc"] = p.dc;
        d["positivity"] = p.positivity;
        d["cg_iters"] = p.cg_iters;
        return d;
      },
      py::arg("model") = "ct", "Default splitting parameters for \"ct\" or \"pet\".");

  m.def(
      "measurement_mask",
      [](const PyGeometry& g, double dc, int samples, std::uint64_t seed) {
        return mask_to_array(measurement_mask(g.spec, *g.map, dc, samples, seed));
      },
      py::arg("geometry"), py::arg("dc") = 1e-1, py::arg("samples") = 8,
      py::arg("seed") = 0,
      "Circulant surrogate of the measurement normal operator, as DFT-bin "
      "eigenvalues.");

  py::class_<PyResult>(m, "Result")
      .def_readonly("image", &PyResult::image)
      .def_readonly("objective", &PyResult::objective)
      .def_readonly("records", &PyResult::records)
      .def_readonly("warnings", &PyResult::warnings)
      .def_readonly("iters", &PyResult::iters)
      .def_property_readonly_static(
          "record_columns",
          [](const py::object&) {
            return py::make_tuple("iter", "objective", "rel_subopt", "seminorm_step",
                                  "wall_ms");
          })
      .def("__repr__", [](const PyResult& r) {
        return "Result(iters=" + std::to_string(r.iters) +
               ", objective=" + std::to_string(r.objective) + ")";
      });

  m.def("reconstruct", &reconstruct, py::arg("sino"), py::arg("geometry"),
        py::arg("model") = "ct", py::arg("solver") = "ncs", py::arg("iters") = 100,
        py::arg("alpha") = py::none(), py::arg("beta") = py::none(),
        py::arg("gamma") = py::none(), py::arg("lambda_") = py::none(),
        py::arg("dc") = py::none(), py::arg("positivity") = false,
        py::arg("cg_iters") = py::none(), py::arg("mask") = py::none(),
        py::arg("mask_samples") = 8, py::arg("seed") = 0, py::arg("record_every") = 1,
        "Solve the variational model on a sinogram. mask may be None, \"auto\", or "
        "a complex measurement-mask array (ncs only); unspecified parameters take "
        "the model defaults.");
}
