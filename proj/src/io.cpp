#include "ncstomo/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace ncstomo {

static_assert(std::endian::native == std::endian::little,
              "raw payloads are little-endian; big-endian hosts are unsupported");

namespace {

void write_bytes(const std::string& path, const void* data, std::size_t len) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
  if (!out) throw IoError("short write to " + path);
}

std::vector<char> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + path);
  std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<char> buf(static_cast<std::size_t>(size));
  in.read(buf.data(), size);
  if (!in) throw IoError("short read from " + path);
  return buf;
}

void write_sidecar(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path + ".json", std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + ".json for writing");
  out << j.dump(2) << '\n';
}

void check_payload(const std::string& path, std::size_t have, std::size_t want) {
  if (have != want)
    throw TruncatedPayloadError(path + ": payload holds " + std::to_string(have) +
                                " bytes, shape requires " + std::to_string(want));
}

}  // namespace

nlohmann::json read_sidecar(const std::string& path) {
  std::ifstream in(path + ".json");
  if (!in) throw MalformedHeaderError("missing sidecar " + path + ".json");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedHeaderError(path + ".json: " + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw MalformedHeaderError(path + ".json: missing \"type\"");
  return j;
}

void write_image(const std::string& path, const ImageGrid& img) {
  write_bytes(path, img.v.data(), img.v.size() * sizeof(double));
  write_sidecar(path, {{"type", "image"}, {"shape", {img.n, img.n}}});
}

ImageGrid read_image(const std::string& path) {
  nlohmann::json j = read_sidecar(path);
  if (j["type"] != "image")
    throw ShapeMismatchError(path + ": sidecar type is not \"image\"");
  if (!j.contains("shape") || !j["shape"].is_array() || j["shape"].size() != 2)
    throw MalformedHeaderError(path + ".json: missing 2-element \"shape\"");
  long long rows = j["shape"][0].get<long long>();
  long long cols = j["shape"][1].get<long long>();
  if (rows < 1 || rows != cols)
    throw ShapeMismatchError(path + ": image shape must be square and positive");
  std::vector<char> buf = read_bytes(path);
  ImageGrid img(static_cast<int>(rows));
  check_payload(path, buf.size(), img.v.size() * sizeof(double));
  std::memcpy(img.v.data(), buf.data(), buf.size());
  return img;
}

void write_sinogram(const std::string& path, const Sinogram& sino,
                    const nlohmann::json& extra) {
  write_bytes(path, sino.v.data(), sino.v.size() * sizeof(double));
  nlohmann::json j = extra;
  j["type"] = "sinogram";
  j["shape"] = {sino.n_angles, sino.n_det};
  write_sidecar(path, j);
}

Sinogram read_sinogram(const std::string& path, nlohmann::json* sidecar) {
  nlohmann::json j = read_sidecar(path);
  if (j["type"] != "sinogram")
    throw ShapeMismatchError(path + ": sidecar type is not \"sinogram\"");
  if (!j.contains("shape") || !j["shape"].is_array() || j["shape"].size() != 2)
    throw MalformedHeaderError(path + ".json: missing 2-element \"shape\"");
  long long angles = j["shape"][0].get<long long>();
  long long det = j["shape"][1].get<long long>();
  if (angles < 1 || det < 1)
    throw ShapeMismatchError(path + ": sinogram shape must be positive");
  std::vector<char> buf = read_bytes(path);
  Sinogram sino(static_cast<int>(angles), static_cast<int>(det));
  check_payload(path, buf.size(), sino.v.size() * sizeof(double));
  std::memcpy(sino.v.data(), buf.data(), buf.size());
  if (sidecar) *sidecar = j;
  return sino;
}

void write_mask(const std::string& path, const SpectralMask& mask,
                const nlohmann::json& extra) {
  std::size_t total = mask.h.size();
  std::vector<double> planes(2 * total);
  for (std::size_t i = 0; i < total; ++i) {
    planes[i] = mask.h[i].real();
    planes[total + i] = mask.h[i].imag();
  }
  write_bytes(path, planes.data(), planes.size() * sizeof(double));
  nlohmann::json j = extra;
  j["type"] = "mask";
  j["N"] = mask.n;
  j["convention"] = "unnormalized-forward";
  write_sidecar(path, j);
}

SpectralMask read_mask(const std::string& path, nlohmann::json* sidecar) {
  nlohmann::json j = read_sidecar(path);
  if (j["type"] != "mask") throw ShapeMismatchError(path + ": sidecar type is not \"mask\"");
  if (!j.contains("N") || !j["N"].is_number_integer())
    throw MalformedHeaderError(path + ".json: missing integer \"N\"");
  long long n = j["N"].get<long long>();
  if (n < 1) throw ShapeMismatchError(path + ": mask size must be positive");
  std::vector<char> buf = read_bytes(path);
  SpectralMask mask(static_cast<int>(n));
  std::size_t total = mask.h.size();
  check_payload(path, buf.size(), 2 * total * sizeof(double));
  const double* planes = reinterpret_cast<const double*>(buf.data());
  for (std::size_t i = 0; i < total; ++i)
    mask.h[i] = {planes[i], planes[total + i]};
  if (sidecar) *sidecar = j;
  return mask;
}

void write_coo(const std::string& path, const SparseMap& map) {
  std::vector<CooTriplet> triplets = map.to_triplets();
  static_assert(sizeof(CooTriplet) == 24);
  write_bytes(path, triplets.data(), triplets.size() * sizeof(CooTriplet));
  write_sidecar(path, {{"type", "sparse-coo"},
                       {"shape", {map.range_size(), map.domain_size()}},
                       {"image_size", map.n()},
                       {"n_angles", map.n_angles()},
                       {"n_det", map.n_detectors()},
                       {"nnz", triplets.size()}});
}

SparseMap read_coo(const std::string& path) {
  nlohmann::json j = read_sidecar(path);
  if (j["type"] != "sparse-coo")
    throw ShapeMismatchError(path + ": sidecar type is not \"sparse-coo\"");
  for (const char* key : {"image_size", "n_angles", "n_det", "nnz"})
    if (!j.contains(key) || !j[key].is_number_integer())
      throw MalformedHeaderError(path + ".json: missing integer \"" + std::string(key) +
                                 "\"");
  long long n = j["image_size"].get<long long>();
  long long angles = j["n_angles"].get<long long>();
  long long det = j["n_det"].get<long long>();
  long long nnz = j["nnz"].get<long long>();
  if (n < 1 || angles < 1 || det < 1 || nnz < 0)
    throw ShapeMismatchError(path + ": nonpositive sparse dimensions");
  std::vector<char> buf = read_bytes(path);
  check_payload(path, buf.size(), static_cast<std::size_t>(nnz) * sizeof(CooTriplet));
  std::vector<CooTriplet> triplets(static_cast<std::size_t>(nnz));
  std::memcpy(triplets.data(), buf.data(), buf.size());
  try {
    return SparseMap(static_cast<int>(n), static_cast<int>(angles), static_cast<int>(det),
                     std::move(triplets));
  } catch (const std::invalid_argument& e) {
    throw ShapeMismatchError(path + ": " + e.what());
  }
}

void write_pgm(const std::string& path, const ImageGrid& img) {
  double lo = img.v.empty() ? 0.0 : img.v[0];
  double hi = lo;
  for (double v : img.v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n" << img.n << ' ' << img.n << "\n255\n";
  for (double v : img.v) {
    long g = hi > lo ? std::lround((v - lo) / (hi - lo) * 255.0) : std::lround(127.5);
    g = std::clamp(g, 0L, 255L);
    out.put(static_cast<char>(static_cast<unsigned char>(g)));
  }
  if (!out) throw IoError("short write to " + path);
}

void write_record_csv(const std::string& path, const ConvergenceRecord& record) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "iter,objective,rel_subopt,seminorm_step,wall_ms\n";
  char buf[256];
  for (const auto& row : record.rows) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(row.iter), row.objective, row.rel_subopt,
                  row.seminorm_step, row.wall_ms);
    out << buf;
  }
  if (!out) throw IoError("short write to " + path);
}

}  // namespace ncstomo
