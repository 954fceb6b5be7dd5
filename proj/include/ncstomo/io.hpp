#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ncstomo/circulant.hpp"
#include "ncstomo/image.hpp"
#include "ncstomo/solvers.hpp"
#include "ncstomo/sparse.hpp"

namespace ncstomo {

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Sidecar missing, unparseable, or missing required keys.
class MalformedHeaderError : public IoError {
  using IoError::IoError;
};
/// Sidecar parses but declares a type or shape the reader cannot accept.
class ShapeMismatchError : public IoError {
  using IoError::IoError;
};
/// Payload shorter or longer than the declared shape requires.
class TruncatedPayloadError : public IoError {
  using IoError::IoError;
};

/// All binary payloads are raw little-endian float64 (int64 for sparse
/// indices), row-major, with a JSON sidecar at path + ".json".
void write_image(const std::string& path, const ImageGrid& img);
ImageGrid read_image(const std::string& path);

void write_sinogram(const std::string& path, const Sinogram& sino,
                    const nlohmann::json& extra = nlohmann::json::object());
Sinogram read_sinogram(const std::string& path, nlohmann::json* sidecar = nullptr);

/// Mask payload is the real plane then the imaginary plane, N*N each.
void write_mask(const std::string& path, const SpectralMask& mask,
                const nlohmann::json& extra = nlohmann::json::object());
SpectralMask read_mask(const std::string& path, nlohmann::json* sidecar = nullptr);

/// Sparse operator as (int64 row, int64 col, float64 value) records.
void write_coo(const std::string& path, const SparseMap& map);
SparseMap read_coo(const std::string& path);

/// 8-bit binary PGM with a min-max window; a constant image maps to 128.
void write_pgm(const std::string& path, const ImageGrid& img);

/// CSV with header iter,objective,rel_subopt,seminorm_step,wall_ms and
/// full-precision (%.17g) values.
void write_record_csv(const std::string& path, const ConvergenceRecord& record);

nlohmann::json read_sidecar(const std::string& path);

}  // namespace ncstomo
