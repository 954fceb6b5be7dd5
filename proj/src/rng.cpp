#include "ncstomo/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ncstomo {

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : state_(splitmix64_mix(splitmix64_mix(seed) + stream_id)) {}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RngStream::next_double() {
  std::uint64_t bits = next_u64() >> 11;
  if (bits == 0) bits = 1;
  return static_cast<double>(bits) * 0x1.0p-53;
}

double RngStream::next_normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_normal_;
  }
  double u1 = next_double();
  double u2 = next_double();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(t);
  have_cached_ = true;
  return r * std::cos(t);
}

std::uint64_t RngStream::next_poisson(double mean) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Knuth inversion: count uniforms until their product drops below e^-mean.
    double limit = std::exp(-mean);
    double prod = 1.0;
    std::uint64_t k = 0;
    for (;;) {
      prod *= next_double();
      if (prod < limit) return k;
      ++k;
    }
  }
  // PTRS rejection for large means.
  double b = 0.931 + 2.53 * std::sqrt(mean);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u = next_double() - 0.5;
    double v = next_double();
    double us = 0.5 - std::abs(u);
    double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    double rhs = -mean + kf * std::log(mean) - std::lgamma(kf + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
  }
}

}  // namespace ncstomo
