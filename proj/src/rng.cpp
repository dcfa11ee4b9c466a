#include "mw/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace mw {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Finalizer of splitmix64 (Stafford mix13); full 64-bit avalanche.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  key_ = mix64(mix64(master_seed + kGolden) ^ (stream_id * 0xD1342543DE82EF95ULL + 1));
}

RngStream RngStream::substream(std::uint64_t id) const {
  return RngStream(mix64(key_), id);
}

std::uint64_t RngStream::next_u64() {
  return mix64(key_ + (++counter_) * kGolden);
}

double RngStream::uniform() {
  // 53 random bits into (0,1); never returns 0 or 1 exactly.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("RngStream::gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost: X = Gamma(shape+1) * U^{1/shape}.
    const double u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* s = std::getenv("MW_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0') return static_cast<std::uint64_t>(v);
  }
  return fallback;
}

}  // namespace mw
