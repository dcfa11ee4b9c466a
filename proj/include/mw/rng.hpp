#pragma once

#include <cstdint>
#include <string>

namespace mw {

// Counter-based pseudo-random stream keyed by (master_seed, stream_id).
// Every draw is a pure function of (key, counter); streams are value types
// that can be copied, forked and moved across threads without shared state.
// Identical (master_seed, stream_id) pairs reproduce bit-identical sequences.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Derives an independent stream; (master_seed, id) keys the new sequence.
  RngStream substream(std::uint64_t id) const;

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1).
  double uniform();

  // Standard normal via Box-Muller (one value per call, no cached state).
  double normal();

  // Gamma(shape, scale 1), shape > 0, Marsaglia-Tsang.
  double gamma(double shape);

 private:
  std::uint64_t key_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
};

// Default master seed for tools: MW_SEED environment variable, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback = 20240101ULL);

}  // namespace mw
