// Copyright 2026 The DP-ATE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPATE_RANDOM_H_
#define DPATE_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace dpate {

// Named stream identifiers.  Every random decision in the pipeline draws
// from its own stream, so a component cannot perturb another component's
// draws by consuming a different number of values.
namespace streams {
inline constexpr std::uint64_t kData = 1;
inline constexpr std::uint64_t kPipeline = 2;
inline constexpr std::uint64_t kSplit = 3;
inline constexpr std::uint64_t kFit = 4;
inline constexpr std::uint64_t kSensitivity = 5;
inline constexpr std::uint64_t kAteNoise = 6;
inline constexpr std::uint64_t kVarianceNoise = 7;
inline constexpr std::uint64_t kBootstrap = 8;
inline constexpr std::uint64_t kDiffMeans = 9;
}  // namespace streams

// A (seed, stream) pair identifying one reproducible random sequence.
// Copies are cheap; the generator state lives in RandomEngine.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Derives a sub-stream for a named purpose.  Children of distinct purposes
  // (and of distinct parents) do not collide in practice: the stream id is
  // mixed through a 64-bit finalizer.
  RngStream Child(std::uint64_t purpose) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// Deterministic generator over one RngStream.  All distributions are
// implemented in terms of raw 64-bit outputs of std::mt19937_64, whose
// behaviour the standard pins down bit-for-bit, so sequences are identical
// across platforms and standard libraries.
class RandomEngine {
 public:
  explicit RandomEngine(const RngStream& stream);

  // Uniform draw in the open interval (0, 1).
  double Uniform();

  // Uniform draw in [lo, hi].
  double UniformIn(double lo, double hi);

  // Standard normal draw via the quantile transform, so the output is an
  // exact deterministic function of one uniform draw.
  double Gaussian();

  // Uniform integer in [0, n).  Requires n >= 1.
  std::uint64_t Bounded(std::uint64_t n);

  // Fisher-Yates shuffle with draws from this engine.
  void Shuffle(std::vector<std::int64_t>& values);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpate

#endif  // DPATE_RANDOM_H_
