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

#include "dpate/random.h"

#include "dpate/errors.h"
#include "dpate/normal.h"

namespace dpate {
namespace {

// SplitMix64 finalizer; avalanches all input bits into the output.
std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream RngStream::Child(std::uint64_t purpose) const {
  return RngStream(seed_, Mix64(stream_ ^ Mix64(purpose)));
}

RandomEngine::RandomEngine(const RngStream& stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(stream.seed()),
      static_cast<std::uint32_t>(stream.seed() >> 32),
      static_cast<std::uint32_t>(stream.stream()),
      static_cast<std::uint32_t>(stream.stream() >> 32),
  };
  engine_.seed(seq);
}

double RandomEngine::Uniform() {
  // 53 random bits centred in the unit interval: the result is always
  // strictly inside (0, 1), which the quantile transform requires.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RandomEngine::UniformIn(double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("uniform range must satisfy lo <= hi");
  return lo + (hi - lo) * Uniform();
}

double RandomEngine::Gaussian() { return NormalQuantile(Uniform()); }

std::uint64_t RandomEngine::Bounded(std::uint64_t n) {
  if (n == 0) throw DomainError("Bounded requires n >= 1");
  // Rejection below the largest multiple of n keeps the draw unbiased and
  // the consumed sequence a deterministic function of the engine output.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % n;
}

void RandomEngine::Shuffle(std::vector<std::int64_t>& values) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(Bounded(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace dpate
