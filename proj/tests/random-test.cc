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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dpate/random.h"

namespace dpate {
namespace {

TEST_CASE("identical streams replay identical sequences") {
  RandomEngine a(RngStream{42, 7});
  RandomEngine b(RngStream{42, 7});
  for (int i = 0; i < 1000; ++i) CHECK(a.Uniform() == b.Uniform());
}

TEST_CASE("different streams and seeds decouple") {
  RandomEngine a(RngStream{42, 7});
  RandomEngine b(RngStream{42, 8});
  RandomEngine c(RngStream{43, 7});
  bool differs_ab = false;
  bool differs_ac = false;
  for (int i = 0; i < 16; ++i) {
    const double ua = a.Uniform();
    differs_ab = differs_ab || ua != b.Uniform();
    differs_ac = differs_ac || ua != c.Uniform();
  }
  CHECK(differs_ab);
  CHECK(differs_ac);
}

TEST_CASE("child streams are deterministic and distinct") {
  const RngStream parent{11, 3};
  CHECK(parent.Child(1).stream() == parent.Child(1).stream());
  CHECK(parent.Child(1).seed() == parent.seed());
  CHECK(parent.Child(1).stream() != parent.Child(2).stream());
  CHECK(parent.Child(1).stream() != parent.stream());
  // Children of different parents with the same purpose stay distinct.
  CHECK(RngStream{11, 3}.Child(1).stream() !=
        RngStream{11, 4}.Child(1).stream());
}

TEST_CASE("uniform draws stay inside the open unit interval") {
  RandomEngine engine(RngStream{1, 1});
  for (int i = 0; i < 100000; ++i) {
    const double u = engine.Uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform-in respects its bounds and is unbiased") {
  RandomEngine engine(RngStream{2, 1});
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = engine.UniformIn(-3.0, 5.0);
    REQUIRE(u >= -3.0);
    REQUIRE(u <= 5.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gaussian moments match the standard normal") {
  RandomEngine engine(RngStream{3, 1});
  const int n = 1000000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = engine.Gaussian();
    REQUIRE(std::isfinite(g));
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.005);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("gaussian tail frequencies are sane") {
  RandomEngine engine(RngStream{4, 1});
  const int n = 200000;
  int beyond_two = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(engine.Gaussian()) > 2.0) ++beyond_two;
  }
  // P(|Z| > 2) = 0.0455; allow +-6 binomial standard errors.
  const double freq = static_cast<double>(beyond_two) / n;
  CHECK(std::abs(freq - 0.0455) < 6.0 * std::sqrt(0.0455 * 0.9545 / n));
}

TEST_CASE("bounded draws cover [0, n) uniformly") {
  RandomEngine engine(RngStream{5, 1});
  const std::uint64_t buckets = 8;
  const int n = 80000;
  std::vector<int> counts(buckets, 0);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = engine.Bounded(buckets);
    REQUIRE(v < buckets);
    ++counts[v];
  }
  // Expected 10000 per bucket, sd ~94; +-600 is about 6 sigma.
  for (const int c : counts) CHECK(std::abs(c - 10000) < 600);
  // n = 1 is legal and constant.
  for (int i = 0; i < 10; ++i) CHECK(engine.Bounded(1) == 0);
}

TEST_CASE("shuffle is a deterministic permutation") {
  std::vector<std::int64_t> a(100);
  std::vector<std::int64_t> b(100);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  RandomEngine ea(RngStream{6, 2});
  RandomEngine eb(RngStream{6, 2});
  ea.Shuffle(a);
  eb.Shuffle(b);
  CHECK(a == b);

  std::vector<std::int64_t> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::int64_t i = 0; i < 100; ++i) CHECK(sorted[i] == i);

  // A different stream gives a different permutation.
  std::vector<std::int64_t> c(100);
  std::iota(c.begin(), c.end(), 0);
  RandomEngine ec(RngStream{6, 3});
  ec.Shuffle(c);
  CHECK(a != c);
}

}  // namespace
}  // namespace dpate
