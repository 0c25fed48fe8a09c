/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>

#include "xenqc/spinoe_model.hpp"

using namespace xenqc;

namespace {

SpinoeParams quiet() {
  SpinoeParams p;
  p.jitter = 0.0;
  return p;
}

} // namespace

TEST(EnhancementAt, InitialValue) {
  const Enhancement e = enhancement_at(quiet(), 0.0);
  EXPECT_EQ(e.h, -11.0);
  EXPECT_EQ(e.c, 18.0);
}

TEST(EnhancementAt, OneTimeConstant) {
  const Enhancement e = enhancement_at(quiet(), 900.0);
  EXPECT_NEAR(e.c, 1.0 + 17.0 / std::exp(1.0), 1e-12);
  EXPECT_NEAR(e.h, 1.0 - 12.0 / std::exp(1.0), 1e-12);
  EXPECT_NEAR(e.c, 7.254, 1e-3);
  EXPECT_NEAR(e.h, -3.415, 1e-3);
}

TEST(EnhancementAt, LongTimeIsThermal) {
  const Enhancement e = enhancement_at(quiet(), 1e7);
  EXPECT_NEAR(e.h, 1.0, 1e-12);
  EXPECT_NEAR(e.c, 1.0, 1e-12);
}

TEST(EnhancementAt, MonotoneApproachToOne) {
  double prev_h = -11.0, prev_c = 18.0;
  for (double t = 10.0; t < 5000.0; t += 10.0) {
    const Enhancement e = enhancement_at(quiet(), t);
    EXPECT_GT(e.h, prev_h);
    EXPECT_LT(e.c, prev_c);
    EXPECT_LT(e.h, 1.0);
    EXPECT_GT(e.c, 1.0);
    prev_h = e.h;
    prev_c = e.c;
  }
}

TEST(EnhancementAt, InvalidInputs) {
  EXPECT_THROW(enhancement_at(quiet(), -1.0), std::invalid_argument);
  SpinoeParams p = quiet();
  p.t1_xe_s = 0.0;
  EXPECT_THROW(enhancement_at(p, 1.0), std::invalid_argument);
  p = quiet();
  p.jitter = -0.1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(SampledEnhancement, JitterOnlyOnFreshSamples) {
  SpinoeParams p;
  p.jitter = 0.05;
  const Enhancement clean = enhancement_at(p, 25.0);
  EXPECT_EQ(sampled_enhancement(p, 25.0, false, 3), clean);
  const Enhancement fresh = sampled_enhancement(p, 25.0, true, 3);
  EXPECT_NE(fresh, clean);
  EXPECT_EQ(sampled_enhancement(p, 25.0, true, 3), fresh);
  EXPECT_NE(sampled_enhancement(p, 25.0, true, 4), fresh);
}

TEST(SampledEnhancement, SeedChangesDraw) {
  SpinoeParams a, b;
  b.seed = a.seed + 1;
  EXPECT_NE(sampled_enhancement(a, 0.0, true, 0), sampled_enhancement(b, 0.0, true, 0));
}

TEST(SampledEnhancement, JitterStatistics) {
  SpinoeParams p;
  p.jitter = 0.05;
  const double base = enhancement_at(p, 0.0).c;
  double s = 0.0, s2 = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const double r = sampled_enhancement(p, 0.0, true, static_cast<std::uint64_t>(i)).c / base - 1.0;
    s += r;
    s2 += r * r;
  }
  const double mean = s / n;
  const double sd = std::sqrt(s2 / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 4.0 * 0.05 / std::sqrt(double(n)));
  EXPECT_NEAR(sd, 0.05, 0.005);
}

TEST(SampleInitialState, MatchesEnhancedState) {
  const SpinoeParams p = quiet();
  const SpinSystemConfig cfg;
  const DensityMatrix rho = sample_initial_state(p, cfg, 0.0, true, 0);
  EXPECT_EQ(rho.matrix(), enhanced_state(cfg, -11.0, 18.0).matrix());
}

TEST(MakeSchedule, SingleSampleTimes) {
  const ExperimentSchedule s = make_schedule(quiet(), SampleMode::SingleSample, 3, 25.0, 120.0);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.times, (std::vector<double>{25.0, 145.0, 265.0}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_FALSE(s.fresh[i]);
    EXPECT_EQ(s.sample_index[i], 0u);
    EXPECT_EQ(s.probe_time(i), s.times[i] - 25.0);
  }
}

TEST(MakeSchedule, MultiSampleUsesOwnClock) {
  const ExperimentSchedule s = make_schedule(quiet(), SampleMode::MultiSample, 3, 25.0, 0.0);
  EXPECT_EQ(s.times, (std::vector<double>{25.0, 25.0, 25.0}));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_TRUE(s.fresh[i]);
    EXPECT_EQ(s.sample_index[i], i);
    EXPECT_EQ(s.probe_time(i), 0.0);
  }
}

TEST(MakeSchedule, InvalidArguments) {
  EXPECT_THROW(make_schedule(quiet(), SampleMode::SingleSample, 0, 25.0, 120.0), std::invalid_argument);
  EXPECT_THROW(make_schedule(quiet(), SampleMode::SingleSample, 3, 0.0, 120.0), std::invalid_argument);
  EXPECT_THROW(make_schedule(quiet(), SampleMode::SingleSample, 3, 25.0, 0.0), std::invalid_argument);
}

TEST(SpinoeParams, DefaultRecoveryIsFiveT1) { EXPECT_DOUBLE_EQ(SpinoeParams{}.default_recovery_s(), 120.0); }
