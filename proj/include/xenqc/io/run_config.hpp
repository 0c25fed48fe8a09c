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

/**
 * @file    run_config.hpp
 * @brief   Flat snake_case JSON configuration shared by all CLI commands.
 */

#ifndef XENQC_IO_RUN_CONFIG_HPP
#define XENQC_IO_RUN_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "../experiments.hpp"

namespace xenqc::io {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  // spin system
  double gamma_ratio = 4.0;
  double j_hz = 215.0;
  double t2_s = 0.5;
  double polarization_unit = 1.0;
  // enhancement model
  double eps0_h = -11.0;
  double eps0_c = 18.0;
  double t1_xe_s = 900.0;
  double t1_ch_s = 24.0;
  double recovery_s = 120.0;
  double r1_s = 25.0;
  double jitter = 0.05;
  std::uint64_t seed = 42;
  // readout
  std::size_t n_points = 4096;
  double dwell_s = 1e-3;
  double tip_deg = 15.0;
  double noise_amp = 0.0;
  // mode flags
  std::string mode = "single";          // multi | single
  std::string series_order = "permutation-major";

  SampleMode sample_mode() const {
    if (mode == "multi")
      return SampleMode::MultiSample;
    if (mode == "single")
      return SampleMode::SingleSample;
    throw ConfigError("mode must be \"multi\" or \"single\", got \"" + mode + "\"");
  }

  SeriesOrder order() const {
    if (series_order == "permutation-major")
      return SeriesOrder::PermutationMajor;
    if (series_order == "case-major")
      return SeriesOrder::CaseMajor;
    throw ConfigError("series_order must be \"permutation-major\" or \"case-major\"");
  }

  PipelineConfig pipeline() const {
    PipelineConfig p;
    p.spin = {gamma_ratio, j_hz, t2_s, polarization_unit};
    p.spinoe.eps0_h = eps0_h;
    p.spinoe.eps0_c = eps0_c;
    p.spinoe.t1_xe_s = t1_xe_s;
    p.spinoe.t1_ch_s = t1_ch_s;
    p.spinoe.jitter = jitter;
    p.spinoe.seed = seed;
    p.readout.n_points = n_points;
    p.readout.dwell_s = dwell_s;
    p.readout.noise_amp = noise_amp;
    p.readout.noise_seed = seed ^ 0x5eedULL;
    p.r1_s = r1_s;
    p.recovery_s = recovery_s;
    p.probe_tip_deg = tip_deg;
    try {
      p.validate();
    } catch (const std::invalid_argument &e) {
      throw ConfigError(e.what());
    }
    return p;
  }
};

#define XENQC_CONFIG_FIELDS(X)                                                                                  \
  X(gamma_ratio) X(j_hz) X(t2_s) X(polarization_unit) X(eps0_h) X(eps0_c) X(t1_xe_s) X(t1_ch_s) X(recovery_s)   \
      X(r1_s) X(jitter) X(seed) X(n_points) X(dwell_s) X(tip_deg) X(noise_amp) X(mode) X(series_order)

inline nlohmann::ordered_json to_json(const RunConfig &c) {
  nlohmann::ordered_json j;
#define XENQC_PUT(name) j[#name] = c.name;
  XENQC_CONFIG_FIELDS(XENQC_PUT)
#undef XENQC_PUT
  return j;
}

/// Applies the keys present in `j` on top of `base`. Unknown keys and
/// wrongly typed values are rejected.
inline RunConfig merge_json(RunConfig base, const nlohmann::json &j) {
  if (!j.is_object())
    throw ConfigError("config: top level must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string &key = it.key();
    bool known = false;
    try {
#define XENQC_GET(name)                                                                                        \
  if (key == #name) {                                                                                          \
    it.value().get_to(base.name);                                                                              \
    known = true;                                                                                              \
  }
      XENQC_CONFIG_FIELDS(XENQC_GET)
#undef XENQC_GET
    } catch (const nlohmann::json::exception &e) {
      throw ConfigError("config: bad value for \"" + key + "\": " + e.what());
    }
    if (!known)
      throw ConfigError("config: unknown key \"" + key + "\"");
  }
  return base;
}

inline RunConfig load_config(const std::string &path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return merge_json(std::move(base), j);
}

} // namespace xenqc::io

#endif // XENQC_IO_RUN_CONFIG_HPP
