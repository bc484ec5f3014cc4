// Copyright 2026 The Aniso Authors.
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aniso/verify.hpp"

namespace aniso {

enum class Experiment { kWulffIdentity, kErosion, kMinkowski, kDisintegration, kBubbling, kAll };

const char* to_string(Experiment e);

// Exit statuses of `aniso run`.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitAmbiguous = 2;
inline constexpr int kExitConfig = 64;

struct RunConfig {
  Experiment experiment = Experiment::kAll;
  std::string norm_text = "euclidean";
  int dim = 3;
  std::string shape_text = "wulff";
  Norm norm = Norm::euclidean(3);
  ShapeSpec shape;
  double spacing = 0.0;  // 0: module defaults
  std::vector<double> radii;
  std::vector<std::pair<double, double>> pairs = {{0.2, 0.5}, {0.1, 0.3}};
  std::string output = "aniso-out";
  std::optional<std::uint64_t> seed;
  int resolution = 0;
  // Overrides; 0 keeps the module defaults.
  double tolerance = 0.0;
  double wulff_tolerance = 0.0;
  double disintegration_tolerance = 0.0;
  double bubbling_tolerance = 0.0;
  std::optional<double> c_cal;
  SequenceKind sequence = SequenceKind::kSmoothMaxToLinf;
  std::vector<int> h = {1, 2, 3, 4, 5};
  std::vector<double> probe_band;
  bool fixed_norm = false;
};

// Lines of key=value; '#' starts a comment. Keys: experiment, norm, dim,
// shape, spacing, radii, pairs (s:r,...), output, seed, resolution,
// tolerance, wulff-tolerance, disintegration-tolerance, bubbling-tolerance,
// c-cal, sequence, h (list or a..b), probe-band, limit (sequence|fixed).
// Errors name the offending line.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Reports in experiment order; module errors are captured in the reports.
std::vector<VerificationReport> run_experiments(const RunConfig& config);

// 0 when every report passes, 1 on any failure or error, else 2 for
// ambiguous or low-confidence results.
int exit_status(const std::vector<VerificationReport>& reports);

// report.json, tables/*.csv and plots/*.svg under config.output, written
// atomically; wall times go to timing.json beside them.
void write_artifacts(const RunConfig& config, const std::vector<VerificationReport>& reports);

// Runs, writes artifacts, prints one summary line per report to `log` and
// returns the exit status.
int run(const RunConfig& config, std::ostream& log);

}  // namespace aniso
