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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/shapes.hpp"

namespace aniso {

enum class Status {
  kPass,
  kFail,
  // Bubble count changed across the probe band.
  kAmbiguous,
  // Too many reach computations failed.
  kLowConfidence,
  // Input outside the regime where a bound applies; nothing to pass.
  kGated,
  kError,
};

const char* to_string(Status s);

// One predicted-versus-measured comparison. `law` names the closed form
// that produced `predicted`.
struct Row {
  std::string label;
  std::string law;
  double parameter = 0.0;
  double predicted = 0.0;
  double measured = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  // RMS of log residuals.
  double residual = 0.0;
  std::vector<double> radii;
  int dropped = 0;
};

struct VerificationReport {
  std::string experiment;
  std::map<std::string, std::string> inputs;
  std::vector<Row> rows;
  std::map<std::string, double> metrics;
  std::map<std::string, std::vector<double>> series;
  std::optional<PowerLawFit> fit;
  std::vector<std::string> notes;
  Status status = Status::kPass;
  std::string error;
  double wall_time = 0.0;

  bool pass() const { return status == Status::kPass || status == Status::kGated; }
  // A passing report becomes failing when any row fails; other states stay.
  void settle();
};

// Least squares of log y against log x, x = rbar - r. Nonpositive values
// are dropped with a note; fewer than 4 left is insufficient-data.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                          std::vector<std::string>* notes = nullptr);

// (n+1)|W_r| against r P(W_r).
VerificationReport check_wulff_identity(const Norm& phi, double r, int resolution = 0);

struct ErosionOptions {
  double spacing = 0.0;            // 0: rbar / 50 in 3D, rbar / 200 in 2D
  std::vector<double> radii = {};  // fractions of rbar; empty selects defaults
  int resolution = 0;              // mesh resolution; 0: level 6 / 4096-gon
  double tolerance = 0.0;          // 0: 2.5% in 3D, 1.5% in 2D
  // Multiplies dev^{1/n} in the widened tolerance; calibrated on the
  // eps = 0.1 member of the same family when absent.
  std::optional<double> c_cal;
  DistanceOptions distance = {};
};

// Measured |E_{>=r}| against |Omega| (rbar - r)^{n+1} / rbar^{n+1} and
// P(Omega) (rbar - r)^{n+1} / ((n + 1) rbar^n), with rbar = n / lambda.
VerificationReport check_erosion_laws(const ShapeSpec& shape, const ErosionOptions& options = {});
// Largest (error - tolerance)_+ / dev^{1/n} on the eps = 0.1 member.
double calibrate_erosion(const ShapeSpec& family, const ErosionOptions& options = {});

// |E_{>=r} + W_s| against |Omega| (rbar - r + s)^{n+1} / rbar^{n+1}; pairs
// (s, r) are fractions of rbar with 0 < s < r < 1.
VerificationReport check_minkowski_law(const ShapeSpec& shape,
                                       const std::vector<std::pair<double, double>>& pairs,
                                       const ErosionOptions& options = {});

struct DisintegrationOptions {
  int resolution = 0;
  double spacing = 0.0;     // 0: rbar / 50 in 3D, rbar / 200 in 2D
  double tolerance = 0.0;   // 0: 3% exact Wulff, 5% otherwise
};

// Sum over vertices of area * phi(nu) * int_0^tau prod(1 - t kappa_i) dt
// against the enclosed volume, tau from the grid reach along -nu^phi.
VerificationReport check_disintegration(const ShapeSpec& shape, const DisintegrationOptions& options = {});

struct BubblingOptions {
  double spacing = 0.0;  // 0: rbar / 40
  int resolution = 0;
  std::vector<double> probe_band = {0.05, 0.075, 0.1, 0.125, 0.15};  // fractions of rbar
  double tolerance = 0.02;
  // Use base.norm for every h and as the limit norm (the limit configuration
  // itself); adds final symmetric-difference and perimeter rows.
  bool fixed_norm = false;
};

// Shapes Omega_h built from `base` with phi_h = norm_sequence(kind, h): the
// two-bubble neck is 2^-h rbar and the perturbation 2^-h. Reports count,
// barycenters, symmetric difference to the union of limit Wulff balls at
// the barycenters, and the perimeter gap.
VerificationReport run_bubbling(SequenceKind kind, const std::vector<int>& hs, const ShapeSpec& base,
                                const BubblingOptions& options = {});

std::string report_json(const VerificationReport& r);
std::string report_csv(const VerificationReport& r);
// One column per series, rows aligned by index.
std::string series_csv(const VerificationReport& r);
// Log-log plot of measured and predicted erosion volume against rbar - r.
std::string erosion_svg(const VerificationReport& r);
// A named series against h.
std::string series_svg(const VerificationReport& r, const std::string& name);

}  // namespace aniso
