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

#include "aniso/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "aniso/io.hpp"
#include "json.hpp"

namespace aniso {

namespace {

using json = nlohmann::json;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw Error(ErrorCode::kParse, "bad number '" + v + "'");
  return x;
}

long long to_int(const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw Error(ErrorCode::kParse, "bad integer '" + v + "'");
  return x;
}

std::vector<double> double_list(const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split(v, ',')) out.push_back(to_double(item));
  if (out.empty()) throw Error(ErrorCode::kParse, "empty list");
  return out;
}

std::vector<int> h_list(const std::string& v) {
  std::vector<int> out;
  const auto dots = v.find("..");
  if (dots != std::string::npos) {
    const long long a = to_int(trim(v.substr(0, dots))), b = to_int(trim(v.substr(dots + 2)));
    if (b < a) throw Error(ErrorCode::kParse, "empty range '" + v + "'");
    for (long long h = a; h <= b; ++h) out.push_back(static_cast<int>(h));
  } else {
    for (const std::string& item : split(v, ',')) out.push_back(static_cast<int>(to_int(item)));
  }
  if (out.empty()) throw Error(ErrorCode::kParse, "empty list");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 1) throw Error(ErrorCode::kParse, "h must be >= 1");
    if (i > 0 && out[i] <= out[i - 1]) throw Error(ErrorCode::kParse, "h must increase");
  }
  return out;
}

double positive(const std::string& v) {
  const double x = to_double(v);
  if (!(x > 0)) throw Error(ErrorCode::kParse, "expected a positive number, got '" + v + "'");
  return x;
}

Experiment parse_experiment(const std::string& v) {
  static const std::map<std::string, Experiment> names = {
      {"wulff-identity", Experiment::kWulffIdentity}, {"erosion", Experiment::kErosion},
      {"minkowski", Experiment::kMinkowski},          {"disintegration", Experiment::kDisintegration},
      {"bubbling", Experiment::kBubbling},            {"all", Experiment::kAll}};
  const auto it = names.find(v);
  if (it == names.end()) throw Error(ErrorCode::kParse, "unknown experiment '" + v + "'");
  return it->second;
}

// Rethrows with the line number prefixed, keeping the code.
[[noreturn]] void at_line(int line, const Error& e) {
  std::string msg = e.what();
  const std::string prefix = std::string(to_string(e.code())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  throw Error(e.code(), "line " + std::to_string(line) + ": " + msg);
}

ErosionOptions erosion_options(const RunConfig& c) {
  ErosionOptions o;
  o.spacing = c.spacing;
  o.radii = c.radii;
  o.resolution = c.resolution;
  o.tolerance = c.tolerance;
  o.c_cal = c.c_cal;
  return o;
}

bool has_bubbles(ShapeKind k) { return k == ShapeKind::kTwoBubble || k == ShapeKind::kTangentUnion; }

std::string file_stem(const VerificationReport& r, std::size_t index, std::size_t total) {
  return total == 1 ? r.experiment : std::to_string(index + 1) + "-" + r.experiment;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path.string(), [&](std::ostream& out) { out << text; });
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::kWulffIdentity: return "wulff-identity";
    case Experiment::kErosion: return "erosion";
    case Experiment::kMinkowski: return "minkowski";
    case Experiment::kDisintegration: return "disintegration";
    case Experiment::kBubbling: return "bubbling";
    case Experiment::kAll: return "all";
  }
  return "?";
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  std::map<std::string, int> line_of;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": expected key=value");
    }
    const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": empty key");
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": duplicate key '" + key + "'");
    }
    line_of[key] = line;
    try {
      if (value.empty()) throw Error(ErrorCode::kParse, "empty value for '" + key + "'");
      if (key == "experiment") {
        c.experiment = parse_experiment(value);
      } else if (key == "norm") {
        c.norm_text = value;
      } else if (key == "dim") {
        c.dim = static_cast<int>(to_int(value));
        if (c.dim != 2 && c.dim != 3) throw Error(ErrorCode::kInvalidSpec, "dim must be 2 or 3");
      } else if (key == "shape") {
        c.shape_text = value;
      } else if (key == "spacing") {
        c.spacing = positive(value);
      } else if (key == "radii") {
        c.radii = double_list(value);
        for (double f : c.radii) {
          if (!(f > 0 && f < 1)) throw Error(ErrorCode::kParse, "radii are fractions of rbar in (0, 1)");
        }
      } else if (key == "pairs") {
        c.pairs.clear();
        for (const std::string& item : split(value, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw Error(ErrorCode::kParse, "pair '" + item + "' is not s:r");
          const double s = to_double(trim(item.substr(0, colon))), r = to_double(trim(item.substr(colon + 1)));
          if (!(s > 0 && s < r && r < 1)) throw Error(ErrorCode::kParse, "pair '" + item + "' needs 0 < s < r < 1");
          c.pairs.emplace_back(s, r);
        }
      } else if (key == "output") {
        c.output = value;
      } else if (key == "seed") {
        const long long s = to_int(value);
        if (s < 0) throw Error(ErrorCode::kParse, "seed must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
      } else if (key == "resolution") {
        c.resolution = static_cast<int>(to_int(value));
        if (c.resolution < 1) throw Error(ErrorCode::kParse, "resolution must be positive");
      } else if (key == "tolerance") {
        c.tolerance = positive(value);
      } else if (key == "wulff-tolerance") {
        c.wulff_tolerance = positive(value);
      } else if (key == "disintegration-tolerance") {
        c.disintegration_tolerance = positive(value);
      } else if (key == "bubbling-tolerance") {
        c.bubbling_tolerance = positive(value);
      } else if (key == "c-cal") {
        c.c_cal = to_double(value);
        if (*c.c_cal < 0) throw Error(ErrorCode::kParse, "c-cal must be nonnegative");
      } else if (key == "sequence") {
        c.sequence = parse_sequence_kind(value);
      } else if (key == "h") {
        c.h = h_list(value);
      } else if (key == "probe-band") {
        c.probe_band = double_list(value);
        for (double f : c.probe_band) {
          if (!(f > 0 && f < 1)) throw Error(ErrorCode::kParse, "probe-band entries are fractions of rbar in (0, 1)");
        }
      } else if (key == "limit") {
        if (value == "fixed") {
          c.fixed_norm = true;
        } else if (value != "sequence") {
          throw Error(ErrorCode::kParse, "limit must be 'sequence' or 'fixed'");
        }
      } else {
        throw Error(ErrorCode::kUnknownKey, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      at_line(line, e);
    }
  }
  if (!seen.count("experiment")) throw Error(ErrorCode::kParse, "missing experiment");
  const int norm_line = seen.count("norm") ? line_of["norm"] : 0;
  try {
    c.norm = parse_norm(c.norm_text, c.dim);
  } catch (const Error& e) {
    at_line(norm_line, e);
  }
  const int shape_line = seen.count("shape") ? line_of["shape"] : 0;
  try {
    c.shape = parse_shape_spec(c.shape_text, c.norm);
    if (c.seed) c.shape.seed = *c.seed;
    c.shape.validate();
  } catch (const Error& e) {
    at_line(shape_line, e);
  }
  if (c.experiment == Experiment::kBubbling && c.shape.kind == ShapeKind::kWulff) {
    throw Error(ErrorCode::kInvalidSpec,
                "line " + std::to_string(shape_line) + ": bubbling needs a two-bubble, tangent-union or perturbed-wulff shape");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::vector<VerificationReport> run_experiments(const RunConfig& c) {
  std::vector<VerificationReport> out;
  const bool all = c.experiment == Experiment::kAll;
  auto wants = [&](Experiment e) { return all || c.experiment == e; };
  if (wants(Experiment::kWulffIdentity)) {
    VerificationReport r = check_wulff_identity(c.shape.norm, c.shape.radius, c.resolution);
    if (c.wulff_tolerance > 0 && r.status != Status::kError) {
      r.status = Status::kPass;
      for (Row& row : r.rows) {
        row.tolerance = c.wulff_tolerance;
        row.pass = row.rel_error <= row.tolerance;
      }
      r.inputs["tolerance"] = std::to_string(c.wulff_tolerance);
      r.settle();
    }
    out.push_back(std::move(r));
  }
  if (wants(Experiment::kErosion)) out.push_back(check_erosion_laws(c.shape, erosion_options(c)));
  if (wants(Experiment::kMinkowski)) out.push_back(check_minkowski_law(c.shape, c.pairs, erosion_options(c)));
  if (wants(Experiment::kDisintegration)) {
    DisintegrationOptions o;
    o.resolution = c.resolution;
    o.spacing = c.spacing;
    o.tolerance = c.disintegration_tolerance;
    out.push_back(check_disintegration(c.shape, o));
  }
  if (c.experiment == Experiment::kBubbling || (all && has_bubbles(c.shape.kind))) {
    BubblingOptions o;
    o.spacing = c.spacing;
    o.resolution = c.resolution;
    if (!c.probe_band.empty()) o.probe_band = c.probe_band;
    if (c.bubbling_tolerance > 0) o.tolerance = c.bubbling_tolerance;
    o.fixed_norm = c.fixed_norm;
    out.push_back(run_bubbling(c.sequence, c.h, c.shape, o));
  }
  return out;
}

int exit_status(const std::vector<VerificationReport>& reports) {
  bool uncertain = false;
  for (const VerificationReport& r : reports) {
    if (r.status == Status::kFail || r.status == Status::kError) return kExitFail;
    if (r.status == Status::kAmbiguous || r.status == Status::kLowConfidence) uncertain = true;
  }
  return uncertain ? kExitAmbiguous : kExitPass;
}

void write_artifacts(const RunConfig& c, const std::vector<VerificationReport>& reports) {
  namespace fs = std::filesystem;
  const fs::path root(c.output);
  std::string report;
  if (reports.size() == 1) {
    report = report_json(reports[0]);
  } else {
    json j;
    j["experiment"] = to_string(c.experiment);
    const int code = exit_status(reports);
    j["status"] = code == kExitPass ? "pass" : code == kExitFail ? "fail" : "ambiguous";
    j["pass"] = code == kExitPass;
    json list = json::array();
    for (const VerificationReport& r : reports) list.push_back(json::parse(report_json(r)));
    j["reports"] = list;
    report = j.dump(2) + "\n";
  }
  write_text(root / "report.json", report);

  json timing = json::object();
  double total = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const VerificationReport& r = reports[i];
    const std::string stem = file_stem(r, i, reports.size());
    timing[stem] = r.wall_time;
    total += r.wall_time;
    write_text(root / "tables" / (stem + ".csv"), report_csv(r));
    if (!r.series.empty()) write_text(root / "tables" / (stem + "-series.csv"), series_csv(r));
    if (r.experiment == "erosion" && r.fit) write_text(root / "plots" / (stem + ".svg"), erosion_svg(r));
    if (r.experiment == "bubbling" && r.series.count("h")) {
      for (const auto& [name, values] : r.series) {
        if (name == "h" || values.empty()) continue;
        write_text(root / "plots" / (stem + "-" + name + ".svg"), series_svg(r, name));
      }
    }
  }
  timing["total"] = total;
  write_text(root / "timing.json", timing.dump(2) + "\n");
}

int run(const RunConfig& config, std::ostream& log) {
  const std::vector<VerificationReport> reports = run_experiments(config);
  for (const VerificationReport& r : reports) {
    log << r.experiment << ": " << to_string(r.status);
    if (!r.error.empty()) log << " (" << r.error << ")";
    log << "\n";
  }
  write_artifacts(config, reports);
  const int code = exit_status(reports);
  log << "report: " << (std::filesystem::path(config.output) / "report.json").string() << "\n";
  return code;
}

}  // namespace aniso
