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


#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aniso/verify.hpp"
#include "json.hpp"

namespace aniso {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo)) : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

Axis make_axis(const std::vector<double>& v, bool log) {
  double lo = kInf, hi = -kInf;
  for (double x : v) {
    if (log && !(x > 0)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!(lo <= hi)) lo = hi = 1;
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10;
  } else {
    if (hi <= lo) hi = lo + 1;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  return {lo, hi, log};
}

struct Curve {
  std::string name, color;
  std::vector<double> x, y;
  bool dashed = false;
};

constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 50;

std::string plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                 const std::vector<Curve>& curves, bool log) {
  std::vector<double> xs, ys;
  for (const auto& c : curves) {
    xs.insert(xs.end(), c.x.begin(), c.x.end());
    ys.insert(ys.end(), c.y.begin(), c.y.end());
  }
  const Axis ax = make_axis(xs, log), ay = make_axis(ys, log);
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  const double x0 = kL, x1 = kW - kR, y0 = kH - kB, y1 = kT;
  out << "<polyline fill=\"none\" stroke=\"black\" points=\"" << x0 << "," << y1 << " " << x0 << "," << y0 << " " << x1
      << "," << y0 << "\"/>\n";
  auto tick = [&](double v, bool is_x) {
    if (is_x) {
      const double px = ax.map(v, x0, x1);
      out << "<polyline stroke=\"black\" points=\"" << px << "," << y0 << " " << px << "," << y0 + 5 << "\"/>\n";
      out << "<text x=\"" << px << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(v)
          << "</text>\n";
    } else {
      const double py = ay.map(v, y0, y1);
      out << "<polyline stroke=\"black\" points=\"" << x0 - 5 << "," << py << " " << x0 << "," << py << "\"/>\n";
      out << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v)
          << "</text>\n";
    }
  };
  for (int axis = 0; axis < 2; ++axis) {
    const Axis& a = axis == 0 ? ax : ay;
    if (a.log) {
      for (double v = a.lo; v <= a.hi * 1.0001; v *= 10) tick(v, axis == 0);
    } else {
      for (int k = 0; k <= 5; ++k) tick(a.lo + (a.hi - a.lo) * k / 5, axis == 0);
    }
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
      << (y0 + y1) / 2 << ")\">" << ylabel << "</text>\n";
  int legend = 0;
  for (const auto& c : curves) {
    out << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"2\"";
    if (c.dashed) out << " stroke-dasharray=\"6,4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (log && (!(c.x[i] > 0) || !(c.y[i] > 0))) continue;
      out << ax.map(c.x[i], x0, x1) << "," << ay.map(c.y[i], y0, y1) << " ";
    }
    out << "\"/>\n";
    const double ly = y1 + 16 * legend++;
    out << "<polyline stroke=\"" << c.color << "\" stroke-width=\"2\" points=\"" << x1 - 140 << "," << ly << " "
        << x1 - 115 << "," << ly << "\"/>\n";
    out << "<text x=\"" << x1 - 110 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << c.name << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string report_json(const VerificationReport& r) {
  json j;
  j["experiment"] = r.experiment;
  j["status"] = to_string(r.status);
  j["pass"] = r.pass();
  j["inputs"] = r.inputs;
  json rows = json::array();
  for (const Row& row : r.rows) {
    rows.push_back({{"label", row.label},
                    {"law", row.law},
                    {"parameter", number(row.parameter)},
                    {"predicted", number(row.predicted)},
                    {"measured", number(row.measured)},
                    {"abs_error", number(row.abs_error)},
                    {"rel_error", number(row.rel_error)},
                    {"tolerance", number(row.tolerance)},
                    {"pass", row.pass}});
  }
  j["rows"] = rows;
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
  j["metrics"] = metrics;
  json series = json::object();
  for (const auto& [k, v] : r.series) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    series[k] = a;
  }
  j["series"] = series;
  if (r.fit) {
    j["fit"] = {{"exponent", number(r.fit->exponent)},
                {"amplitude", number(r.fit->amplitude)},
                {"residual", number(r.fit->residual)},
                {"radii", r.fit->radii},
                {"dropped", r.fit->dropped}};
  }
  j["notes"] = r.notes;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump(2) + "\n";
}

std::string report_csv(const VerificationReport& r) {
  std::string out = "label,law,parameter,predicted,measured,abs_error,rel_error,tolerance,pass\n";
  for (const Row& row : r.rows) {
    out += csv_field(row.label) + "," + row.law + "," + fmt(row.parameter) + "," + fmt(row.predicted) + "," +
           fmt(row.measured) + "," + fmt(row.abs_error) + "," + fmt(row.rel_error) + "," + fmt(row.tolerance) + "," +
           (row.pass ? "1" : "0") + "\n";
  }
  return out;
}

std::string series_csv(const VerificationReport& r) {
  std::string out;
  std::size_t rows = 0;
  for (const auto& [k, v] : r.series) {
    out += (out.empty() ? "" : ",") + k;
    rows = std::max(rows, v.size());
  }
  out += "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    std::string line;
    bool first = true;
    for (const auto& [k, v] : r.series) {
      if (!first) line += ",";
      first = false;
      if (i < v.size()) line += fmt(v[i]);
    }
    out += line + "\n";
  }
  return out;
}

std::string erosion_svg(const VerificationReport& r) {
  const double rbar = r.metrics.count("rbar") ? r.metrics.at("rbar") : 1.0;
  Curve meas{"measured", "#1f5fa8", {}, {}}, pred{"predicted", "#c0392b", {}, {}, true};
  for (const Row& row : r.rows) {
    if (row.law != "erosion-volume") continue;
    meas.x.push_back(rbar - row.parameter);
    meas.y.push_back(row.measured);
    pred.x.push_back(rbar - row.parameter);
    pred.y.push_back(row.predicted);
  }
  std::string title = "erosion volume";
  if (r.fit) title += ", fitted exponent " + fmt(std::round(r.fit->exponent * 1000) / 1000);
  return plot(title, "rbar - r", "|E>=r|", {meas, pred}, true);
}

std::string series_svg(const VerificationReport& r, const std::string& name) {
  const auto hs = r.series.find("h");
  const auto ys = r.series.find(name);
  if (hs == r.series.end() || ys == r.series.end()) {
    throw Error(ErrorCode::kInvalidArgument, "report has no series '" + name + "'");
  }
  Curve c{name, "#1f5fa8", hs->second, ys->second};
  return plot(name + " against h", "h", name, {c}, false);
}

}  // namespace aniso
