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
 * @file    report.hpp
 * @brief   JSON reports, CSV tables and SVG line plots.
 *
 * CSV spectra and peak tables share the header `freq_hz,real,imag`. For a
 * peak table `real` and `imag` are the window integrals of the respective
 * spectrum parts; the line at +J/2 belongs to partner state |0>.
 */

#ifndef XENQC_IO_REPORT_HPP
#define XENQC_IO_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "../experiments.hpp"
#include "run_config.hpp"

namespace xenqc::io {

using ojson = nlohmann::ordered_json;

class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string state_label(std::size_t index) { return GroverCase{index}.label(); }

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

//============================================================================
// CSV
//============================================================================

inline constexpr const char *kCsvHeader = "freq_hz,real,imag";

inline std::string spectrum_csv(const Spectrum &s) {
  std::string out = kCsvHeader;
  out += '\n';
  for (std::size_t k = 0; k < s.freqs.size(); ++k) {
    out += fmt_double(s.freqs[k]);
    out += ',';
    out += fmt_double(s.values[k].real());
    out += ',';
    out += fmt_double(s.values[k].imag());
    out += '\n';
  }
  return out;
}

inline std::string peaks_csv(const PeakTable &p) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto &l : p.lines)
    out += fmt_double(l.freq_hz) + ',' + fmt_double(l.integral) + ',' + fmt_double(l.integral_imag) + '\n';
  return out;
}

struct CsvRow {
  double freq_hz, real, imag;
};

inline std::vector<CsvRow> parse_csv(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::invalid_argument("parse_csv: missing header \"freq_hz,real,imag\"");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    CsvRow r{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r.freq_hz, &r.real, &r.imag) != 3)
      throw std::invalid_argument("parse_csv: malformed row \"" + line + "\"");
    rows.push_back(r);
  }
  return rows;
}

inline void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw OutputError("cannot write " + path);
  out << text;
  if (!out)
    throw OutputError("write failed for " + path);
}

//============================================================================
// SVG
//============================================================================

struct PlotSeries {
  std::string name;
  std::string color;
  std::vector<double> x, y;
};

inline std::string svg_line_plot(const std::string &title, const std::string &xlabel,
                                 const std::vector<PlotSeries> &series) {
  const double w = 640, h = 400, ml = 60, mr = 20, mt = 40, mb = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto &s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (!(xmax > xmin))
    xmax = xmin + 1.0;
  if (!(ymax > ymin)) {
    ymin -= 1.0;
    ymax += 1.0;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">" << title
    << "</text>\n";
  o << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
    << "\" stroke=\"black\"/>\n";
  if (ymin < 0.0 && ymax > 0.0)
    o << "<line x1=\"" << ml << "\" y1=\"" << py(0.0) << "\" x2=\"" << w - mr << "\" y2=\"" << py(0.0)
      << "\" stroke=\"#bbb\" stroke-dasharray=\"4 4\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\">"
    << xlabel << "</text>\n";
  o << "<text x=\"" << ml << "\" y=\"" << h - mb + 16 << "\" font-size=\"11\" text-anchor=\"middle\">" << xmin
    << "</text>\n";
  o << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 16 << "\" font-size=\"11\" text-anchor=\"middle\">" << xmax
    << "</text>\n";
  o << "<text x=\"" << ml - 4 << "\" y=\"" << py(ymax) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << ymax
    << "</text>\n";
  o << "<text x=\"" << ml - 4 << "\" y=\"" << py(ymin) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << ymin
    << "</text>\n";
  double ly = mt + 10;
  for (const auto &s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    o << "\"/>\n";
    o << "<text x=\"" << w - mr - 4 << "\" y=\"" << ly << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
      << s.color << "\">" << s.name << "</text>\n";
    ly += 16;
  }
  o << "</svg>\n";
  return o.str();
}

/// Spectrum restricted to |f| <= span_hz, real part only.
inline PlotSeries spectrum_series(const Spectrum &s, double span_hz, const std::string &name,
                                  const std::string &color) {
  PlotSeries ps{name, color, {}, {}};
  for (std::size_t k = 0; k < s.freqs.size(); ++k)
    if (std::abs(s.freqs[k]) <= span_hz) {
      ps.x.push_back(s.freqs[k]);
      ps.y.push_back(s.values[k].real());
    }
  return ps;
}

//============================================================================
// JSON
//============================================================================

inline ojson to_json(const Populations &p) {
  ojson a = ojson::array();
  for (double v : p)
    a.push_back(v);
  return a;
}

inline ojson to_json(const ExperimentSchedule &s) {
  ojson j;
  j["mode"] = to_string(s.mode);
  j["probe_lead_s"] = s.probe_lead;
  j["times_s"] = s.times;
  return j;
}

inline ojson to_json(const ExperimentRecord &r) {
  ojson j;
  j["slot"] = r.slot;
  j["sample_index"] = r.sample_index;
  j["probe_time_s"] = r.probe_time;
  j["schedule_time_s"] = r.schedule_time;
  j["perm"] = to_string(r.perm);
  j["eps_probe"] = {{"h", r.eps_probe.h}, {"c", r.eps_probe.c}};
  j["eps_experiment"] = {{"h", r.eps_experiment.h}, {"c", r.eps_experiment.c}};
  j["probed_diagonal"] = to_json(r.probed_diagonal);
  j["probe_residual"] = r.probe_residual;
  j["weight"] = r.weight_used;
  return j;
}

inline ojson to_json(const EffectivePureResult &r) {
  ojson j;
  j["ground"] = state_label(r.ground);
  j["normalization"] = to_string(Normalization::FirstWeightOne);
  j["weights"] = r.weights;
  j["diagonal"] = to_json(r.diagonal);
  j["q1"] = r.q1;
  j["q2"] = r.q2;
  j["normalized_q2"] = r.normalized_q2();
  j["residual"] = r.residual;
  j["within_tolerance"] = r.within_tolerance;
  return j;
}

inline ojson to_json(const PeakTable &p) {
  ojson a = ojson::array();
  for (const auto &l : p.lines)
    a.push_back({{"freq_hz", l.freq_hz}, {"partner_state", l.partner_state}, {"integral", l.integral}});
  return a;
}

inline ojson report_header(const std::string &run_id, const std::string &command, const RunConfig &cfg) {
  ojson j;
  j["run_id"] = run_id;
  j["command"] = command;
  j["generated_at"] = nullptr; // filled by the caller; the only non-deterministic field
  j["config"] = to_json(cfg);
  return j;
}

inline ojson effpure_report(const std::string &run_id, const RunConfig &cfg, const EffectivePureRun &run) {
  ojson j = report_header(run_id, "effpure", cfg);
  j["schedule"] = to_json(run.schedule);
  j["calibration"] = {{"scale_h", run.calibration.scale_h}, {"scale_c", run.calibration.scale_c}};
  ojson ex = ojson::array();
  for (const auto &r : run.records)
    ex.push_back(to_json(r));
  j["experiments"] = ex;
  j["labeling"] = to_json(run.result);
  j["thermal_labeling"] = to_json(run.thermal_result);
  j["enhancement"] = run.enhancement;
  j["realized"] = {{"diagonal", to_json(run.realized_diagonal)},
                   {"q2", run.realized_q2},
                   {"non_ground_spread", run.realized_spread}};
  return j;
}

inline ojson grover_case_json(const GroverRun &run) {
  ojson j;
  j["target"] = run.gcase.label();
  j["decoded"] = run.decode.decoded ? ojson(run.decode.decoded->label()) : ojson(nullptr);
  j["success"] = run.success();
  if (run.decode.ambiguous)
    j["decode_note"] = run.decode.reason;
  j["ground"] = state_label(run.ground);
  ojson ex = ojson::array();
  for (const auto &r : run.records)
    ex.push_back(to_json(r));
  j["experiments"] = ex;
  j["labeling"] = to_json(run.labeled);
  j["peaks_h"] = to_json(run.peaks_h);
  j["peaks_c"] = to_json(run.peaks_c);
  j["thermal_peaks_h"] = to_json(run.thermal_peaks_h);
  j["thermal_peaks_c"] = to_json(run.thermal_peaks_c);
  j["enhancement_h"] = run.enhancement_h;
  j["enhancement_c"] = run.enhancement_c;
  j["enhancement"] = run.enhancement;
  return j;
}

} // namespace xenqc::io

#endif // XENQC_IO_REPORT_HPP
