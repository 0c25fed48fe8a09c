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

// Command-line front end: enhance-trace, effpure, grover, probe.
//
// Exit codes: 0 ok, 1 I/O failure, 2 solver failure, 3 decode mismatch,
// 64 usage error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xenqc/io/report.hpp"
#include "xenqc/io/run_config.hpp"
#include "xenqc/xenqc.hpp"

namespace fs = std::filesystem;
using namespace xenqc;
using io::ojson;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitSolver = 2;
constexpr int kExitDecode = 3;
constexpr int kExitUsage = 64;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool svg = false;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

io::RunConfig resolve_config(const GlobalOptions &g) {
  io::RunConfig cfg;
  if (!g.config_path.empty())
    cfg = io::load_config(g.config_path, cfg);
  if (g.seed)
    cfg.seed = *g.seed;
  return cfg;
}

fs::path out_path(const GlobalOptions &g, const std::string &name) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec)
    throw io::OutputError("cannot create output directory " + g.out_dir + ": " + ec.message());
  return fs::path(g.out_dir) / name;
}

void write_report(const GlobalOptions &g, const std::string &name, ojson report) {
  report["generated_at"] = utc_now();
  io::write_text(out_path(g, name).string(), report.dump(2) + "\n");
}

void write_spectrum_files(const GlobalOptions &g, const std::string &stem, const Spectrum &s,
                          const SpinSystemConfig &spin) {
  io::write_text(out_path(g, stem + ".csv").string(), io::spectrum_csv(s));
  io::write_text(out_path(g, stem + "_peaks.csv").string(), io::peaks_csv(integrate_peaks(s, spin)));
  if (g.svg) {
    const auto series = io::spectrum_series(s, 1.5 * spin.j_coupling_hz, std::string(to_string(s.channel)) + " real",
                                            s.channel == Nucleus::H ? "#1f77b4" : "#d62728");
    io::write_text(out_path(g, stem + ".svg").string(),
                   io::svg_line_plot(stem, "frequency offset (Hz)", {series}));
  }
}

//----------------------------------------------------------------------------

int cmd_enhance_trace(const GlobalOptions &g, double duration, double step) {
  const io::RunConfig cfg = resolve_config(g);
  const PipelineConfig pc = cfg.pipeline();
  if (!(duration >= 0.0) || !(step > 0.0))
    throw io::ConfigError("enhance-trace: duration must be >= 0 and step > 0");
  std::string csv = "t_s,eps_h,eps_c\n";
  io::PlotSeries h{"1H", "#1f77b4", {}, {}}, c{"13C", "#d62728", {}, {}};
  const auto n = static_cast<std::size_t>(std::floor(duration / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * step;
    const Enhancement e = enhancement_at(pc.spinoe, t);
    csv += io::fmt_double(t) + ',' + io::fmt_double(e.h) + ',' + io::fmt_double(e.c) + '\n';
    h.x.push_back(t);
    h.y.push_back(e.h);
    c.x.push_back(t);
    c.y.push_back(e.c);
  }
  io::write_text(out_path(g, "enhance_trace.csv").string(), csv);
  if (g.svg)
    io::write_text(out_path(g, "enhance_trace.svg").string(),
                   io::svg_line_plot("Enhancement vs time", "time (s)", {h, c}));
  return kExitOk;
}

int cmd_effpure(const GlobalOptions &g, const std::optional<std::string> &mode) {
  io::RunConfig cfg = resolve_config(g);
  if (mode)
    cfg.mode = *mode;
  const PipelineConfig pc = cfg.pipeline();
  const EffectivePureRun run = run_effective_pure_pipeline(pc, cfg.sample_mode());
  const std::string run_id = "effpure-" + cfg.mode + "-seed" + std::to_string(cfg.seed);
  write_report(g, "effpure_report.json", io::effpure_report(run_id, cfg, run));
  for (const auto &r : run.records) {
    const std::string stem = "effpure_exp" + std::to_string(r.slot);
    write_spectrum_files(g, stem + "_h", r.readout_h, pc.spin);
    write_spectrum_files(g, stem + "_c", r.readout_c, pc.spin);
  }
  std::cout << "effective pure state: ground |" << io::state_label(run.result.ground) << ">, enhancement "
            << run.enhancement << "\n";
  return kExitOk;
}

int cmd_grover(const GlobalOptions &g, const std::optional<std::string> &target, bool all, bool shared,
               const std::optional<std::string> &mode, const std::optional<std::string> &order) {
  io::RunConfig cfg = resolve_config(g);
  if (mode)
    cfg.mode = *mode;
  if (order)
    cfg.series_order = *order;
  const PipelineConfig pc = cfg.pipeline();

  std::vector<GroverRun> runs;
  if (shared) {
    runs = run_grover_series(pc, cfg.order());
    if (!all) {
      const GroverCase want = GroverCase::parse(*target);
      std::erase_if(runs, [&](const GroverRun &r) { return !(r.gcase == want); });
    }
  } else if (all) {
    const SampleMode sm = cfg.sample_mode();
    std::vector<std::future<GroverRun>> jobs;
    for (const auto &gc : all_grover_cases())
      jobs.push_back(std::async(std::launch::async, [&pc, gc, sm] { return run_grover_pipeline(pc, gc, sm); }));
    for (auto &j : jobs)
      runs.push_back(j.get());
  } else {
    runs.push_back(run_grover_pipeline(pc, GroverCase::parse(*target), cfg.sample_mode()));
  }

  const std::string run_id = std::string("grover-") + (shared ? "shared-" + cfg.series_order : cfg.mode) + "-seed" +
                             std::to_string(cfg.seed);
  ojson report = io::report_header(run_id, "grover", cfg);
  report["shared_sample"] = shared;
  ojson cases = ojson::array();
  bool all_ok = true;
  for (const auto &r : runs) {
    cases.push_back(io::grover_case_json(r));
    all_ok = all_ok && r.success();
    write_spectrum_files(g, "grover_" + r.gcase.label() + "_h", r.sum_h, pc.spin);
    write_spectrum_files(g, "grover_" + r.gcase.label() + "_c", r.sum_c, pc.spin);
    std::cout << "target " << r.gcase.label() << " decoded "
              << (r.decode.decoded ? r.decode.decoded->label() : std::string("??")) << " enhancement "
              << r.enhancement << "\n";
  }
  report["cases"] = cases;
  report["all_decoded"] = all_ok;
  write_report(g, "grover_report.json", report);
  return all_ok ? kExitOk : kExitDecode;
}

int cmd_probe(const GlobalOptions &g, const std::string &state, double t) {
  const io::RunConfig cfg = resolve_config(g);
  const PipelineConfig pc = cfg.pipeline();
  DensityMatrix rho = thermal_state(pc.spin);
  if (state == "enhanced") {
    const Enhancement e = enhancement_at(pc.spinoe, t);
    rho = enhanced_state(pc.spin, e.h, e.c);
  } else if (state != "thermal") {
    throw io::ConfigError("probe: --state must be thermal or enhanced");
  }
  const Calibration cal = detail::thermal_probe_calibration(pc);
  const ChannelSpectra sp = probe(rho, pc.spin, pc.readout, pc.probe_tip_deg);
  const PeakTable ph = integrate_peaks(sp.h, pc.spin), pcb = integrate_peaks(sp.c, pc.spin);
  const Reconstruction rc = reconstruct_diagonal(ph, pcb, pc.probe_tip_deg, cal);

  ojson report = io::report_header("probe-" + state + "-seed" + std::to_string(cfg.seed), "probe", cfg);
  report["state"] = state;
  report["time_s"] = t;
  report["true_deviation_diagonal"] = io::to_json(deviation_diagonal(rho));
  report["peaks_h"] = io::to_json(ph);
  report["peaks_c"] = io::to_json(pcb);
  report["reconstructed_diagonal"] = io::to_json(rc.diagonal);
  report["reconstruction_residual"] = rc.residual;
  write_report(g, "probe_report.json", report);
  write_spectrum_files(g, "probe_h", sp.h, pc.spin);
  write_spectrum_files(g, "probe_c", sp.c, pc.spin);
  std::cout << "reconstructed deviation diagonal:";
  for (double v : rc.diagonal)
    std::cout << ' ' << v;
  std::cout << "\n";
  return rc.consistent ? kExitOk : kExitSolver;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hyperpolarized two-qubit NMR quantum computer simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed_value = 0;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--out", g.out_dir, "Output directory");
  auto *seed_opt = app.add_option("--seed", seed_value, "Random seed (overrides config)");
  app.add_flag("--svg", g.svg, "Also write SVG plots");

  auto *trace = app.add_subcommand("enhance-trace", "Enhancement trajectory eps(t) as CSV");
  double duration = 4500.0, step = 10.0;
  trace->add_option("--duration", duration, "Trace length in seconds")->capture_default_str();
  trace->add_option("--step", step, "Sampling step in seconds")->capture_default_str();

  auto *eff = app.add_subcommand("effpure", "Effective pure state preparation");
  std::optional<std::string> eff_mode;
  eff->add_option("--mode", eff_mode, "multi | single")->check(CLI::IsMember({"multi", "single"}));

  auto *grv = app.add_subcommand("grover", "Two-qubit Grover search");
  std::optional<std::string> target, grv_mode, order;
  bool all = false, shared = false;
  auto *target_opt = grv->add_option("--target", target, "Marked element 00|01|10|11");
  auto *all_opt = grv->add_flag("--all", all, "Run all four cases");
  target_opt->excludes(all_opt);
  grv->add_option("--mode", grv_mode, "multi | single (per-case samples)")->check(CLI::IsMember({"multi", "single"}));
  grv->add_flag("--shared-sample", shared, "Run the cases back to back on one sample");
  grv->add_option("--order", order, "permutation-major | case-major (with --shared-sample)")
      ->check(CLI::IsMember({"permutation-major", "case-major"}));

  auto *prb = app.add_subcommand("probe", "Small-tip probe and diagonal reconstruction");
  std::string state = "thermal";
  double probe_t = 0.0;
  prb->add_option("--state", state, "thermal | enhanced")->check(CLI::IsMember({"thermal", "enhanced"}));
  prb->add_option("--time", probe_t, "Sample time in seconds for the enhanced state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }
  if (*seed_opt)
    g.seed = seed_value;

  try {
    if (*trace)
      return cmd_enhance_trace(g, duration, step);
    if (*eff)
      return cmd_effpure(g, eff_mode);
    if (*grv) {
      if (!all && !target) {
        std::cerr << "grover: one of --target or --all is required\n";
        return kExitUsage;
      }
      if (target)
        GroverCase::parse(*target);
      return cmd_grover(g, target, all, shared, grv_mode, order);
    }
    if (*prb)
      return cmd_probe(g, state, probe_t);
  } catch (const io::ConfigError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularSystemError &e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DegenerateInputError &e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ReconstructionError &e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const io::OutputError &e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
