// Copyright 2026 The topobs Authors
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

#include "cli/commands.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/table.h"
#include "topobs/design.h"
#include "topobs/error.h"
#include "topobs/evolve.h"
#include "topobs/spectral.h"
#include "topobs/twophoton.h"

namespace topobs::cli {

namespace fs = std::filesystem;

namespace {

fs::path output_dir(const RunConfig& config, const Overrides& flags) {
  return fs::path(flags.out.value_or(config.output_dir));
}

const DeviceConfig& device_config(const RunConfig& config) {
  if (!config.device) throw ConfigError(config.source.string() + ": device: section required");
  return *config.device;
}

double configured_center(const DeviceConfig& device) {
  try {
    return center_coupling(device);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("device.") + e.what());
  }
}

struct Built {
  DeviceConfig config;
  double phi;
  double center;
  DeviceProfile profile;
};

Built build(const RunConfig& config) {
  const DeviceConfig& device = device_config(config);
  const double center = configured_center(device);
  const double phi = resolve_phi(device);
  return {device, phi, center, build_device(device, phi, center)};
}

int steps_for(const DeviceProfile& profile, int configured, const Overrides& flags) {
  const int steps = flags.steps.value_or(configured);
  return steps > 0 ? steps : default_steps(profile, 0.0, profile.length());
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  return v;
}

/// Width of the bulk gap holding `energy`, or of the narrowest gap when no
/// gap contains it.
double enclosing_gap(const std::vector<Band>& gaps, double energy) {
  double narrowest = gaps.empty() ? 0.0 : gaps.front().upper - gaps.front().lower;
  for (const Band& g : gaps) {
    const double width = std::max(0.0, g.upper - g.lower);
    if (energy > g.lower && energy < g.upper) return width;
    narrowest = std::min(narrowest, width);
  }
  return narrowest;
}

}  // namespace

Written cmd_bands(const RunConfig& config, const Overrides& flags) {
  const Built b = build(config);
  const BandTrace trace = band_trace(b.profile, config.bands.n_samples);
  const HarperSchedule schedule = build_schedule(b.config, b.phi);
  const int n = b.profile.n_sites();

  Table table;
  table.header.push_back("z_cm");
  for (int i = 1; i <= n; ++i) table.header.push_back("lambda_" + std::to_string(i));
  table.header.insert(table.header.end(), {"boundary_1", "boundary_2", "bulk_gap_per_cm"});
  const bool has_doublet = trace.boundary_tracks.size() == 2;
  for (std::size_t s = 0; s < trace.z_samples.size(); ++s) {
    const Eigen::Index row = static_cast<Eigen::Index>(s);
    std::vector<double> values{trace.z_samples[s]};
    for (int t = 0; t < n; ++t) values.push_back(trace.tracks(row, t));
    double centre = 0.0;
    if (has_doublet) {
      values.push_back(trace.boundary_tracks[0] + 1);
      values.push_back(trace.boundary_tracks[1] + 1);
      centre = 0.5 * (trace.tracks(row, trace.boundary_tracks[0]) +
                      trace.tracks(row, trace.boundary_tracks[1]));
    } else {
      values.insert(values.end(), {0.0, 0.0});
    }
    values.push_back(enclosing_gap(bulk_gaps(schedule, trace.z_samples[s]), centre));
    table.add_row(values);
  }
  const fs::path path = output_dir(config, flags) / "bands.tsv";
  write_table(path, table);
  return {path};
}

Written cmd_propagate(const RunConfig& config, const Overrides& flags) {
  const Built b = build(config);
  const Side side = flags.side.value_or(config.propagate.side);
  const std::string tag = to_string(side);
  const DeviceProfile& device = b.profile;
  const int n = device.n_sites();
  const int steps = steps_for(device, config.propagate.steps, flags);

  const ModeState input = boundary_injection_state(device, side);
  const TransferUnitary u = propagate(device, 0.0, device.length(), steps);
  const OutputDistribution out = single_photon_output(u, input);
  const fs::path dir = output_dir(config, flags);
  Written written;

  Table dist;
  dist.header = {"site", "probability"};
  for (int i = 0; i < n; ++i) dist.add_row({static_cast<double>(i + 1), out[i]});
  written.push_back(dir / ("distribution_" + tag + ".tsv"));
  write_table(written.back(), dist);

  const IntensityMap map = intensity_map(device, input, config.propagate.map_rows, steps);
  Table map_table;
  map_table.header.push_back("z_cm");
  for (int i = 1; i <= n; ++i) map_table.header.push_back("site_" + std::to_string(i));
  for (std::size_t r = 0; r < map.z_samples.size(); ++r) {
    std::vector<double> values{map.z_samples[r]};
    for (int i = 0; i < n; ++i) values.push_back(map.intensity(static_cast<Eigen::Index>(r), i));
    map_table.add_row(values);
  }
  written.push_back(dir / ("intensity_map_" + tag + ".tsv"));
  write_table(written.back(), map_table);

  const LeakageTrace leak =
      adiabaticity_leakage(device, input, config.propagate.leakage_checkpoints, steps);
  Table leak_table;
  leak_table.header = {"z_cm", "leakage"};
  for (std::size_t i = 0; i < leak.z_samples.size(); ++i) {
    leak_table.add_row({leak.z_samples[i], leak.leakage[i]});
  }
  written.push_back(dir / ("leakage_" + tag + ".tsv"));
  write_table(written.back(), leak_table);

  const int home = side == Side::kLeft ? 0 : n - 2;
  Report report;
  report.add("side", tag);
  report.add("phi_rad", b.phi);
  report.add("center_coupling_per_cm", b.center);
  report.add("steps", steps);
  report.add("unitarity_deviation", unitarity_deviation(u.matrix));
  report.add("home_edge_probability", out[home] + out[home + 1]);
  report.add("grouped_reflectivity", grouped_reflectivity(u, input, outer_port_groups(n)));
  report.add("max_leakage", leak.max_leakage);
  for (const auto& w : leak.warnings) report.add("warning", w);
  written.push_back(dir / ("propagate_" + tag + ".txt"));
  write_text_atomic(written.back(), report.str());
  return written;
}

Written cmd_hom(const RunConfig& config, const Overrides& flags) {
  const Built b = build(config);
  const HomSection& h = config.hom;
  const DeviceProfile& device = b.profile;
  const int steps = steps_for(device, h.steps, flags);
  const std::uint64_t seed = flags.seed.value_or(config.seed);

  const TransferUnitary u = propagate(device, 0.0, device.length(), steps);
  const ModeState left = boundary_injection_state(device, Side::kLeft);
  const ModeState right = boundary_injection_state(device, Side::kRight);
  const auto groups = outer_port_groups(device.n_sites());
  const DistinguishabilityModel model{h.overlap_at_zero, h.coherence_width_ps};
  HomCurve curve =
      hom_curve(u.matrix, left, right, groups, model, linspace(h.delay_min_ps, h.delay_max_ps,
                                                               h.delay_count));
  const bool counted = h.pairs_per_delay > 0.0;
  if (counted) attach_counts(curve, h.pairs_per_delay, seed);
  const VisibilityReport v = visibility(curve, h.far_delay_ps);

  const fs::path dir = output_dir(config, flags);
  Written written;
  Table table;
  table.header = {"delay_ps", "probability", "counts", "poisson_error"};
  for (std::size_t i = 0; i < curve.delays_ps.size(); ++i) {
    table.add_row({curve.delays_ps[i], curve.coincidence_probability[i],
                   counted ? static_cast<double>((*curve.sampled_counts)[i]) : 0.0,
                   counted ? (*curve.count_errors)[i] : 0.0});
  }
  written.push_back(dir / "hom_curve.tsv");
  write_table(written.back(), table);

  Report report;
  report.add("visibility", v.visibility);
  report.add("c_far", v.c_far);
  report.add("c_min", v.c_min);
  report.add("far_samples", v.far_samples);
  if (v.count_visibility) {
    report.add("count_visibility", *v.count_visibility);
    report.add("count_visibility_error", *v.count_error);
  }
  if (h.reference_visibility) {
    const Measured own = v.count_visibility ? Measured{*v.count_visibility, *v.count_error}
                                            : Measured{v.visibility, 0.0};
    const Measured rel = relative_visibility(own, *h.reference_visibility);
    report.add("relative_visibility", rel.value);
    report.add("relative_visibility_error", rel.error);
  }
  report.add("reflectivity_left", grouped_reflectivity(u, left, groups));
  report.add("reflectivity_right", grouped_reflectivity(u, right, groups));
  report.add("overlap_at_zero", h.overlap_at_zero);
  report.add("seed", std::to_string(seed));
  report.add("steps", steps);
  written.push_back(dir / "visibility.txt");
  write_text_atomic(written.back(), report.str());
  return written;
}

Written cmd_optimize(const RunConfig& config, const Overrides& flags) {
  const DeviceConfig& device = device_config(config);
  const double phi = resolve_phi(device);
  CenterCouplingOptions options = config.optimize.options;
  options.kappa0_per_cm = device.kappa0_per_cm;
  if (flags.steps) options.steps = *flags.steps;
  const fs::path dir = output_dir(config, flags);

  auto write_sweep = [&](const std::vector<std::pair<double, double>>& sweep) {
    Table table;
    table.header = {"c_per_cm", "reflectivity"};
    for (const auto& [c, r] : sweep) table.add_row({c, r});
    write_table(dir / "optimize_sweep.tsv", table);
  };

  OptimizationResult result;
  try {
    result = optimize_center_coupling(
        [&](double c) { return build_device(device, phi, c); }, options);
  } catch (const OptimizationError& e) {
    write_sweep(e.sweep());
    throw;
  }
  write_sweep(result.evaluations);

  RunConfig updated = config;
  updated.device->phi_rad = phi;
  updated.device->center_coupling_per_cm = result.parameter;
  const DeviceProfile optimized = build_device(*updated.device);
  const double r_right = boundary_reflectivity(optimized, Side::kRight, options.steps);

  Report report;
  report.add("phi_rad", phi);
  report.add("c_star_per_cm", result.parameter);
  report.add("c_star_over_kappa0", result.parameter / device.kappa0_per_cm);
  report.add("reflectivity_left", result.objective + options.target_reflectivity);
  report.add("reflectivity_right", r_right);
  report.add("residual", result.objective);
  report.add("tolerance", options.tolerance);
  report.add("iterations", result.iterations);
  report.add("bracket_lo_per_cm", result.bracket_lo);
  report.add("bracket_hi_per_cm", result.bracket_hi);
  report.add("converged", result.converged ? "true" : "false");

  Written written{dir / "optimize_sweep.tsv", dir / "optimize_report.txt",
                  dir / "run_optimized.json"};
  write_text_atomic(written[1], report.str());
  write_text_atomic(written[2], dump_run_config(updated));
  return written;
}

Written cmd_layout(const RunConfig& config, const Overrides& flags) {
  const Built b = build(config);
  const Layout layout =
      export_layout(b.profile, b.config.geometry, config.layout.pitch_cm, config.layout.anchor_um);
  const int n = b.profile.n_sites();
  Table table;
  table.header.push_back("z_cm");
  for (int i = 1; i <= n; ++i) table.header.push_back("x_" + std::to_string(i) + "_um");
  for (std::size_t r = 0; r < layout.z_samples.size(); ++r) {
    std::vector<double> values{layout.z_samples[r]};
    for (int i = 0; i < n; ++i) {
      values.push_back(layout.positions_um(static_cast<Eigen::Index>(r), i));
    }
    table.add_row(values);
  }
  const fs::path dir = output_dir(config, flags);
  Written written{dir / "layout.tsv", dir / "layout_meta.txt"};
  write_table(written[0], table);

  Report meta;
  meta.add("n_sites", n);
  meta.add("kappa0_per_cm", b.config.kappa0_per_cm);
  meta.add("b_bar", std::to_string(b.config.b_bar.numerator) + "/" +
                        std::to_string(b.config.b_bar.denominator));
  meta.add("phi_rad", b.phi);
  meta.add("center_coupling_per_cm", b.center);
  meta.add("length_cm", b.config.length_cm);
  meta.add("a_per_cm", b.config.geometry.amplitude_a_per_cm);
  meta.add("b_per_um", b.config.geometry.decay_b_per_um);
  meta.add("pitch_cm", config.layout.pitch_cm);
  meta.add("anchor_um", config.layout.anchor_um);
  write_text_atomic(written[1], meta.str());
  return written;
}

Written cmd_fidelity(const std::optional<RunConfig>& config, const Overrides& flags,
                     const std::string& simulated, const std::string& measured) {
  std::string a = simulated;
  std::string b = measured;
  if ((a.empty() || b.empty()) && config && config->fidelity) {
    if (a.empty()) a = config->fidelity->simulated;
    if (b.empty()) b = config->fidelity->measured;
  }
  if (a.empty() || b.empty()) {
    throw ConfigError("fidelity: two distribution files are required (arguments or config)");
  }
  for (const auto& f : {a, b}) {
    if (!fs::is_regular_file(f)) throw ConfigError("fidelity: cannot read '" + f + "'");
  }
  auto load = [](const std::string& path) {
    try {
      return OutputDistribution(read_distribution(path), 1e-9);
    } catch (const ContractViolation& e) {
      throw ContractViolation(path + ": " + e.what());
    }
  };
  const double f = fidelity(load(a), load(b));

  Report report;
  report.add("fidelity", f);
  report.add("simulated", a);
  report.add("measured", b);
  const fs::path dir =
      fs::path(flags.out.value_or(config ? config->output_dir : std::string("out")));
  const fs::path path = dir / "fidelity.txt";
  write_text_atomic(path, report.str());
  return {path};
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"topobs: boundary-state photonic lattice simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides flags;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string side;
  int steps = 0;
  app.add_option("--config", config_path, "Run configuration file (JSON)");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for count sampling");
  auto* side_opt = app.add_option("--side", side, "Injection side")
                       ->check(CLI::IsMember({"left", "right"}));
  auto* steps_opt = app.add_option("--steps", steps, "Integration steps (0 = default)")
                        ->check(CLI::NonNegativeNumber);

  auto* bands = app.add_subcommand("bands", "Eigenvalue tracks along the device");
  auto* prop = app.add_subcommand("propagate", "Single-photon propagation of a boundary state");
  auto* hom = app.add_subcommand("hom", "Two-photon HOM curve and visibility");
  auto* opt = app.add_subcommand("optimize", "Centre coupling for a 50:50 split");
  auto* layout = app.add_subcommand("layout", "Waveguide positions along the device");
  auto* fid = app.add_subcommand("fidelity", "Classical fidelity of two distributions");
  std::vector<std::string> files;
  fid->add_option("files", files, "Simulated and measured distribution tables")
      ->expected(0, 2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (*out_opt) flags.out = out_dir;
  if (*seed_opt) flags.seed = seed;
  if (*side_opt) flags.side = side_from_string(side);
  if (*steps_opt) flags.steps = steps;

  try {
    std::optional<RunConfig> config;
    if (!config_path.empty()) config = load_run_config(config_path);
    Written written;
    if (*fid) {
      if (files.size() == 1) throw ConfigError("fidelity: expected two files, got one");
      written = cmd_fidelity(config, flags, files.empty() ? "" : files[0],
                             files.empty() ? "" : files[1]);
      std::ifstream report(written.front());
      out << report.rdbuf();
    } else {
      if (!config) throw ConfigError("--config is required for this subcommand");
      if (*bands) written = cmd_bands(*config, flags);
      if (*prop) written = cmd_propagate(*config, flags);
      if (*hom) written = cmd_hom(*config, flags);
      if (*opt) written = cmd_optimize(*config, flags);
      if (*layout) written = cmd_layout(*config, flags);
    }
    for (const auto& path : written) out << "wrote " << path.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const OptimizationError& e) {
    err << "optimization failed: " << e.what() << "\n";
    err << "c_per_cm\tvalue\n";
    for (const auto& [c, r] : e.sweep()) {
      err << format_number(c) << "\t" << format_number(r) << "\n";
    }
    return kExitOptimization;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace topobs::cli
