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

#include "cli/run_config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "topobs/error.h"

namespace topobs::cli {

namespace {

using nlohmann::json;

/// Best-effort line of a key path: each component is searched for as a
/// quoted key after the previous one.
int locate(const std::string& text, const std::vector<std::string>& keys) {
  std::size_t pos = 0;
  for (const auto& key : keys) {
    const std::size_t found = text.find("\"" + key + "\"", pos);
    if (found == std::string::npos) return 0;
    pos = found + key.size() + 2;
  }
  if (keys.empty()) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

class Node {
 public:
  Node(const json& value, std::vector<std::string> keys, std::string path,
       const std::string& text, const std::filesystem::path& source)
      : value_(value), keys_(std::move(keys)), path_(std::move(path)), text_(text),
        source_(source) {
    if (!value_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& message, const std::string& key = {}) const {
    std::vector<std::string> keys = keys_;
    if (!key.empty()) keys.push_back(key);
    std::ostringstream msg;
    msg << (source_.empty() ? std::string("<config>") : source_.string());
    if (const int line = locate(text_, keys); line > 0) msg << ":" << line;
    msg << ": " << (key.empty() ? path_ : join(key)) << ": " << message;
    throw ConfigError(msg.str());
  }

  /// `detail` is "field: message" relative to this node.
  [[noreturn]] void fail_detail(const std::string& detail) const {
    const std::string field = detail.substr(0, detail.find(':'));
    std::vector<std::string> keys = keys_;
    keys.push_back(field.substr(0, field.find_first_of(".[")));
    std::ostringstream msg;
    msg << (source_.empty() ? std::string("<config>") : source_.string());
    if (const int line = locate(text_, keys); line > 0) msg << ":" << line;
    msg << ": " << join(detail);
    throw ConfigError(msg.str());
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return value_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return value_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail("expected a number", key);
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail("must be finite", key);
    return d;
  }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) fail("expected an integer", key);
    return v.get<long long>();
  }

  int int_or(const std::string& key, int fallback, int lo = std::numeric_limits<int>::min()) {
    if (!has(key)) return fallback;
    const long long v = integer(key);
    if (v < lo || v > std::numeric_limits<int>::max()) {
      fail("must be an integer >= " + std::to_string(lo), key);
    }
    return static_cast<int>(v);
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail("expected a string", key);
    return v.get<std::string>();
  }

  Node child(const std::string& key) {
    const json& v = raw(key);
    std::vector<std::string> keys = keys_;
    keys.push_back(key);
    if (!v.is_object()) fail("expected an object", key);
    return Node(v, std::move(keys), join(key), text_, source_);
  }

  void finish() const {
    for (const auto& item : value_.items()) {
      if (!seen_.count(item.key())) fail("unknown key", item.key());
    }
  }

 private:
  const json& value_;
  std::vector<std::string> keys_;
  std::string path_;
  const std::string& text_;
  const std::filesystem::path& source_;
  std::set<std::string> seen_;
};

DeviceConfig parse_device(Node node) {
  if (!node.has("kind")) node.fail("missing required key", "kind");
  DeviceConfig::Kind kind;
  try {
    kind = device_kind_from_string(node.string("kind"));
  } catch (const DomainError& e) {
    node.fail(e.what(), "kind");
  }
  DeviceConfig config = template_config(kind);
  if (!node.has("kappa0_per_cm")) node.fail("missing required key", "kappa0_per_cm");
  config.kappa0_per_cm = node.number("kappa0_per_cm");
  config.n_sites = node.int_or("n_sites", config.n_sites, 1);
  if (node.has("b_bar")) {
    Node b = node.child("b_bar");
    config.b_bar.numerator = b.int_or("numerator", config.b_bar.numerator);
    config.b_bar.denominator = b.int_or("denominator", config.b_bar.denominator, 1);
    b.finish();
  }
  if (node.has("phi_rad")) {
    const json& v = node.raw("phi_rad");
    if (v.is_string() && v.get<std::string>() == "auto") {
      config.phi_rad.reset();
    } else {
      config.phi_rad = node.number("phi_rad");
    }
  }
  config.length_cm = node.number_or("length_cm", config.length_cm);
  if (node.has("lambda_profile")) {
    Node lp = node.child("lambda_profile");
    try {
      config.lambda_kind = interpolation_from_string(lp.string("kind"));
    } catch (const DomainError& e) {
      lp.fail(e.what(), "kind");
    } catch (const json::exception&) {
      lp.fail("missing required key", "kind");
    }
    if (!lp.has("breakpoints")) lp.fail("missing required key", "breakpoints");
    const json& bp = lp.raw("breakpoints");
    if (!bp.is_array()) lp.fail("expected an array of [z_cm, lambda] pairs", "breakpoints");
    for (std::size_t i = 0; i < bp.size(); ++i) {
      const json& pair = bp[i];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        lp.fail("entry " + std::to_string(i) + " must be a [z_cm, lambda] pair", "breakpoints");
      }
      config.lambda_breakpoints.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    lp.finish();
  }
  if (node.has("center_coupling_per_cm")) {
    config.center_coupling_per_cm = node.number("center_coupling_per_cm");
  }
  if (node.has("geometry")) {
    Node g = node.child("geometry");
    config.geometry.amplitude_a_per_cm =
        g.number_or("a_per_cm", config.geometry.amplitude_a_per_cm);
    config.geometry.decay_b_per_um = g.number_or("b_per_um", config.geometry.decay_b_per_um);
    g.finish();
  }
  node.finish();
  try {
    config.validate();
  } catch (const DomainError& e) {
    node.fail_detail(e.what());
  }
  if (config.lambda_kind && *config.lambda_kind != Interpolation::kConstant) {
    try {
      Profile::interpolated(*config.lambda_kind, config.lambda_breakpoints);
    } catch (const DomainError& e) {
      node.fail_detail(std::string("lambda_profile.breakpoints: ") + e.what());
    }
  }
  return config;
}

}  // namespace

Side side_from_string(const std::string& name) {
  if (name == "left") return Side::kLeft;
  if (name == "right") return Side::kRight;
  throw ConfigError("side must be 'left' or 'right', got '" + name + "'");
}

std::string to_string(Side side) { return side == Side::kLeft ? "left" : "right"; }

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError((source.empty() ? std::string("<config>") : source.string()) + ": " +
                      e.what());
  }
  RunConfig config;
  config.source = source;
  try {
    Node root(doc, {}, "", text, source);
    if (root.has("device")) config.device = parse_device(root.child("device"));
    if (root.has("output_dir")) config.output_dir = root.string("output_dir");
    if (root.has("seed")) {
      const long long seed = root.integer("seed");
      if (seed < 0) root.fail("must be non-negative", "seed");
      config.seed = static_cast<std::uint64_t>(seed);
    }
    if (root.has("bands")) {
      Node s = root.child("bands");
      config.bands.n_samples = s.int_or("n_samples", config.bands.n_samples, 2);
      s.finish();
    }
    if (root.has("propagate")) {
      Node s = root.child("propagate");
      if (s.has("side")) {
        const std::string side = s.string("side");
        if (side != "left" && side != "right") s.fail("must be 'left' or 'right'", "side");
        config.propagate.side = side_from_string(side);
      }
      config.propagate.steps = s.int_or("steps", config.propagate.steps, 0);
      config.propagate.map_rows = s.int_or("map_rows", config.propagate.map_rows, 2);
      config.propagate.leakage_checkpoints =
          s.int_or("leakage_checkpoints", config.propagate.leakage_checkpoints, 1);
      s.finish();
    }
    if (root.has("hom")) {
      Node s = root.child("hom");
      HomSection& h = config.hom;
      h.overlap_at_zero = s.number_or("overlap_at_zero", h.overlap_at_zero);
      h.coherence_width_ps = s.number_or("coherence_width_ps", h.coherence_width_ps);
      h.delay_min_ps = s.number_or("delay_min_ps", h.delay_min_ps);
      h.delay_max_ps = s.number_or("delay_max_ps", h.delay_max_ps);
      h.delay_count = s.int_or("delay_count", h.delay_count, 2);
      h.far_delay_ps = s.number_or("far_delay_ps", h.far_delay_ps);
      h.pairs_per_delay = s.number_or("pairs_per_delay", h.pairs_per_delay);
      h.steps = s.int_or("steps", h.steps, 0);
      if (s.has("reference_visibility")) {
        Node r = s.child("reference_visibility");
        h.reference_visibility = Measured{r.number("value"), r.number_or("error", 0.0)};
        r.finish();
      }
      if (!(h.overlap_at_zero >= 0.0 && h.overlap_at_zero <= 1.0)) {
        s.fail("must lie in [0, 1]", "overlap_at_zero");
      }
      if (!(h.coherence_width_ps > 0.0)) s.fail("must be positive", "coherence_width_ps");
      if (!(h.delay_min_ps < h.delay_max_ps)) s.fail("must be below delay_max_ps", "delay_min_ps");
      if (!(h.pairs_per_delay >= 0.0)) s.fail("must be non-negative", "pairs_per_delay");
      s.finish();
    }
    if (root.has("optimize")) {
      Node s = root.child("optimize");
      CenterCouplingOptions& o = config.optimize.options;
      o.target_reflectivity = s.number_or("target", o.target_reflectivity);
      o.tolerance = s.number_or("tolerance", o.tolerance);
      o.start_fraction = s.number_or("start_fraction", o.start_fraction);
      o.max_fraction = s.number_or("max_fraction", o.max_fraction);
      o.max_iterations = s.int_or("max_iterations", o.max_iterations, 1);
      o.steps = s.int_or("steps", o.steps, 0);
      if (!(o.target_reflectivity > 0.0 && o.target_reflectivity < 1.0)) {
        s.fail("must lie in (0, 1)", "target");
      }
      if (!(o.tolerance > 0.0)) s.fail("must be positive", "tolerance");
      if (!(o.start_fraction > 0.0)) s.fail("must be positive", "start_fraction");
      if (!(o.max_fraction > 0.0)) s.fail("must be positive", "max_fraction");
      s.finish();
    }
    if (root.has("layout")) {
      Node s = root.child("layout");
      config.layout.pitch_cm = s.number_or("pitch_cm", config.layout.pitch_cm);
      config.layout.anchor_um = s.number_or("anchor_um", config.layout.anchor_um);
      if (!(config.layout.pitch_cm > 0.0)) s.fail("must be positive", "pitch_cm");
      s.finish();
    }
    if (root.has("fidelity")) {
      Node s = root.child("fidelity");
      config.fidelity = FidelitySection{s.string("simulated"), s.string("measured")};
      s.finish();
    }
    root.finish();
  } catch (const json::exception& e) {
    throw ConfigError((source.empty() ? std::string("<config>") : source.string()) + ": " +
                      e.what());
  }
  if (config.device) config.optimize.options.kappa0_per_cm = config.device->kappa0_per_cm;
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path);
}

std::string dump_run_config(const RunConfig& config) {
  json doc;
  if (config.device) {
    const DeviceConfig& d = *config.device;
    json dev;
    dev["kind"] = std::string(to_string(d.kind));
    dev["n_sites"] = d.n_sites;
    dev["kappa0_per_cm"] = d.kappa0_per_cm;
    dev["b_bar"] = {{"numerator", d.b_bar.numerator}, {"denominator", d.b_bar.denominator}};
    if (d.phi_rad) {
      dev["phi_rad"] = *d.phi_rad;
    } else {
      dev["phi_rad"] = "auto";
    }
    dev["length_cm"] = d.length_cm;
    if (d.lambda_kind) {
      json bp = json::array();
      for (const auto& k : d.lambda_breakpoints) bp.push_back({k.z, k.value});
      dev["lambda_profile"] = {{"kind", std::string(to_string(*d.lambda_kind))},
                               {"breakpoints", bp}};
    }
    if (d.center_coupling_per_cm) dev["center_coupling_per_cm"] = *d.center_coupling_per_cm;
    dev["geometry"] = {{"a_per_cm", d.geometry.amplitude_a_per_cm},
                       {"b_per_um", d.geometry.decay_b_per_um}};
    doc["device"] = dev;
  }
  doc["output_dir"] = config.output_dir;
  doc["seed"] = config.seed;
  doc["bands"] = {{"n_samples", config.bands.n_samples}};
  doc["propagate"] = {{"side", to_string(config.propagate.side)},
                      {"steps", config.propagate.steps},
                      {"map_rows", config.propagate.map_rows},
                      {"leakage_checkpoints", config.propagate.leakage_checkpoints}};
  const HomSection& h = config.hom;
  doc["hom"] = {{"overlap_at_zero", h.overlap_at_zero},
                {"coherence_width_ps", h.coherence_width_ps},
                {"delay_min_ps", h.delay_min_ps},
                {"delay_max_ps", h.delay_max_ps},
                {"delay_count", h.delay_count},
                {"far_delay_ps", h.far_delay_ps},
                {"pairs_per_delay", h.pairs_per_delay},
                {"steps", h.steps}};
  if (h.reference_visibility) {
    doc["hom"]["reference_visibility"] = {{"value", h.reference_visibility->value},
                                          {"error", h.reference_visibility->error}};
  }
  const CenterCouplingOptions& o = config.optimize.options;
  doc["optimize"] = {{"target", o.target_reflectivity},
                     {"tolerance", o.tolerance},
                     {"start_fraction", o.start_fraction},
                     {"max_fraction", o.max_fraction},
                     {"max_iterations", o.max_iterations},
                     {"steps", o.steps}};
  doc["layout"] = {{"pitch_cm", config.layout.pitch_cm}, {"anchor_um", config.layout.anchor_um}};
  if (config.fidelity) {
    doc["fidelity"] = {{"simulated", config.fidelity->simulated},
                       {"measured", config.fidelity->measured}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace topobs::cli
