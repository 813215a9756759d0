// Copyright 2026 The nqsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "nqsdyn/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace nqsdyn {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> &known_keys() {
  static const std::set<std::string> keys = {
      "model.length", "model.j1", "model.j2", "model.periodic",
      "rbm.n_hidden", "rbm.init_scale", "rbm.seed",
      "sampler.mode", "sampler.chains", "sampler.samples", "sampler.thinning",
      "sampler.burn_in", "sampler.seed", "sampler.sector",
      "sr.tau", "sr.shift_initial", "sr.shift_decay", "sr.shift_floor", "sr.cg_tol",
      "sr.cg_max_iters", "sr.max_steps", "sr.energy_tol", "sr.window",
      "cv.lambda", "cv.cv_tol", "cv.cv_max_iters", "cv.warm_start", "cv.overlap_samples",
      "cv.patience",
      "sweep.omega_min", "sweep.omega_max", "sweep.omega_step", "sweep.eta",
      "sweep.source_site", "sweep.k", "sweep.block_size",
      "oracle.cap", "oracle.dense_cap",
      "compare.l2_tol", "compare.peak_tol", "compare.zero_k_fraction",
      "compare.negative_fraction",
      "output.directory", "output.checkpoint"};
  return keys;
}

class Reader {
 public:
  explicit Reader(const pt::ptree &tree) : tree_(tree) {}

  std::string text(const std::string &key, const std::string &fallback, bool required = false) const {
    const auto value = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!value) {
      if (required) throw ValidationError("missing required config key: " + key);
      return fallback;
    }
    return trim(*value);
  }

  template <typename T>
  T number(const std::string &key, T fallback, bool required = false) const {
    const std::string raw = text(key, "", required);
    if (raw.empty()) return fallback;
    try {
      std::size_t used = 0;
      T value{};
      if constexpr (std::is_same_v<T, double>) {
        value = std::stod(raw, &used);
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (raw.front() == '-') throw std::invalid_argument(raw);
        value = std::stoull(raw, &used);
      } else if constexpr (std::is_same_v<T, std::int64_t>) {
        value = std::stoll(raw, &used);
      } else {
        value = std::stoi(raw, &used);
      }
      if (used != raw.size()) throw std::invalid_argument(raw);
      return value;
    } catch (const std::exception &) {
      throw ValidationError(fmt::format("invalid value '{}' for config key {}", raw, key));
    }
  }

  bool flag(const std::string &key, bool fallback) const {
    const std::string raw = text(key, "");
    if (raw.empty()) return fallback;
    if (raw == "on" || raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "off" || raw == "false" || raw == "0" || raw == "no") return false;
    throw ValidationError(fmt::format("invalid value '{}' for config key {}", raw, key));
  }

  static std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }

 private:
  const pt::ptree &tree_;
};

std::vector<int> parse_k_list(const std::string &raw) {
  std::vector<int> out;
  if (raw.empty() || raw == "all") return out;
  std::stringstream in(raw);
  for (std::string item; std::getline(in, item, ',');) {
    item = Reader::trim(item);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw ValidationError(fmt::format("invalid value '{}' for config key sweep.k", raw));
    }
  }
  return out;
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::vector<int> RunConfig::momenta() const {
  if (!sweep.k_indices.empty()) return sweep.k_indices;
  std::vector<int> all(std::size_t(model.length));
  for (int m = 0; m < model.length; ++m) all[std::size_t(m)] = m;
  return all;
}

void RunConfig::validate() const {
  if (model.length < 2) throw ValidationError("model.length must be at least 2");
  if (n_hidden < 0) throw ValidationError("rbm.n_hidden must be >= 0");
  if (init_scale < 0.0) throw ValidationError("rbm.init_scale must be >= 0");
  sampler.validate();
  if (std::abs(sampler.sector) > model.length || (sampler.sector + model.length) % 2 != 0) {
    throw ValidationError("sampler.sector is incompatible with model.length");
  }
  sr.validate();
  if (!(cv.learning_rate > 0.0)) throw ValidationError("cv.lambda must be positive");
  if (!(cv.tolerance > 0.0)) throw ValidationError("cv.cv_tol must be positive");
  if (cv.max_iterations < 1) throw ValidationError("cv.cv_max_iters must be positive");
  if (cv.patience < 1) throw ValidationError("cv.patience must be positive");
  if (cv.overlap_samples < 1) throw ValidationError("cv.overlap_samples must be positive");
  if (!(sweep.omega_step > 0.0)) throw ValidationError("sweep.omega_step must be positive");
  if (!(sweep.eta > 0.0)) throw ValidationError("sweep.eta must be positive");
  if (!(sweep.omega_max >= sweep.omega_min)) throw ValidationError("frequency grid is empty");
  if (sweep.source_site != 0) {
    throw ValidationError("sweep.source_site must be 0 (other sites follow by translation)");
  }
  if (sweep.block_size < 1) throw ValidationError("sweep.block_size must be positive");
  for (int m : sweep.k_indices) {
    if (m < 0 || m >= model.length) {
      throw ValidationError(fmt::format("sweep.k entry {} outside 0..{}", m, model.length - 1));
    }
  }
  if (oracle.cap < 1 || oracle.dense_cap < 1) throw ValidationError("oracle caps must be positive");
  if (output_directory.empty()) throw ValidationError("output.directory must not be empty");
  if (checkpoint_name.empty()) throw ValidationError("output.checkpoint must not be empty");
}

RunConfig parse_config(const std::string &text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ValidationError(std::string("malformed config: ") + e.message());
  }
  for (const auto &[section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ValidationError("config key outside a section: " + section);
    }
    for (const auto &[key, value] : body) {
      const std::string full = section + "." + key;
      if (!known_keys().contains(full)) throw ValidationError("unknown config key: " + full);
    }
  }

  const Reader r(tree);
  RunConfig c;
  c.model.length = r.number<int>("model.length", 0, true);
  c.model.j1 = r.number<double>("model.j1", 1.0, true);
  c.model.j2 = r.number<double>("model.j2", 0.0, true);
  c.model.periodic = r.flag("model.periodic", true);

  c.n_hidden = r.number<int>("rbm.n_hidden", 0);
  c.init_scale = r.number<double>("rbm.init_scale", c.init_scale);
  c.rbm_seed = r.number<std::uint64_t>("rbm.seed", c.rbm_seed);

  const std::string mode = r.text("sampler.mode", "mc");
  if (mode == "mc") {
    c.sampling_mode = SamplingMode::kMonteCarlo;
  } else if (mode == "exact") {
    c.sampling_mode = SamplingMode::kExact;
  } else {
    throw ValidationError("invalid value '" + mode + "' for config key sampler.mode (mc|exact)");
  }
  c.sampler.n_chains = r.number<int>("sampler.chains", c.sampler.n_chains);
  c.sampler.n_samples_per_chain = r.number<int>("sampler.samples", c.sampler.n_samples_per_chain);
  c.sampler.thinning = r.number<int>("sampler.thinning", c.sampler.thinning);
  c.sampler.burn_in = r.number<int>("sampler.burn_in", c.sampler.burn_in);
  c.sampler.seed = r.number<std::uint64_t>("sampler.seed", c.sampler.seed);
  c.sampler.sector = r.number<int>("sampler.sector", c.sampler.sector);

  c.sr.learning_rate = r.number<double>("sr.tau", c.sr.learning_rate);
  c.sr.shift_initial = r.number<double>("sr.shift_initial", c.sr.shift_initial);
  c.sr.shift_decay = r.number<double>("sr.shift_decay", c.sr.shift_decay);
  c.sr.shift_floor = r.number<double>("sr.shift_floor", c.sr.shift_floor);
  c.sr.cg_tolerance = r.number<double>("sr.cg_tol", c.sr.cg_tolerance);
  c.sr.cg_max_iterations = r.number<int>("sr.cg_max_iters", c.sr.cg_max_iterations);
  c.sr.max_steps = r.number<int>("sr.max_steps", c.sr.max_steps);
  c.sr.energy_tolerance = r.number<double>("sr.energy_tol", c.sr.energy_tolerance);
  c.sr.convergence_window = r.number<int>("sr.window", c.sr.convergence_window);

  c.cv.learning_rate = r.number<double>("cv.lambda", c.cv.learning_rate);
  c.cv.tolerance = r.number<double>("cv.cv_tol", c.cv.tolerance);
  c.cv.max_iterations = r.number<int>("cv.cv_max_iters", c.cv.max_iterations);
  c.cv.warm_start = r.flag("cv.warm_start", c.cv.warm_start);
  c.cv.overlap_samples = r.number<std::int64_t>("cv.overlap_samples", c.cv.overlap_samples);
  c.cv.patience = r.number<int>("cv.patience", c.cv.patience);
  c.cv.sr = c.sr;

  c.sweep.omega_min = r.number<double>("sweep.omega_min", c.sweep.omega_min);
  c.sweep.omega_max = r.number<double>("sweep.omega_max", c.sweep.omega_max);
  c.sweep.omega_step = r.number<double>("sweep.omega_step", c.sweep.omega_step);
  c.sweep.eta = r.number<double>("sweep.eta", c.sweep.eta);
  c.sweep.source_site = r.number<int>("sweep.source_site", c.sweep.source_site);
  c.sweep.k_indices = parse_k_list(r.text("sweep.k", ""));
  c.sweep.block_size = r.number<int>("sweep.block_size", c.sweep.block_size);

  c.oracle.cap = r.number<std::int64_t>("oracle.cap", c.oracle.cap);
  c.oracle.dense_cap = r.number<std::int64_t>("oracle.dense_cap", c.oracle.dense_cap);

  c.compare.l2_tolerance = r.number<double>("compare.l2_tol", c.compare.l2_tolerance);
  c.compare.peak_tolerance = r.number<double>("compare.peak_tol", c.compare.peak_tolerance);
  c.compare.zero_k_fraction = r.number<double>("compare.zero_k_fraction", c.compare.zero_k_fraction);
  c.compare.negative_fraction =
      r.number<double>("compare.negative_fraction", c.compare.negative_fraction);

  c.output_directory = r.text("output.directory", c.output_directory.string());
  c.checkpoint_name = r.text("output.checkpoint", c.checkpoint_name);

  ChainHamiltonian check(c.model);  // rejects degenerate bond sets
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const RunConfig &c) {
  std::string k_list = "all";
  if (!c.sweep.k_indices.empty()) {
    k_list.clear();
    for (std::size_t i = 0; i < c.sweep.k_indices.size(); ++i) {
      k_list += (i ? "," : "") + std::to_string(c.sweep.k_indices[i]);
    }
  }
  std::string out;
  out += "[model]\n";
  out += fmt::format("length = {}\nj1 = {}\nj2 = {}\nperiodic = {}\n\n", c.model.length,
                     g17(c.model.j1), g17(c.model.j2), c.model.periodic ? "on" : "off");
  out += "[rbm]\n";
  out += fmt::format("n_hidden = {}\ninit_scale = {}\nseed = {}\n\n", c.n_hidden,
                     g17(c.init_scale), c.rbm_seed);
  out += "[sampler]\n";
  out += fmt::format(
      "mode = {}\nchains = {}\nsamples = {}\nthinning = {}\nburn_in = {}\nseed = {}\nsector = {}\n\n",
      c.sampling_mode == SamplingMode::kExact ? "exact" : "mc", c.sampler.n_chains,
      c.sampler.n_samples_per_chain, c.sampler.thinning, c.sampler.burn_in, c.sampler.seed,
      c.sampler.sector);
  out += "[sr]\n";
  out += fmt::format(
      "tau = {}\nshift_initial = {}\nshift_decay = {}\nshift_floor = {}\ncg_tol = {}\n"
      "cg_max_iters = {}\nmax_steps = {}\nenergy_tol = {}\nwindow = {}\n\n",
      g17(c.sr.learning_rate), g17(c.sr.shift_initial), g17(c.sr.shift_decay),
      g17(c.sr.shift_floor), g17(c.sr.cg_tolerance), c.sr.cg_max_iterations, c.sr.max_steps,
      g17(c.sr.energy_tolerance), c.sr.convergence_window);
  out += "[cv]\n";
  out += fmt::format(
      "lambda = {}\ncv_tol = {}\ncv_max_iters = {}\nwarm_start = {}\noverlap_samples = {}\n"
      "patience = {}\n\n",
      g17(c.cv.learning_rate), g17(c.cv.tolerance), c.cv.max_iterations,
      c.cv.warm_start ? "on" : "off", c.cv.overlap_samples, c.cv.patience);
  out += "[sweep]\n";
  out += fmt::format(
      "omega_min = {}\nomega_max = {}\nomega_step = {}\neta = {}\nsource_site = {}\nk = {}\n"
      "block_size = {}\n\n",
      g17(c.sweep.omega_min), g17(c.sweep.omega_max), g17(c.sweep.omega_step),
      g17(c.sweep.eta), c.sweep.source_site, k_list, c.sweep.block_size);
  out += "[oracle]\n";
  out += fmt::format("cap = {}\ndense_cap = {}\n\n", c.oracle.cap, c.oracle.dense_cap);
  out += "[compare]\n";
  out += fmt::format("l2_tol = {}\npeak_tol = {}\nzero_k_fraction = {}\nnegative_fraction = {}\n\n",
                     g17(c.compare.l2_tolerance), g17(c.compare.peak_tolerance),
                     g17(c.compare.zero_k_fraction), g17(c.compare.negative_fraction));
  out += "[output]\n";
  out += fmt::format("directory = {}\ncheckpoint = {}\n", c.output_directory.string(),
                     c.checkpoint_name);
  return out;
}

}  // namespace nqsdyn
