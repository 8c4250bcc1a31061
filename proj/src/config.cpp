#include "uiss/config.hpp"

#include "uiss/error.hpp"
#include "uiss/io.hpp"

#include <fstream>
#include <sstream>

namespace uiss::config {

const std::vector<KeyInfo>& keys() {
  static const std::vector<KeyInfo> table = {
      // solver
      {"lambda1", "0.1", "feature selector sparsity weight"},
      {"lambda2", "0.1", "instance selector sparsity weight"},
      {"lambda3", "1", "graph smoothness weight"},
      {"k", "10", "latent dimension"},
      {"tol_outer", "0.0001", "relative change of P and Q that ends the outer loop"},
      {"tol_inner", "1e-05", "relative change of V and W that ends the inner loop"},
      {"max_outer", "200", "outer iteration cap"},
      {"max_inner", "100", "inner iteration cap"},
      {"ridge_eps", "0", "ridge added to every linear system"},
      {"scaling", "none", "input scaling before fitting: none or rms"},
      {"seed", "0", "random seed for every stage"},
      // synthetic data
      {"m", "100", "synthetic node count"},
      {"tau", "0.2", "geometric graph distance threshold"},
      {"n", "400", "synthetic instance count (before outliers)"},
      {"gt_size", "10", "ground-truth subgraph size"},
      {"noise_sigma", "5", "Gaussian noise standard deviation"},
      {"n_outliers", "0", "injected outlier instances"},
      {"swap_noise_means", "false", "put noise mean 70 on ground-truth nodes and 10 elsewhere"},
      // inputs
      {"x", "", "data matrix file"},
      {"edges", "", "edge list file"},
      {"labels", "", "label file (0/1, -1 = invalid)"},
      {"gt", "", "ground-truth node list"},
      {"outliers", "", "outlier flag list (0/1 per instance)"},
      {"p", "", "feature selector matrix file"},
      {"q", "", "instance selector matrix file"},
      {"out", ".", "output directory"},
      // selection / evaluation
      {"feature_frac", "0.1", "fraction of features to select in rank"},
      {"instance_frac", "0.1", "fraction of instances to select in rank"},
      {"mode", "features", "eval mode: features, instances, outliers or grid"},
      {"folds", "5", "cross-validation folds"},
      {"repeats", "10", "cross-validation repetitions"},
      {"svm_c", "1", "classifier C (reg = 1 / (C n_train))"},
      {"svm_iters", "2000", "classifier subgradient iterations"},
      {"feature_fracs", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1", "feature fractions for eval"},
      {"instance_fracs", "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5", "instance fractions for eval"},
      {"dim", "2", "embedding dimension"},
  };
  return table;
}

RunConfig::RunConfig() {
  for (const auto& k : keys()) values_[k.name] = k.default_value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
  it->second = value;
}

void RunConfig::load(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto fields = io::split_fields(line);
    if (fields.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected 'key = value'");
    const std::string_view view(line);
    const auto key_fields = io::split_fields(view.substr(0, eq));
    const auto value_fields = io::split_fields(view.substr(eq + 1));
    if (key_fields.size() != 1 || value_fields.size() > 1) throw ParseError(source, lineno, "expected 'key = value'");
    const std::string key(key_fields[0]);
    if (!values_.count(key)) throw ParseError(source, lineno, "unknown config key '" + key + "'");
    values_[key] = value_fields.empty() ? std::string() : std::string(value_fields[0]);
  }
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  load(in, path);
}

const std::string& RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::real(const std::string& key) const { return io::parse_real(get(key), "config:" + key, 0); }

long long RunConfig::integer(const std::string& key) const {
  return io::parse_integer(get(key), "config:" + key, 0);
}

std::size_t RunConfig::count(const std::string& key) const { return io::parse_index(get(key), "config:" + key, 0); }

bool RunConfig::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> RunConfig::reals(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(io::parse_real(item, "config:" + key, 0));
  }
  if (out.empty()) throw ValidationError("config key '" + key + "' needs at least one value");
  return out;
}

solver::HyperParams RunConfig::hyper() const {
  solver::HyperParams h;
  h.lambda1 = real("lambda1");
  h.lambda2 = real("lambda2");
  h.lambda3 = real("lambda3");
  h.k = static_cast<Eigen::Index>(count("k"));
  h.tol_outer = real("tol_outer");
  h.tol_inner = real("tol_inner");
  h.max_outer = static_cast<int>(integer("max_outer"));
  h.max_inner = static_cast<int>(integer("max_inner"));
  h.ridge_eps = real("ridge_eps");
  h.seed = static_cast<std::uint64_t>(count("seed"));
  h.scaling = solver::parse_scaling(get("scaling"));
  return h;
}

synth::SynthConfig RunConfig::synth() const {
  synth::SynthConfig c;
  c.m = count("m");
  c.tau = real("tau");
  c.n = count("n");
  c.gt_size = count("gt_size");
  c.noise_sigma = real("noise_sigma");
  c.n_outliers = count("n_outliers");
  c.seed = static_cast<std::uint64_t>(count("seed"));
  c.swap_noise_means = flag("swap_noise_means");
  return c;
}

eval::CvOptions RunConfig::cv() const {
  eval::CvOptions o;
  o.folds = count("folds");
  o.repeats = count("repeats");
  o.c = real("svm_c");
  o.iters = static_cast<int>(integer("svm_iters"));
  o.seed = static_cast<std::uint64_t>(count("seed"));
  return o;
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  for (const auto& k : keys()) out << k.name << " = " << values_.at(k.name) << '\n';
  return out.str();
}

}  // namespace uiss::config
