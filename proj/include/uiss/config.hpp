#pragma once

// Run configuration: a fixed set of documented keys, read from flat
// "key = value" text ('#' comments) and overridable from the command line.
// Precedence: command-line flag > config file > default.

#include "uiss/eval.hpp"
#include "uiss/solver.hpp"
#include "uiss/synth.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace uiss::config {

struct KeyInfo {
  std::string name;
  std::string default_value;
  std::string help;
};

// Every recognised key, in manifest order.
const std::vector<KeyInfo>& keys();

class RunConfig {
 public:
  RunConfig();

  // Throws ValidationError for unknown keys.
  void set(const std::string& key, const std::string& value);
  void load(std::istream& in, const std::string& source);
  void load_file(const std::string& path);

  const std::string& get(const std::string& key) const;
  bool has_value(const std::string& key) const { return !get(key).empty(); }
  double real(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma-separated

  solver::HyperParams hyper() const;
  synth::SynthConfig synth() const;
  eval::CvOptions cv() const;

  // "key = value" for every key, in keys() order.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace uiss::config
