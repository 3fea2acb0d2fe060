#pragma once

#include <map>
#include <string>
#include <vector>

#include "trigfront/io.hpp"
#include "trigfront/params.hpp"

namespace trigfront {

// Flat "section.key" → value store. Files look like
//
//   [model]
//   ell = 20        # plateau half-length
//   [simulate]
//   dt = 0.02
//
// Environment variables TRIGFRONT_<SECTION>_<KEY> (upper case) override file values.
struct Config {
  std::map<std::string, std::string> values;  // only explicitly set keys

  std::string get(const std::string& key) const;  // falls back to the default
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  void set(const std::string& key, const std::string& value);  // ValidationError on unknown key
};

// every known key with its default; units are the nondimensional ones of the co-moving PDE
const std::map<std::string, std::string>& config_defaults();

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);
std::string env_name(const std::string& key);  // "model.ell" → "TRIGFRONT_MODEL_ELL"
void apply_env_overrides(Config& cfg);

// validated ModelParams; ValidationError lists every violated invariant
ModelParams model_params(const Config& cfg);

// FNV-1a over the canonical "key=value" lines of the resolved config (defaults included, keys sorted,
// numbers re-rendered). Key order and number formatting do not change it, nor does spelling out a default
std::string config_hash(const Config& cfg);
std::string canonical_config(const Config& cfg);

const char* tool_version();

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string tool_version;
  std::vector<std::string> outputs;
  std::map<std::string, double> timings;  // seconds

  JsonObject to_json() const;
  void write(const std::string& path) const;
};

}  // namespace trigfront
