#include "trigfront/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "trigfront/errors.hpp"

namespace trigfront {

const std::map<std::string, std::string>& config_defaults() {
  static const std::map<std::string, std::string> d = {
      {"model.chi_plus", "1"},        {"model.chi_minus", "-1"},     {"model.gamma", "-1"},
      {"model.beta", "1"},            {"model.ell", "20"},           {"model.c", "1.6220759259174"},
      {"model.eta", "0"},             {"numerics.h", "0.05"},        {"numerics.margin", "15"},
      {"hopf.normalization", "inner_product"},
      {"simulate.domain_length", "400"}, {"simulate.n_modes", "1280"}, {"simulate.dt", "0.02"},
      {"simulate.t_final", "500"},    {"simulate.record_every", "5"}, {"simulate.x_probe", "0"},
      {"simulate.scheme", "sbdf2"},   {"simulate.dealias", "true"},  {"simulate.blowup_cap", "1000"},
      {"simulate.threads", "1"},      {"output.dir", "."},
  };
  return d;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto r = std::from_chars(b, e, out);
  return r.ec == std::errc() && r.ptr == e;
}

std::string canonical_value(const std::string& v) {
  double d;
  if (parse_double(v, d)) return fmt17(d);
  std::string l = v;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "true" || l == "yes" || l == "on") return "true";
  if (l == "false" || l == "no" || l == "off") return "false";
  return v;
}

}  // namespace

std::string Config::get(const std::string& key) const {
  if (auto it = values.find(key); it != values.end()) return it->second;
  auto d = config_defaults().find(key);
  if (d == config_defaults().end()) throw PreconditionError("unknown config key " + key);
  return d->second;
}

double Config::number(const std::string& key) const {
  double v;
  if (!parse_double(get(key), v)) throw ValidationError(key + " must be a number, got '" + get(key) + "'");
  return v;
}

int Config::integer(const std::string& key) const {
  double v = number(key);
  if (v != static_cast<int>(v)) throw ValidationError(key + " must be an integer");
  return static_cast<int>(v);
}

bool Config::flag(const std::string& key) const {
  auto c = canonical_value(get(key));
  if (c == "true" || c == "1") return true;
  if (c == "false" || c == "0") return false;
  throw ValidationError(key + " must be a boolean");
}

void Config::set(const std::string& key, const std::string& value) {
  if (!config_defaults().count(key)) throw ValidationError("unknown config key " + key);
  values[key] = trim(value);
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') errors.push_back("line " + std::to_string(lineno) + ": malformed section header");
      else section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    if (section.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": key outside of a [section]");
      continue;
    }
    std::string key = section + "." + trim(line.substr(0, eq));
    if (!config_defaults().count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": unknown key " + key);
      continue;
    }
    std::string value = trim(line.substr(eq + 1));
    double num;
    if (parse_double(config_defaults().at(key), num) && !parse_double(value, num))
      errors.push_back("line " + std::to_string(lineno) + ": " + key + " expects a number, got '" + value + "'");
    else
      cfg.values[key] = value;
  }
  if (!errors.empty()) {
    std::string msg = "config invalid:";
    for (const auto& e : errors) msg += " [" + e + "]";
    throw ValidationError(msg);
  }
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("config file not found: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string env_name(const std::string& key) {
  std::string s = "TRIGFRONT_" + key;
  for (auto& ch : s) ch = ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

void apply_env_overrides(Config& cfg) {
  for (const auto& [key, def] : config_defaults())
    if (const char* v = std::getenv(env_name(key).c_str())) cfg.values[key] = trim(v);
}

ModelParams model_params(const Config& cfg) {
  ModelParams p;
  std::vector<std::string> errors;
  auto read = [&](const char* key, double& dst) {
    double v;
    if (parse_double(cfg.get(key), v)) dst = v;
    else errors.push_back(std::string(key) + " is not a number");
  };
  read("model.chi_plus", p.chi_plus);
  read("model.chi_minus", p.chi_minus);
  read("model.gamma", p.gamma);
  read("model.beta", p.beta);
  read("model.ell", p.ell);
  read("model.c", p.c);
  read("model.eta", p.eta);
  for (const auto& v : p.violations()) errors.push_back(v);
  if (!errors.empty()) {
    std::string msg = "invalid model parameters:";
    for (const auto& e : errors) msg += " [" + e + "]";
    throw ValidationError(msg);
  }
  return p;
}

std::string canonical_config(const Config& cfg) {
  std::string s;
  for (const auto& [key, def] : config_defaults()) s += key + "=" + canonical_value(cfg.get(key)) + "\n";
  return s;
}

std::string config_hash(const Config& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical_config(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* tool_version() { return "0.1.0"; }

JsonObject RunManifest::to_json() const {
  JsonObject t;
  for (const auto& [k, v] : timings) t.set(k, v);
  JsonObject o;
  o.set("command", command).set("config_hash", config_hash).set("tool_version", tool_version);
  o.set("outputs", outputs).set("timings", t);
  return o;
}

void RunManifest::write(const std::string& path) const { write_text(path, to_json().dump()); }

}  // namespace trigfront
