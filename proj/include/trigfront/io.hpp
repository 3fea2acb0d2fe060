#pragma once

#include <map>
#include <string>
#include <vector>

#include "trigfront/types.hpp"

namespace trigfront {

// 17 significant digits, '.' decimal point regardless of locale
std::string fmt17(double v);

// Insertion-ordered JSON object whose numbers always use fmt17.
class JsonObject {
 public:
  JsonObject& set(const std::string& key, double v);
  JsonObject& set(const std::string& key, int v);
  JsonObject& set(const std::string& key, bool v);
  JsonObject& set(const std::string& key, const std::string& v);
  JsonObject& set(const std::string& key, const char* v) { return set(key, std::string(v)); }
  JsonObject& set(const std::string& key, cplx v);  // {"re": .., "im": ..}
  JsonObject& set(const std::string& key, const std::vector<double>& v);
  JsonObject& set(const std::string& key, const std::vector<std::string>& v);
  JsonObject& set(const std::string& key, const JsonObject& v);
  JsonObject& set(const std::string& key, const std::vector<JsonObject>& v);
  std::string dump(int indent = 2) const;

 private:
  std::string render(int indent, int depth) const;
  std::vector<std::pair<std::string, std::string>> raw_;      // pre-rendered scalars
  std::map<std::string, JsonObject> objects_;                  // nested, referenced by key in raw_
  std::map<std::string, std::vector<JsonObject>> arrays_;
};

std::string json_escape(const std::string& s);

void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::string csv_string(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace trigfront
