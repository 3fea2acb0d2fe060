#include "trigfront/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "trigfront/errors.hpp"

namespace trigfront {

std::string fmt17(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string json_escape(const std::string& s) {
  std::string o = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': o += "\\\""; break;
      case '\\': o += "\\\\"; break;
      case '\n': o += "\\n"; break;
      case '\t': o += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char b[8];
          std::snprintf(b, sizeof b, "\\u%04x", ch);
          o += b;
        } else {
          o += ch;
        }
    }
  }
  return o + "\"";
}

namespace {
// non-finite values are not JSON numbers
std::string json_number(double v) { return std::isfinite(v) ? fmt17(v) : json_escape(fmt17(v)); }

void put(std::vector<std::pair<std::string, std::string>>& raw, const std::string& k, std::string v) {
  for (auto& [key, val] : raw)
    if (key == k) {
      val = std::move(v);
      return;
    }
  raw.emplace_back(k, std::move(v));
}

const std::string kObj = "\x01obj", kArr = "\x01arr";
}  // namespace

JsonObject& JsonObject::set(const std::string& k, double v) { return put(raw_, k, json_number(v)), *this; }
JsonObject& JsonObject::set(const std::string& k, int v) { return put(raw_, k, std::to_string(v)), *this; }
JsonObject& JsonObject::set(const std::string& k, bool v) { return put(raw_, k, v ? "true" : "false"), *this; }
JsonObject& JsonObject::set(const std::string& k, const std::string& v) { return put(raw_, k, json_escape(v)), *this; }
JsonObject& JsonObject::set(const std::string& k, cplx v) {
  JsonObject o;
  o.set("re", v.real()).set("im", v.imag());
  return set(k, o);
}
JsonObject& JsonObject::set(const std::string& k, const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + json_number(v[i]);
  return put(raw_, k, s + "]"), *this;
}
JsonObject& JsonObject::set(const std::string& k, const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + json_escape(v[i]);
  return put(raw_, k, s + "]"), *this;
}
JsonObject& JsonObject::set(const std::string& k, const JsonObject& v) {
  objects_[k] = v;
  return put(raw_, k, kObj), *this;
}
JsonObject& JsonObject::set(const std::string& k, const std::vector<JsonObject>& v) {
  arrays_[k] = v;
  return put(raw_, k, kArr), *this;
}

std::string JsonObject::render(int indent, int depth) const {
  if (raw_.empty()) return "{}";
  const std::string pad(indent * (depth + 1), ' '), close(indent * depth, ' ');
  const char* nl = indent ? "\n" : "";
  std::string s = std::string("{") + nl;
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    const auto& [k, v] = raw_[i];
    s += pad + json_escape(k) + ": ";
    if (v == kObj) {
      s += objects_.at(k).render(indent, depth + 1);
    } else if (v == kArr) {
      const auto& a = arrays_.at(k);
      s += "[";
      for (std::size_t j = 0; j < a.size(); ++j) s += (j ? ", " : "") + a[j].render(indent, depth + 1);
      s += "]";
    } else {
      s += v;
    }
    s += (i + 1 < raw_.size() ? "," : "") + std::string(nl);
  }
  return s + close + "}";
}

std::string JsonObject::dump(int indent) const { return render(indent, 0) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
}

std::string csv_string(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  s += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + fmt17(r[i]);
    s += "\n";
  }
  return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  write_text(path, csv_string(header, rows));
}

}  // namespace trigfront
