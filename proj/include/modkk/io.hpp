#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace modkk {

// decimal with 17 significant digits: round-trips every double exactly
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

// ordered JSON document: keys serialize in insertion order, numbers through
// format_double, so equal inputs give byte-identical output
class JsonValue {
public:
  enum class Kind { null, boolean, integer, number, string, array, object };

  JsonValue() = default;

  static JsonValue object() {
    JsonValue v;
    v.kind_ = Kind::object;
    return v;
  }
  static JsonValue array() {
    JsonValue v;
    v.kind_ = Kind::array;
    return v;
  }
  static JsonValue str(std::string s) {
    JsonValue v;
    v.kind_ = Kind::string;
    v.str_ = std::move(s);
    return v;
  }
  static JsonValue num(double d) {
    JsonValue v;
    v.kind_ = Kind::number;
    v.num_ = d;
    return v;
  }
  static JsonValue integer(long long i) {
    JsonValue v;
    v.kind_ = Kind::integer;
    v.int_ = i;
    return v;
  }
  static JsonValue boolean(bool b) {
    JsonValue v;
    v.kind_ = Kind::boolean;
    v.bool_ = b;
    return v;
  }

  JsonValue& set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::object) throw Error("JsonValue::set on a non-object");
    fields_.emplace_back(key, std::move(v));
    return *this;
  }
  JsonValue& push(JsonValue v) {
    if (kind_ != Kind::array) throw Error("JsonValue::push on a non-array");
    items_.push_back(std::move(v));
    return *this;
  }

  void write(std::ostream& os, int indent = 0) const {
    const std::string pad(std::size_t(indent) * 2, ' ');
    const std::string pad_in(std::size_t(indent + 1) * 2, ' ');
    switch (kind_) {
      case Kind::null:
        os << "null";
        break;
      case Kind::boolean:
        os << (bool_ ? "true" : "false");
        break;
      case Kind::integer:
        os << int_;
        break;
      case Kind::number:
        if (std::isfinite(num_))
          os << format_double(num_);
        else
          os << '"' << format_double(num_) << '"';
        break;
      case Kind::string:
        write_escaped(os, str_);
        break;
      case Kind::array:
        if (items_.empty()) {
          os << "[]";
          break;
        }
        os << "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          os << pad_in;
          items_[i].write(os, indent + 1);
          os << (i + 1 < items_.size() ? ",\n" : "\n");
        }
        os << pad << ']';
        break;
      case Kind::object:
        if (fields_.empty()) {
          os << "{}";
          break;
        }
        os << "{\n";
        for (std::size_t i = 0; i < fields_.size(); ++i) {
          os << pad_in;
          write_escaped(os, fields_[i].first);
          os << ": ";
          fields_[i].second.write(os, indent + 1);
          os << (i + 1 < fields_.size() ? ",\n" : "\n");
        }
        os << pad << '}';
        break;
    }
  }

  std::string dump() const {
    std::ostringstream os;
    write(os);
    os << '\n';
    return os.str();
  }

private:
  static void write_escaped(std::ostream& os, const std::string& s) {
    os << '"';
    for (char ch : s) {
      switch (ch) {
        case '"': os << "\\\""; break;
        case '\\': os << "\\\\"; break;
        case '\n': os << "\\n"; break;
        case '\t': os << "\\t"; break;
        case '\r': os << "\\r"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", ch);
            os << buf;
          } else {
            os << ch;
          }
      }
    }
    os << '"';
  }

  Kind kind_ = Kind::null;
  std::vector<std::pair<std::string, JsonValue>> fields_;
  std::vector<JsonValue> items_;
  std::string str_;
  double num_ = 0.0;
  long long int_ = 0;
  bool bool_ = false;
};

// numeric CSV: header row, %.17g cells, '#'-prefixed footer lines
inline void write_csv(std::ostream& os, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows,
                      const std::vector<std::string>& footer = {}) {
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  os << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw Error("write_csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
      os << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
    os << '\n';
  }
  for (const auto& line : footer) os << "# " << line << '\n';
}

inline std::string csv_text(const std::vector<std::string>& columns,
                            const std::vector<std::vector<double>>& rows,
                            const std::vector<std::string>& footer = {}) {
  std::ostringstream os;
  write_csv(os, columns, rows, footer);
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_text_file: cannot open " + path);
  out << text;
  if (!out) throw Error("write_text_file: write failed for " + path);
}

}  // namespace modkk
