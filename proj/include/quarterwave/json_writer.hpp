#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace quarterwave {

/// Serializes a double with 17 significant digits, enough to reproduce the
/// exact bit pattern on read-back, using '.' as the decimal separator
/// regardless of locale.
inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Minimal JSON document builder.  Object keys keep insertion order, and
/// numbers format deterministically, so equal inputs serialize to equal
/// bytes.
class JsonValue {
 public:
  static JsonValue number(double v) { return JsonValue(Kind::Number, json_number(v)); }
  static JsonValue integer(long long v) { return JsonValue(Kind::Number, std::to_string(v)); }
  static JsonValue boolean(bool v) { return JsonValue(Kind::Literal, v ? "true" : "false"); }
  static JsonValue null() { return JsonValue(Kind::Literal, "null"); }
  static JsonValue string(std::string v) { return JsonValue(Kind::String, std::move(v)); }
  static JsonValue array() { return JsonValue(Kind::Array, {}); }
  static JsonValue object() { return JsonValue(Kind::Object, {}); }

  JsonValue& push(JsonValue v) {
    items_.push_back({"", std::move(v)});
    return *this;
  }

  JsonValue& set(std::string key, JsonValue v) {
    items_.push_back({std::move(key), std::move(v)});
    return *this;
  }

  std::string dump(int indent = 2) const {
    std::string out;
    write(out, indent, 0);
    out += "\n";
    return out;
  }

 private:
  enum class Kind { Number, Literal, String, Array, Object };

  JsonValue(Kind kind, std::string scalar)
      : kind_(kind), scalar_(std::move(scalar)) {}

  static void escape(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += '"';
  }

  void write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    switch (kind_) {
      case Kind::Number:
      case Kind::Literal:
        out += scalar_;
        return;
      case Kind::String:
        escape(out, scalar_);
        return;
      case Kind::Array: {
        if (items_.empty()) {
          out += "[]";
          return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad;
          items_[i].second.write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ",";
          out += "\n";
        }
        out += close_pad + "]";
        return;
      }
      case Kind::Object: {
        if (items_.empty()) {
          out += "{}";
          return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < items_.size(); ++i) {
          out += pad;
          escape(out, items_[i].first);
          out += ": ";
          items_[i].second.write(out, indent, depth + 1);
          if (i + 1 < items_.size()) out += ",";
          out += "\n";
        }
        out += close_pad + "}";
        return;
      }
    }
  }

  Kind kind_;
  std::string scalar_;
  std::vector<std::pair<std::string, JsonValue>> items_;
};

}  // namespace quarterwave
