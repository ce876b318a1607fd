#include "hotv/json_writer.hpp"

#include <cmath>
#include <stdexcept>

#include "hotv/io_util.hpp"

namespace hotv {

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void append_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    // Infinities are representable only via the ExtReal constructor, which
    // maps them to strings; a raw non-finite double is a programming error.
    throw std::logic_error("JsonValue: non-finite double");
  }
  std::string text = format_double17(v);
  // Ensure the token re-parses as a JSON number with a fractional part so
  // readers do not silently coerce to integer types.
  if (text.find_first_of(".eE") == std::string::npos &&
      text.find_first_not_of("-0123456789") == std::string::npos) {
    text += ".0";
  }
  out += text;
}

}  // namespace

JsonValue::JsonValue(const ExtReal& v) {
  if (v.is_finite()) {
    kind_ = Kind::kDouble;
    double_ = v.value();
  } else {
    kind_ = Kind::kString;
    string_ = v.is_pos_inf() ? "inf" : "-inf";
  }
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::kArray;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::kObject;
  return v;
}

JsonValue& JsonValue::push_back(JsonValue v) {
  if (kind_ != Kind::kArray) {
    throw std::logic_error("JsonValue: push_back on non-array");
  }
  items_.push_back(std::move(v));
  return items_.back();
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  if (kind_ != Kind::kObject) {
    throw std::logic_error("JsonValue: set on non-object");
  }
  for (auto& [k, existing] : members_) {
    if (k == key) {
      existing = std::move(v);
      return existing;
    }
  }
  members_.emplace_back(key, std::move(v));
  return members_.back().second;
}

void JsonValue::write(std::string& out, int indent, int depth) const {
  const auto newline_pad = [&](int level) {
    if (indent > 0) {
      out.push_back('\n');
      out.append(static_cast<std::size_t>(indent) * level, ' ');
    }
  };

  switch (kind_) {
    case Kind::kNull: out += "null"; break;
    case Kind::kBool: out += bool_ ? "true" : "false"; break;
    case Kind::kInt: out += std::to_string(int_); break;
    case Kind::kDouble: append_double(out, double_); break;
    case Kind::kString: append_escaped(out, string_); break;
    case Kind::kArray: {
      out.push_back('[');
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) out.push_back(',');
        newline_pad(depth + 1);
        items_[i].write(out, indent, depth + 1);
      }
      if (!items_.empty()) newline_pad(depth);
      out.push_back(']');
      break;
    }
    case Kind::kObject: {
      out.push_back('{');
      for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i > 0) out.push_back(',');
        newline_pad(depth + 1);
        append_escaped(out, members_[i].first);
        out += indent > 0 ? ": " : ":";
        members_[i].second.write(out, indent, depth + 1);
      }
      if (!members_.empty()) newline_pad(depth);
      out.push_back('}');
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out.push_back('\n');
  return out;
}

}  // namespace hotv
