#pragma once

// Minimal JSON document builder with deterministic serialization: object keys
// keep insertion order, doubles print via "%.17g" (shortest round-trippable
// form is not needed; 17 significant digits always round-trips), and
// extended reals map to the strings "inf" / "-inf" so documents stay valid
// JSON. Byte-identical output for identical inputs is part of the contract.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hotv/ext_real.hpp"

namespace hotv {

class JsonValue {
 public:
  JsonValue() : kind_(Kind::kNull) {}
  JsonValue(bool b) : kind_(Kind::kBool), bool_(b) {}
  JsonValue(int v) : kind_(Kind::kInt), int_(v) {}
  JsonValue(long v) : kind_(Kind::kInt), int_(v) {}
  JsonValue(long long v) : kind_(Kind::kInt), int_(v) {}
  JsonValue(std::size_t v) : kind_(Kind::kInt), int_(static_cast<long long>(v)) {}
  JsonValue(double v) : kind_(Kind::kDouble), double_(v) {}
  JsonValue(const char* s) : kind_(Kind::kString), string_(s) {}
  JsonValue(std::string s) : kind_(Kind::kString), string_(std::move(s)) {}
  JsonValue(const ExtReal& v);  // finite -> double, infinite -> "inf"/"-inf"

  static JsonValue array();
  static JsonValue object();

  bool is_object() const { return kind_ == Kind::kObject; }
  bool is_array() const { return kind_ == Kind::kArray; }

  // Array append.
  JsonValue& push_back(JsonValue v);

  // Object insert-or-assign; keys keep first-insertion order.
  JsonValue& set(const std::string& key, JsonValue v);

  // Serialize. indent = 0 emits compact one-line JSON; indent > 0 pretty
  // prints with that many spaces per level. A trailing newline is appended.
  std::string dump(int indent = 2) const;

 private:
  enum class Kind { kNull, kBool, kInt, kDouble, kString, kArray, kObject };

  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;
};

}  // namespace hotv
