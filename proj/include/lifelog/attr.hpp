#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lifelog/date.hpp"

namespace lifelog {

// Typed episode attribute: integer (minutes), real (distances, one decimal),
// text, or a list of strings (grocery items).
using AttrValue = std::variant<std::int64_t, double, std::string, std::vector<std::string>>;
using AttrMap = std::map<std::string, AttrValue>;

// Value bound to a template slot. Dates only appear here, never as attributes.
using SlotValue = std::variant<std::int64_t, double, std::string, std::vector<std::string>, Date>;
using SlotMap = std::map<std::string, SlotValue>;

bool is_numeric(const AttrValue& v);
std::optional<double> as_double(const AttrValue& v);
// Plain text form: integers in decimal, reals with one decimal, lists joined by ", ".
std::string to_text(const AttrValue& v);
std::string to_text(const SlotValue& v);

}  // namespace lifelog
