#include "lifelog/attr.hpp"

#include <cstdio>

namespace lifelog {

namespace {

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

struct TextVisitor {
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(double v) const { return real_text(v); }
  std::string operator()(const std::string& v) const { return v; }
  std::string operator()(const std::vector<std::string>& v) const { return join(v); }
  std::string operator()(const Date& d) const { return d.slashed(); }
};

}  // namespace

bool is_numeric(const AttrValue& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

std::optional<double> as_double(const AttrValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

std::string to_text(const AttrValue& v) { return std::visit(TextVisitor{}, v); }
std::string to_text(const SlotValue& v) { return std::visit(TextVisitor{}, v); }

}  // namespace lifelog
