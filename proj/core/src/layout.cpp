#include "qlayout/layout.hpp"

#include <json.hpp>

namespace qlayout {

std::string method_name(Method m) {
  switch (m) {
    case Method::Ss: return "ss";
    case Method::Gf: return "gf";
    case Method::Gsf: return "gsf";
  }
  return "gsf";
}

Method method_from_string(const std::string& name) {
  if (name == "ss") return Method::Ss;
  if (name == "gf") return Method::Gf;
  if (name == "gsf") return Method::Gsf;
  throw std::invalid_argument("unknown mapping method '" + name +
                              "' (expected ss, gf or gsf)");
}

void LayoutMap::assign(int logical, int physical) {
  if (logical < 0 || physical < 0) {
    throw LayoutError("layout indices must be non-negative");
  }
  if (assignment_.count(logical)) {
    throw LayoutError("logical qubit " + std::to_string(logical) +
                      " assigned twice");
  }
  if (used_physical_.count(physical)) {
    throw LayoutError("physical qubit " + std::to_string(physical) +
                      " assigned twice (injectivity violation)");
  }
  assignment_.emplace(logical, physical);
  used_physical_.insert(physical);
}

std::optional<int> LayoutMap::physical(int logical) const {
  auto it = assignment_.find(logical);
  if (it == assignment_.end()) return std::nullopt;
  return it->second;
}

int LayoutMap::at(int logical) const {
  auto it = assignment_.find(logical);
  if (it == assignment_.end()) {
    throw LayoutError("logical qubit " + std::to_string(logical) + " is unmapped");
  }
  return it->second;
}

std::map<int, int> LayoutMap::inverse() const {
  std::map<int, int> inv;
  for (const auto& [l, p] : assignment_) inv.emplace(p, l);
  return inv;
}

int LayoutMap::max_physical() const {
  int best = -1;
  for (const auto& [l, p] : assignment_) best = std::max(best, p);
  return best;
}

std::string layout_json(const LayoutMap& layout, const std::string& device_name,
                        const std::string& method) {
  nlohmann::ordered_json doc;
  doc["method"] = method;
  doc["device"] = device_name;
  nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
  for (const auto& [l, p] : layout.assignment()) {
    assignment[std::to_string(l)] = p;
  }
  doc["assignment"] = assignment;
  return doc.dump(2) + "\n";
}

LayoutMap layout_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  LayoutMap layout;
  for (const auto& [key, value] : doc.at("assignment").items()) {
    layout.assign(std::stoi(key), value.get<int>());
  }
  return layout;
}

}  // namespace qlayout
