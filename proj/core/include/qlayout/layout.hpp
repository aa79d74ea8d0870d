#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace qlayout {

enum class Method { Ss, Gf, Gsf };

std::string method_name(Method m);
Method method_from_string(const std::string& name);  // throws std::invalid_argument

class LayoutError : public std::runtime_error {
 public:
  explicit LayoutError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Partial injective map from logical qubit index to physical qubit index.
class LayoutMap {
 public:
  Method method = Method::Ss;
  bool fallback_augmented = false;

  /// Throws LayoutError if `logical` is already assigned, `physical` is
  /// already in use, or either index is negative.
  void assign(int logical, int physical);

  bool contains(int logical) const { return assignment_.count(logical) != 0; }
  bool physical_used(int physical) const { return used_physical_.count(physical) != 0; }

  /// Physical index of `logical`, or nullopt when unassigned.
  std::optional<int> physical(int logical) const;

  /// Physical index of `logical`; throws LayoutError when unassigned.
  int at(int logical) const;

  const std::map<int, int>& assignment() const { return assignment_; }
  std::map<int, int> inverse() const;

  std::size_t size() const { return assignment_.size(); }
  bool empty() const { return assignment_.empty(); }

  int max_physical() const;  // -1 when empty

  bool operator==(const LayoutMap& other) const {
    return assignment_ == other.assignment_;
  }

 private:
  std::map<int, int> assignment_;
  std::set<int> used_physical_;
};

/// Serializes {method, device, assignment} as stable, byte-reproducible JSON.
std::string layout_json(const LayoutMap& layout, const std::string& device_name,
                        const std::string& method);

/// Parses the assignment back out of layout_json output.
LayoutMap layout_from_json(const std::string& text);

}  // namespace qlayout
