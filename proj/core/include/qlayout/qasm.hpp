#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qlayout/layout.hpp"

namespace qlayout::qasm {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column,
             const std::string& source_name = "");
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Reference to one bit of a declared register: `reg` indexes into
/// Circuit::qregs (or cregs for classical operands).
struct RegRef {
  int reg = -1;
  int index = -1;
  bool operator==(const RegRef&) const = default;
};

/// Guard of an `if (creg == value)` statement.
struct Condition {
  int creg = -1;
  std::int64_t value = 0;
  bool operator==(const Condition&) const = default;
};

enum class GateKind : std::uint8_t { Gate, Measure, Barrier, Reset };

struct Gate {
  std::string opcode;
  std::vector<std::string> params;        // verbatim source text
  std::vector<double> param_values;       // evaluated values, aligned with params
  std::vector<RegRef> qubits;
  std::vector<RegRef> clbits;             // measure target
  std::optional<Condition> condition;
  GateKind kind = GateKind::Gate;

  bool is_two_qubit() const { return qubits.size() == 2; }
  bool is_directive() const { return kind == GateKind::Barrier; }
};

struct RegDecl {
  std::string name;
  int size = 0;
};

struct Circuit {
  std::vector<RegDecl> qregs;
  std::vector<RegDecl> cregs;
  std::vector<Gate> gates;
  std::string source_name;
  std::vector<std::string> includes;      // include targets, source order

  bool has_qelib_include() const;

  int qubit_count() const;
  int clbit_count() const;

  /// Flattened logical index of a qubit operand: registers are laid out
  /// contiguously in declaration order.
  int flat_qubit(const RegRef& ref) const;
  int flat_clbit(const RegRef& ref) const;

  /// Logical qubits appearing as an operand of any non-barrier statement.
  std::set<int> referenced_qubits() const;

  /// Appearance count per logical qubit over non-barrier statements.
  std::map<int, long> qubit_usage() const;

  /// Gates eligible for pair extraction: plain, unconditional, two-operand.
  bool pair_eligible(const Gate& g) const;
};

/// Parses the OpenQASM 2.0 subset: register declarations, gate applications
/// (built-in and opaque custom calls), measure, barrier, reset, if-guards.
/// Whole-register operands are expanded to per-index gates. Gate definition
/// bodies are skipped; calls to them stay opaque.
Circuit parse_qasm(std::string_view source, const std::string& source_name = "");
Circuit parse_qasm_file(const std::string& path);

/// Emits the circuit over a single physical register `q[device_width]`,
/// rewriting every qubit operand through `layout`. Classical registers and
/// gate order are preserved. Throws LayoutError on unmapped operands,
/// duplicated physical targets, or physical indices >= device_width.
std::string emit_qasm(const Circuit& circuit, const LayoutMap& layout,
                      int device_width);

}  // namespace qlayout::qasm
