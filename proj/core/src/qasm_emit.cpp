#include <string>

#include "qlayout/qasm.hpp"

namespace qlayout::qasm {

namespace {

std::string physical_operand(int physical) {
  return "q[" + std::to_string(physical) + "]";
}

}  // namespace

std::string emit_qasm(const Circuit& circuit, const LayoutMap& layout,
                      int device_width) {
  if (layout.max_physical() >= device_width) {
    throw LayoutError("layout uses physical qubit " +
                      std::to_string(layout.max_physical()) +
                      " but device width is " + std::to_string(device_width));
  }
  std::string out;
  out += "OPENQASM 2.0;\n";
  for (const auto& inc : circuit.includes) {
    out += "include \"" + inc + "\";\n";
  }
  out += "qreg q[" + std::to_string(device_width) + "];\n";
  for (const auto& cr : circuit.cregs) {
    out += "creg " + cr.name + "[" + std::to_string(cr.size) + "];\n";
  }

  auto mapped = [&](const RegRef& ref) {
    int logical = circuit.flat_qubit(ref);
    auto phys = layout.physical(logical);
    if (!phys) {
      throw LayoutError("logical qubit " + std::to_string(logical) +
                        " is unmapped but used by the circuit");
    }
    return *phys;
  };

  for (const auto& g : circuit.gates) {
    std::string line;
    if (g.condition) {
      line += "if(" + circuit.cregs[g.condition->creg].name +
              "==" + std::to_string(g.condition->value) + ") ";
    }
    if (g.kind == GateKind::Barrier) {
      // Unmapped barrier operands belong to otherwise-unused qubits; drop them.
      std::string operands;
      for (const auto& q : g.qubits) {
        auto phys = layout.physical(circuit.flat_qubit(q));
        if (!phys) continue;
        if (!operands.empty()) operands += ",";
        operands += physical_operand(*phys);
      }
      if (operands.empty()) continue;
      out += line + "barrier " + operands + ";\n";
      continue;
    }
    if (g.kind == GateKind::Measure) {
      const auto& c = g.clbits.at(0);
      out += line + "measure " + physical_operand(mapped(g.qubits.at(0))) + " -> " +
             circuit.cregs[c.reg].name + "[" + std::to_string(c.index) + "];\n";
      continue;
    }
    line += g.opcode;
    if (!g.params.empty()) {
      line += "(";
      for (std::size_t i = 0; i < g.params.size(); ++i) {
        if (i) line += ",";
        line += g.params[i];
      }
      line += ")";
    }
    line += " ";
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) line += ",";
      line += physical_operand(mapped(g.qubits[i]));
    }
    out += line + ";\n";
  }
  return out;
}

}  // namespace qlayout::qasm
