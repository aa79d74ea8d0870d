#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "qlayout/qasm.hpp"

namespace qlayout::qasm {

ParseError::ParseError(const std::string& msg, int line, int column,
                       const std::string& source_name)
    : std::runtime_error((source_name.empty() ? std::string() : source_name + ":") +
                         std::to_string(line) + ":" + std::to_string(column) + ": " +
                         msg),
      line_(line),
      column_(column) {}

bool Circuit::has_qelib_include() const {
  return std::find(includes.begin(), includes.end(), "qelib1.inc") != includes.end();
}

int Circuit::qubit_count() const {
  int n = 0;
  for (const auto& r : qregs) n += r.size;
  return n;
}

int Circuit::clbit_count() const {
  int n = 0;
  for (const auto& r : cregs) n += r.size;
  return n;
}

int Circuit::flat_qubit(const RegRef& ref) const {
  int offset = 0;
  for (int r = 0; r < ref.reg; ++r) offset += qregs[r].size;
  return offset + ref.index;
}

int Circuit::flat_clbit(const RegRef& ref) const {
  int offset = 0;
  for (int r = 0; r < ref.reg; ++r) offset += cregs[r].size;
  return offset + ref.index;
}

std::set<int> Circuit::referenced_qubits() const {
  std::set<int> out;
  for (const auto& g : gates) {
    if (g.kind == GateKind::Barrier) continue;
    for (const auto& q : g.qubits) out.insert(flat_qubit(q));
  }
  return out;
}

std::map<int, long> Circuit::qubit_usage() const {
  std::map<int, long> out;
  for (const auto& g : gates) {
    if (g.kind == GateKind::Barrier) continue;
    for (const auto& q : g.qubits) ++out[flat_qubit(q)];
  }
  return out;
}

bool Circuit::pair_eligible(const Gate& g) const {
  return g.kind == GateKind::Gate && !g.condition && g.qubits.size() == 2;
}

namespace {

enum class Tok : std::uint8_t { Id, Real, Int, Str, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
  std::size_t begin = 0;  // byte offsets into the source
  std::size_t end = 0;
};

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& name) : src_(src), name_(name) {}

  Token next() {
    skip_space_and_comments();
    return next_token();
  }

 private:
  std::string_view src_;
  std::string name_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_, name_);
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      }
      if (peek() == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
        continue;
      }
      break;
    }
  }

  Token next_token() {
    Token t;
    t.line = line_;
    t.col = col_;
    t.begin = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      t.end = pos_;
      return t;
    }
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        t.text += advance();
      }
      t.kind = Tok::Id;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      bool real = false;
      while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
      if (peek() == '.') {
        real = true;
        t.text += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        real = true;
        t.text += advance();
        if (peek() == '+' || peek() == '-') t.text += advance();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
          fail("malformed exponent in numeric literal");
        }
        while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
      }
      t.kind = real ? Tok::Real : Tok::Int;
    } else if (c == '"') {
      advance();
      while (peek() != '"') {
        if (pos_ >= src_.size() || peek() == '\n') fail("unterminated string literal");
        t.text += advance();
      }
      advance();
      t.kind = Tok::Str;
    } else if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      t.text = "->";
      t.kind = Tok::Sym;
    } else if (c == '=' && peek(1) == '=') {
      advance();
      advance();
      t.text = "==";
      t.kind = Tok::Sym;
    } else if (std::string_view(";,()[]{}+-*/^").find(c) != std::string_view::npos) {
      t.text = advance();
      t.kind = Tok::Sym;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
    t.end = pos_;
    return t;
  }
};

struct Operand {
  std::string reg;
  int index = -1;  // -1 means whole register
  int line = 1;
  int col = 1;
};

class Parser {
 public:
  Parser(std::string_view src, const std::string& name)
      : src_(src), name_(name), lexer_(src, name) {
    current_ = lexer_.next();
  }

  Circuit parse() {
    circuit_.source_name = name_;
    parse_header();
    while (!at(Tok::End)) parse_statement();
    return circuit_;
  }

 private:
  std::string_view src_;
  std::string name_;
  Lexer lexer_;
  Token current_;
  std::size_t last_end_ = 0;  // end offset of the most recently taken token
  Circuit circuit_;
  std::set<std::string> declared_gates_;

  const Token& cur() const { return current_; }

  bool at(Tok kind) const { return cur().kind == kind; }

  bool at_sym(std::string_view s) const {
    return cur().kind == Tok::Sym && cur().text == s;
  }

  bool at_id(std::string_view s) const {
    return cur().kind == Tok::Id && cur().text == s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col, name_);
  }

  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(msg, t.line, t.col, name_);
  }

  Token take() {
    Token t = std::move(current_);
    last_end_ = t.end;
    current_ = lexer_.next();
    return t;
  }

  Token expect(Tok kind, const std::string& what) {
    if (!at(kind)) fail("expected " + what);
    return take();
  }

  int checked_int(const Token& t) {
    try {
      return std::stoi(t.text);
    } catch (const std::exception&) {
      fail_at(t, "integer literal '" + t.text + "' out of range");
    }
  }

  std::int64_t checked_int64(const Token& t) {
    try {
      return std::stoll(t.text);
    } catch (const std::exception&) {
      fail_at(t, "integer literal '" + t.text + "' out of range");
    }
  }

  void expect_sym(std::string_view s) {
    if (!at_sym(s)) fail("expected '" + std::string(s) + "'");
    take();
  }

  void parse_header() {
    if (!at_id("OPENQASM")) fail("expected 'OPENQASM 2.0;' header");
    take();
    if (at(Tok::Real) || at(Tok::Int)) {
      Token version = take();
      if (version.text != "2.0") {
        fail_at(version, "unsupported OPENQASM version " + version.text +
                             " (expected 2.0)");
      }
    } else {
      fail("expected version number after OPENQASM");
    }
    expect_sym(";");
  }

  void parse_statement() {
    if (at_id("include")) {
      take();
      Token file = expect(Tok::Str, "include file string");
      expect_sym(";");
      circuit_.includes.push_back(file.text);
    } else if (at_id("qreg") || at_id("creg")) {
      parse_reg_decl(take().text == "qreg");
    } else if (at_id("gate")) {
      parse_gate_definition();
    } else if (at_id("opaque")) {
      parse_opaque_declaration();
    } else if (at_id("if")) {
      Token kw = take();
      expect_sym("(");
      Token regname = expect(Tok::Id, "classical register name");
      expect_sym("==");
      Token value = expect(Tok::Int, "integer");
      expect_sym(")");
      Condition cond;
      cond.creg = find_creg(regname);
      cond.value = checked_int64(value);
      if (at_id("barrier")) fail_at(kw, "barrier cannot be if-guarded");
      parse_qop(cond);
    } else if (at(Tok::Id)) {
      parse_qop(std::nullopt);
    } else {
      fail("expected a statement");
    }
  }

  void parse_reg_decl(bool quantum) {
    Token name = expect(Tok::Id, "register name");
    expect_sym("[");
    Token size = expect(Tok::Int, "register size");
    expect_sym("]");
    expect_sym(";");
    int n = checked_int(size);
    if (n <= 0) fail_at(size, "register size must be positive");
    for (const auto& r : circuit_.qregs) {
      if (r.name == name.text) fail_at(name, "register '" + name.text + "' redeclared");
    }
    for (const auto& r : circuit_.cregs) {
      if (r.name == name.text) fail_at(name, "register '" + name.text + "' redeclared");
    }
    (quantum ? circuit_.qregs : circuit_.cregs).push_back({name.text, n});
  }

  void parse_gate_definition() {
    Token name = expect(Tok::Id, "gate name");
    declared_gates_.insert(name.text);
    if (at_sym("(")) skip_until_matching("(", ")");
    while (!at_sym("{")) {
      if (at(Tok::End)) fail("unterminated gate definition");
      take();
    }
    skip_until_matching("{", "}");
  }

  void parse_opaque_declaration() {
    Token name = expect(Tok::Id, "gate name");
    declared_gates_.insert(name.text);
    while (!at_sym(";")) {
      if (at(Tok::End)) fail("unterminated opaque declaration");
      take();
    }
    take();
  }

  void skip_until_matching(std::string_view open, std::string_view close) {
    expect_sym(open);
    int depth = 1;
    while (depth > 0) {
      if (at(Tok::End)) fail("unterminated '" + std::string(open) + "'");
      if (at_sym(open)) ++depth;
      if (at_sym(close)) --depth;
      take();
    }
  }

  int find_qreg(const Token& name) const {
    for (std::size_t i = 0; i < circuit_.qregs.size(); ++i) {
      if (circuit_.qregs[i].name == name.text) return static_cast<int>(i);
    }
    fail_at(name, "undeclared quantum register '" + name.text + "'");
  }

  int find_creg(const Token& name) const {
    for (std::size_t i = 0; i < circuit_.cregs.size(); ++i) {
      if (circuit_.cregs[i].name == name.text) return static_cast<int>(i);
    }
    fail_at(name, "undeclared classical register '" + name.text + "'");
  }

  Operand parse_operand() {
    Token name = expect(Tok::Id, "register operand");
    Operand op;
    op.reg = name.text;
    op.line = name.line;
    op.col = name.col;
    if (at_sym("[")) {
      take();
      Token index = expect(Tok::Int, "operand index");
      expect_sym("]");
      op.index = checked_int(index);
    }
    return op;
  }

  std::vector<Operand> parse_operand_list() {
    std::vector<Operand> out;
    out.push_back(parse_operand());
    while (at_sym(",")) {
      take();
      out.push_back(parse_operand());
    }
    return out;
  }

  RegRef resolve_qubit(const Operand& op, int index) const {
    Token name;
    name.text = op.reg;
    name.line = op.line;
    name.col = op.col;
    int reg = find_qreg(name);
    if (index < 0 || index >= circuit_.qregs[reg].size) {
      throw ParseError("qubit index " + std::to_string(index) +
                           " out of range for register '" + op.reg + "' of size " +
                           std::to_string(circuit_.qregs[reg].size),
                       op.line, op.col, name_);
    }
    return {reg, index};
  }

  RegRef resolve_clbit(const Operand& op, int index) const {
    Token name;
    name.text = op.reg;
    name.line = op.line;
    name.col = op.col;
    int reg = find_creg(name);
    if (index < 0 || index >= circuit_.cregs[reg].size) {
      throw ParseError("bit index " + std::to_string(index) +
                           " out of range for register '" + op.reg + "' of size " +
                           std::to_string(circuit_.cregs[reg].size),
                       op.line, op.col, name_);
    }
    return {reg, index};
  }

  int qreg_size(const Operand& op) const {
    Token name;
    name.text = op.reg;
    name.line = op.line;
    name.col = op.col;
    return circuit_.qregs[find_qreg(name)].size;
  }

  int creg_size(const Operand& op) const {
    Token name;
    name.text = op.reg;
    name.line = op.line;
    name.col = op.col;
    return circuit_.cregs[find_creg(name)].size;
  }

  // Broadcast width of a statement: every whole-register operand must agree.
  int broadcast_width(const std::vector<Operand>& qops,
                      const std::vector<Operand>& cops) {
    int width = 1;
    bool seen = false;
    auto visit = [&](const Operand& op, int size) {
      if (op.index >= 0) return;
      if (seen && size != width) {
        throw ParseError("mismatched register sizes in broadcast", op.line, op.col,
                         name_);
      }
      width = size;
      seen = true;
    };
    for (const auto& op : qops) visit(op, qreg_size(op));
    for (const auto& op : cops) visit(op, creg_size(op));
    return width;
  }

  void check_distinct_qubits(const Gate& g, const Token& where) {
    std::set<int> seen;
    for (const auto& q : g.qubits) {
      if (!seen.insert(circuit_.flat_qubit(q)).second) {
        fail_at(where, "duplicate qubit operand in '" + g.opcode + "'");
      }
    }
  }

  void parse_qop(std::optional<Condition> condition) {
    Token head = expect(Tok::Id, "operation");
    if (head.text == "measure") {
      Operand q = parse_operand();
      expect_sym("->");
      Operand c = parse_operand();
      expect_sym(";");
      int width = broadcast_width({q}, {c});
      for (int k = 0; k < width; ++k) {
        Gate g;
        g.opcode = "measure";
        g.kind = GateKind::Measure;
        g.condition = condition;
        g.qubits.push_back(resolve_qubit(q, q.index >= 0 ? q.index : k));
        g.clbits.push_back(resolve_clbit(c, c.index >= 0 ? c.index : k));
        circuit_.gates.push_back(std::move(g));
      }
    } else if (head.text == "reset") {
      Operand q = parse_operand();
      expect_sym(";");
      int width = broadcast_width({q}, {});
      for (int k = 0; k < width; ++k) {
        Gate g;
        g.opcode = "reset";
        g.kind = GateKind::Reset;
        g.condition = condition;
        g.qubits.push_back(resolve_qubit(q, q.index >= 0 ? q.index : k));
        circuit_.gates.push_back(std::move(g));
      }
    } else if (head.text == "barrier") {
      std::vector<Operand> ops = parse_operand_list();
      expect_sym(";");
      Gate g;
      g.opcode = "barrier";
      g.kind = GateKind::Barrier;
      for (const auto& op : ops) {
        if (op.index >= 0) {
          g.qubits.push_back(resolve_qubit(op, op.index));
        } else {
          for (int k = 0; k < qreg_size(op); ++k) {
            g.qubits.push_back(resolve_qubit(op, k));
          }
        }
      }
      circuit_.gates.push_back(std::move(g));
    } else {
      // Gate application, built-in or opaque custom call.
      std::vector<std::string> params;
      std::vector<double> values;
      if (at_sym("(")) {
        take();
        if (!at_sym(")")) {
          parse_param(params, values);
          while (at_sym(",")) {
            take();
            parse_param(params, values);
          }
        }
        expect_sym(")");
      }
      std::vector<Operand> ops = parse_operand_list();
      expect_sym(";");
      int width = broadcast_width(ops, {});
      for (int k = 0; k < width; ++k) {
        Gate g;
        g.opcode = head.text;
        g.kind = GateKind::Gate;
        g.condition = condition;
        g.params = params;
        g.param_values = values;
        for (const auto& op : ops) {
          g.qubits.push_back(resolve_qubit(op, op.index >= 0 ? op.index : k));
        }
        check_distinct_qubits(g, head);
        circuit_.gates.push_back(std::move(g));
      }
    }
  }

  // --- parameter expressions -------------------------------------------

  void parse_param(std::vector<std::string>& params, std::vector<double>& values) {
    std::size_t begin = cur().begin;
    double v = parse_expr();
    std::size_t end = last_end_;
    std::string text(src_.substr(begin, end - begin));
    params.push_back(std::move(text));
    values.push_back(v);
  }

  double parse_expr() {
    double v = parse_term();
    while (at_sym("+") || at_sym("-")) {
      bool add = take().text == "+";
      double rhs = parse_term();
      v = add ? v + rhs : v - rhs;
    }
    return v;
  }

  double parse_term() {
    double v = parse_factor();
    while (at_sym("*") || at_sym("/")) {
      bool mul = take().text == "*";
      double rhs = parse_factor();
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  double parse_factor() {
    double v = parse_base();
    if (at_sym("^")) {
      take();
      v = std::pow(v, parse_factor());
    }
    return v;
  }

  double parse_base() {
    if (at(Tok::Real) || at(Tok::Int)) {
      Token number = take();
      try {
        return std::stod(number.text);
      } catch (const std::exception&) {
        fail_at(number, "numeric literal '" + number.text + "' out of range");
      }
    }
    if (at_sym("-")) {
      take();
      return -parse_factor();
    }
    if (at_sym("+")) {
      take();
      return parse_factor();
    }
    if (at_sym("(")) {
      take();
      double v = parse_expr();
      expect_sym(")");
      return v;
    }
    if (at(Tok::Id)) {
      Token id = take();
      if (id.text == "pi") return M_PI;
      static const std::map<std::string, double (*)(double)> kFunctions = {
          {"sin", std::sin}, {"cos", std::cos},   {"tan", std::tan},
          {"exp", std::exp}, {"ln", std::log},    {"sqrt", std::sqrt},
      };
      auto fn = kFunctions.find(id.text);
      if (fn == kFunctions.end()) {
        fail_at(id, "unknown identifier '" + id.text + "' in parameter expression");
      }
      expect_sym("(");
      double v = parse_expr();
      expect_sym(")");
      return fn->second(v);
    }
    fail("expected parameter expression");
  }
};

}  // namespace

Circuit parse_qasm(std::string_view source, const std::string& source_name) {
  return Parser(source, source_name).parse();
}

Circuit parse_qasm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", 0, 0, path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_qasm(buf.str(), path);
}

}  // namespace qlayout::qasm
