#include "qest/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qest/error.hpp"

namespace qest {

namespace {

constexpr double kPi = 3.14159265358979323846;

enum class TokKind { Ident, Number, String, Symbol, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) return t;

    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = TokKind::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        t.text += advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      t.kind = TokKind::Number;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.')) {
        t.text += advance();
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        t.text += advance();
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
          t.text += advance();
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          t.text += advance();
        }
      }
      try {
        t.number = std::stod(t.text);
      } catch (const std::exception&) {
        throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
      }
      return t;
    }
    if (c == '"') {
      t.kind = TokKind::String;
      advance();
      while (pos_ < src_.size() && src_[pos_] != '"') t.text += advance();
      if (pos_ >= src_.size())
        throw ParseError("unterminated string", t.line, t.column);
      advance();
      return t;
    }
    if (std::string("();,[]+-*/>").find(c) != std::string::npos) {
      t.kind = TokKind::Symbol;
      t.text = advance();
      if (t.text == "-" && pos_ < src_.size() && src_[pos_] == '>') {
        t.text += advance();  // '->'
      }
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     column_);
  }

private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
public:
  explicit Parser(const std::string& src) : lexer_(src) { shift(); }

  Circuit parse() {
    expect_ident("OPENQASM");
    Token version = expect(TokKind::Number, "version number");
    if (version.text != "2.0")
      throw ParseError("unsupported OPENQASM version '" + version.text + "'",
                       version.line, version.column);
    expect_symbol(";");

    Circuit circuit;
    bool have_qreg = false;
    while (cur_.kind != TokKind::End) {
      Token head = cur_;
      if (head.kind != TokKind::Ident)
        throw ParseError("expected statement", head.line, head.column);
      shift();
      if (head.text == "include") {
        expect(TokKind::String, "include path");
        expect_symbol(";");
      } else if (head.text == "qreg") {
        if (have_qreg)
          throw ParseError("only one quantum register is supported", head.line,
                           head.column);
        auto [name, size] = parse_reg_decl();
        qreg_name_ = name;
        circuit.width = size;
        have_qreg = true;
      } else if (head.text == "creg") {
        auto [name, size] = parse_reg_decl();
        creg_name_ = name;
        (void)size;
      } else if (head.text == "measure") {
        if (!have_qreg)
          throw ParseError("measure before qreg declaration", head.line,
                           head.column);
        parse_measure();
      } else {
        if (!have_qreg)
          throw ParseError("gate before qreg declaration", head.line,
                           head.column);
        parse_gate(head, circuit);
      }
    }
    if (!have_qreg)
      throw ParseError("missing qreg declaration", cur_.line, cur_.column);
    validate(circuit);
    return circuit;
  }

private:
  void shift() { cur_ = lexer_.next(); }

  Token expect(TokKind kind, const std::string& what) {
    if (cur_.kind != kind)
      throw ParseError("expected " + what, cur_.line, cur_.column);
    Token t = cur_;
    shift();
    return t;
  }

  void expect_symbol(const std::string& s) {
    if (cur_.kind != TokKind::Symbol || cur_.text != s)
      throw ParseError("expected '" + s + "'", cur_.line, cur_.column);
    shift();
  }

  void expect_ident(const std::string& s) {
    if (cur_.kind != TokKind::Ident || cur_.text != s)
      throw ParseError("expected '" + s + "'", cur_.line, cur_.column);
    shift();
  }

  bool at_symbol(const std::string& s) const {
    return cur_.kind == TokKind::Symbol && cur_.text == s;
  }

  std::pair<std::string, std::uint32_t> parse_reg_decl() {
    Token name = expect(TokKind::Ident, "register name");
    expect_symbol("[");
    Token size = expect(TokKind::Number, "register size");
    expect_symbol("]");
    expect_symbol(";");
    double s = size.number;
    if (s < 1 || s != std::floor(s) || size.text.find('.') != std::string::npos)
      throw ParseError("register size must be a positive integer", size.line,
                       size.column);
    return {name.text, static_cast<std::uint32_t>(s)};
  }

  std::uint32_t parse_qubit_operand(std::uint32_t width) {
    Token name = expect(TokKind::Ident, "qubit operand");
    if (name.text != qreg_name_)
      throw ParseError("unknown register '" + name.text + "'", name.line,
                       name.column);
    expect_symbol("[");
    Token idx = expect(TokKind::Number, "qubit index");
    expect_symbol("]");
    if (idx.number != std::floor(idx.number) ||
        idx.text.find('.') != std::string::npos)
      throw ParseError("qubit index must be an integer", idx.line, idx.column);
    auto q = static_cast<std::uint32_t>(idx.number);
    if (q >= width)
      throw ParseError("qubit index " + std::to_string(q) +
                           " out of range for qreg of size " +
                           std::to_string(width),
                       idx.line, idx.column);
    return q;
  }

  void parse_measure() {
    // measure q[i] -> c[j];  or  measure q -> c;  (accepted, dropped)
    Token name = expect(TokKind::Ident, "qubit operand");
    if (name.text != qreg_name_)
      throw ParseError("unknown register '" + name.text + "'", name.line,
                       name.column);
    if (at_symbol("[")) {
      shift();
      expect(TokKind::Number, "qubit index");
      expect_symbol("]");
    }
    expect_symbol("->");
    expect(TokKind::Ident, "classical operand");
    if (at_symbol("[")) {
      shift();
      expect(TokKind::Number, "bit index");
      expect_symbol("]");
    }
    expect_symbol(";");
  }

  void parse_gate(const Token& name, Circuit& circuit) {
    std::vector<double> params;
    int want_params = 0;
    GateKind kind;
    if (name.text == "u3") {
      kind = GateKind::U3;
      want_params = 3;
    } else if (name.text == "rx") {
      kind = GateKind::RX;
      want_params = 1;
    } else if (name.text == "ry") {
      kind = GateKind::RY;
      want_params = 1;
    } else if (name.text == "rz") {
      kind = GateKind::RZ;
      want_params = 1;
    } else if (name.text == "h") {
      kind = GateKind::H;
    } else if (name.text == "x") {
      kind = GateKind::X;
    } else if (name.text == "cx") {
      kind = GateKind::CNOT;
    } else {
      throw ParseError("unsupported gate '" + name.text + "'", name.line,
                       name.column);
    }

    if (want_params > 0) {
      expect_symbol("(");
      for (int i = 0; i < want_params; ++i) {
        if (i > 0) expect_symbol(",");
        params.push_back(parse_expr());
      }
      expect_symbol(")");
    }

    std::vector<std::uint32_t> qubits;
    qubits.push_back(parse_qubit_operand(circuit.width));
    if (kind == GateKind::CNOT) {
      expect_symbol(",");
      qubits.push_back(parse_qubit_operand(circuit.width));
      if (qubits[0] == qubits[1])
        throw ParseError("cx operands must be distinct qubits", name.line,
                         name.column);
    }
    expect_symbol(";");
    circuit.add(Gate{kind, std::move(qubits), std::move(params)});
  }

  // expr := term (('+'|'-') term)*
  double parse_expr() {
    double v = parse_term();
    while (at_symbol("+") || at_symbol("-")) {
      bool plus = cur_.text == "+";
      shift();
      double rhs = parse_term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  // term := factor (('*'|'/') factor)*
  double parse_term() {
    double v = parse_factor();
    while (at_symbol("*") || at_symbol("/")) {
      bool mul = cur_.text == "*";
      Token op = cur_;
      shift();
      double rhs = parse_factor();
      if (!mul && rhs == 0.0)
        throw ParseError("division by zero in angle expression", op.line,
                         op.column);
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  // factor := ('-'|'+')* primary;  primary := number | 'pi' | '(' expr ')'
  double parse_factor() {
    if (at_symbol("-")) {
      shift();
      return -parse_factor();
    }
    if (at_symbol("+")) {
      shift();
      return parse_factor();
    }
    if (at_symbol("(")) {
      shift();
      double v = parse_expr();
      expect_symbol(")");
      return v;
    }
    if (cur_.kind == TokKind::Number) {
      double v = cur_.number;
      shift();
      return v;
    }
    if (cur_.kind == TokKind::Ident && cur_.text == "pi") {
      shift();
      return kPi;
    }
    throw ParseError("expected angle expression", cur_.line, cur_.column);
  }

  Lexer lexer_;
  Token cur_;
  std::string qreg_name_;
  std::string creg_name_;
};

std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", a);
  return buf;
}

}  // namespace

Circuit parse_qasm(const std::string& text) { return Parser(text).parse(); }

std::string emit_qasm(const Circuit& c) {
  validate(c);
  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << c.width << "];\n";
  for (const Gate& g : c.gates) {
    out << gate_name(g.kind);
    if (!g.params.empty()) {
      out << '(';
      for (std::size_t i = 0; i < g.params.size(); ++i) {
        if (i) out << ',';
        out << format_angle(g.params[i]);
      }
      out << ')';
    }
    out << ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) out << ',';
      out << "q[" << g.qubits[i] << ']';
    }
    out << ";\n";
  }
  return out.str();
}

Circuit parse_qasm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_qasm(ss.str());
}

void write_qasm_file(const Circuit& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << emit_qasm(c);
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace qest
