#include "dqcc/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace dqcc {

namespace {

struct Token {
  enum Kind { Id, Number, Symbol, String, End } kind = End;
  std::string text;
  double value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::End;
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        bump();
      tok_.kind = Token::Id;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
              src_[pos_] == 'e' || src_[pos_] == 'E' ||
              ((src_[pos_] == '+' || src_[pos_] == '-') && pos_ > start &&
               (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E'))))
        bump();
      tok_.kind = Token::Number;
      tok_.text = src_.substr(start, pos_ - start);
      try {
        tok_.value = std::stod(tok_.text);
      } catch (...) {
        throw ParseError(tok_.line, tok_.col, "bad number '" + tok_.text + "'");
      }
      return;
    }
    if (c == '"') {
      bump();
      size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] != '"') bump();
      if (pos_ >= src_.size()) throw ParseError(line_, col_, "unterminated string");
      tok_.kind = Token::String;
      tok_.text = src_.substr(start, pos_ - start);
      bump();
      return;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      tok_.kind = Token::Symbol;
      tok_.text = "->";
      bump();
      bump();
      return;
    }
    tok_.kind = Token::Symbol;
    tok_.text = std::string(1, c);
    bump();
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

const std::map<std::string, GateKind>& gate_table() {
  static const std::map<std::string, GateKind> table = {
      {"h", GateKind::H},     {"x", GateKind::X},     {"y", GateKind::Y},
      {"z", GateKind::Z},     {"s", GateKind::S},     {"sdg", GateKind::Sdg},
      {"t", GateKind::T},     {"tdg", GateKind::Tdg}, {"rx", GateKind::RX},
      {"ry", GateKind::RY},   {"rz", GateKind::RZ},   {"u1", GateKind::U1},
      {"u2", GateKind::U2},   {"u3", GateKind::U3},   {"cx", GateKind::CX},
      {"cz", GateKind::CZ},   {"crz", GateKind::CRZ}, {"swap", GateKind::SWAP},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Circuit run() {
    // optional version header
    if (lex_.peek().kind == Token::Id && lex_.peek().text == "OPENQASM") {
      lex_.next();
      expect_number();
      expect_symbol(";");
    }
    std::vector<std::pair<std::string, int>> qregs;
    std::vector<Statement> stmts;
    while (lex_.peek().kind != Token::End) {
      Token t = lex_.peek();
      if (t.kind != Token::Id) throw ParseError(t.line, t.col, "expected statement");
      if (t.text == "include") {
        lex_.next();
        Token file = lex_.next();
        if (file.kind != Token::String) throw ParseError(file.line, file.col, "expected include file");
        if (file.text != "qelib1.inc")
          throw ParseError(file.line, file.col, "unsupported include '" + file.text + "'");
        expect_symbol(";");
      } else if (t.text == "qreg" || t.text == "creg") {
        lex_.next();
        Token name = expect_id();
        expect_symbol("[");
        int n = static_cast<int>(expect_number());
        expect_symbol("]");
        expect_symbol(";");
        if (t.text == "qreg") qregs.emplace_back(name.text, n);
        else cregs_[name.text] = n;
      } else if (t.text == "measure") {
        lex_.next();
        Statement st;
        st.kind = Statement::Measure;
        st.line = t.line;
        st.col = t.col;
        st.args.push_back(parse_arg());
        expect_symbol("->");
        parse_arg();  // classical target, recorded only for syntax
        expect_symbol(";");
        stmts.push_back(std::move(st));
      } else if (t.text == "barrier") {
        lex_.next();
        Statement st;
        st.kind = Statement::Barrier;
        st.line = t.line;
        st.col = t.col;
        st.args.push_back(parse_arg());
        while (lex_.peek().kind == Token::Symbol && lex_.peek().text == ",") {
          lex_.next();
          st.args.push_back(parse_arg());
        }
        expect_symbol(";");
        stmts.push_back(std::move(st));
      } else {
        auto it = gate_table().find(t.text);
        if (it == gate_table().end())
          throw ParseError(t.line, t.col, "unsupported statement '" + t.text + "'");
        lex_.next();
        Statement st;
        st.kind = Statement::Apply;
        st.gate = it->second;
        st.line = t.line;
        st.col = t.col;
        if (lex_.peek().kind == Token::Symbol && lex_.peek().text == "(") {
          lex_.next();
          st.params.push_back(parse_expr());
          while (lex_.peek().kind == Token::Symbol && lex_.peek().text == ",") {
            lex_.next();
            st.params.push_back(parse_expr());
          }
          expect_symbol(")");
        }
        st.args.push_back(parse_arg());
        while (lex_.peek().kind == Token::Symbol && lex_.peek().text == ",") {
          lex_.next();
          st.args.push_back(parse_arg());
        }
        expect_symbol(";");
        stmts.push_back(std::move(st));
      }
    }

    // flatten registers
    int total = 0;
    for (auto& [name, n] : qregs) {
      reg_base_[name] = total;
      reg_size_[name] = n;
      total += n;
    }
    Circuit c(total);
    for (auto& [name, n] : qregs)
      for (int i = 0; i < n; ++i)
        c.set_qubit_name(reg_base_[name] + i, name + "[" + std::to_string(i) + "]");

    for (const Statement& st : stmts) emit(c, st);
    return c;
  }

 private:
  struct Arg {
    std::string reg;
    std::optional<int> index;
    int line = 0, col = 0;
  };
  struct Statement {
    enum { Apply, Measure, Barrier } kind = Apply;
    GateKind gate = GateKind::H;
    std::vector<double> params;
    std::vector<Arg> args;
    int line = 0, col = 0;
  };

  void emit(Circuit& c, const Statement& st) {
    if (st.kind == Statement::Barrier) {
      std::vector<int> qs;
      for (const Arg& a : st.args) {
        if (a.index) qs.push_back(resolve(a));
        else
          for (int i = 0; i < reg_size_at(a); ++i) qs.push_back(reg_base_at(a) + i);
      }
      c.barrier(qs);
      return;
    }
    if (st.kind == Statement::Measure) {
      const Arg& a = st.args[0];
      if (a.index) c.measure(resolve(a));
      else
        for (int i = 0; i < reg_size_at(a); ++i) c.measure(reg_base_at(a) + i);
      return;
    }
    int arity = gate_arity(st.gate);
    if (static_cast<int>(st.args.size()) != arity)
      throw ParseError(st.line, st.col, std::string("wrong operand count for ") + gate_name(st.gate));
    if (arity == 1 && !st.args[0].index) {
      // broadcast over the whole register
      for (int i = 0; i < reg_size_at(st.args[0]); ++i) {
        try {
          c.add(st.gate, {reg_base_at(st.args[0]) + i}, st.params);
        } catch (const CircuitError& err) {
          throw ParseError(st.line, st.col, err.what());
        }
      }
      return;
    }
    std::vector<int> qs;
    for (const Arg& a : st.args) {
      if (!a.index) throw ParseError(a.line, a.col, "register broadcast unsupported here");
      qs.push_back(resolve(a));
    }
    try {
      c.add(st.gate, qs, st.params);
    } catch (const CircuitError& err) {
      throw ParseError(st.line, st.col, err.what());
    }
  }

  int reg_base_at(const Arg& a) {
    auto it = reg_base_.find(a.reg);
    if (it == reg_base_.end()) {
      if (cregs_.count(a.reg)) return 0;  // classical refs ignored upstream
      throw ParseError(a.line, a.col, "unknown register '" + a.reg + "'");
    }
    return it->second;
  }
  int reg_size_at(const Arg& a) {
    auto it = reg_size_.find(a.reg);
    if (it == reg_size_.end()) throw ParseError(a.line, a.col, "unknown register '" + a.reg + "'");
    return it->second;
  }

  int resolve(const Arg& a) {
    if (cregs_.count(a.reg) && !reg_base_.count(a.reg))
      throw ParseError(a.line, a.col, "quantum operand expected");
    int base = reg_base_at(a);
    int size = reg_size_at(a);
    if (*a.index < 0 || *a.index >= size)
      throw ParseError(a.line, a.col,
                       "qubit index " + std::to_string(*a.index) + " out of range for '" + a.reg +
                           "[" + std::to_string(size) + "]'");
    return base + *a.index;
  }

  Arg parse_arg() {
    Token name = expect_id();
    Arg a;
    a.reg = name.text;
    a.line = name.line;
    a.col = name.col;
    if (lex_.peek().kind == Token::Symbol && lex_.peek().text == "[") {
      lex_.next();
      a.index = static_cast<int>(expect_number());
      expect_symbol("]");
    }
    return a;
  }

  // expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
  // factor := number | pi | '-' factor | '(' expr ')'
  double parse_expr() {
    double v = parse_term();
    while (lex_.peek().kind == Token::Symbol &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      std::string op = lex_.next().text;
      double r = parse_term();
      v = op == "+" ? v + r : v - r;
    }
    return v;
  }
  double parse_term() {
    double v = parse_factor();
    while (lex_.peek().kind == Token::Symbol &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      std::string op = lex_.next().text;
      double r = parse_factor();
      v = op == "*" ? v * r : v / r;
    }
    return v;
  }
  double parse_factor() {
    Token t = lex_.peek();
    if (t.kind == Token::Number) {
      lex_.next();
      return t.value;
    }
    if (t.kind == Token::Id && t.text == "pi") {
      lex_.next();
      return M_PI;
    }
    if (t.kind == Token::Symbol && t.text == "-") {
      lex_.next();
      return -parse_factor();
    }
    if (t.kind == Token::Symbol && t.text == "(") {
      lex_.next();
      double v = parse_expr();
      expect_symbol(")");
      return v;
    }
    throw ParseError(t.line, t.col, "expected angle expression");
  }

  Token expect_id() {
    Token t = lex_.next();
    if (t.kind != Token::Id) throw ParseError(t.line, t.col, "expected identifier");
    return t;
  }
  double expect_number() {
    Token t = lex_.next();
    if (t.kind != Token::Number) throw ParseError(t.line, t.col, "expected number");
    return t.value;
  }
  void expect_symbol(const std::string& s) {
    Token t = lex_.next();
    if (t.kind != Token::Symbol || t.text != s)
      throw ParseError(t.line, t.col, "expected '" + s + "', got '" + t.text + "'");
  }

  Lexer lex_;
  std::map<std::string, int> reg_base_, reg_size_;
  std::map<std::string, int> cregs_;
};

std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

}  // namespace

Circuit parse_qasm(const std::string& text) { return Parser(text).run(); }

std::string emit_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  os << "qreg q[" << c.num_qubits() << "];\n";
  bool has_measure = false;
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::Measure) has_measure = true;
  if (has_measure) os << "creg m[" << c.num_qubits() << "];\n";
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Measure) {
      os << "measure q[" << g.qubits[0] << "] -> m[" << g.qubits[0] << "];\n";
      continue;
    }
    os << gate_name(g.kind);
    if (!g.params.empty()) {
      os << "(";
      for (size_t i = 0; i < g.params.size(); ++i) os << (i ? "," : "") << format_angle(g.params[i]);
      os << ")";
    }
    os << " ";
    for (size_t i = 0; i < g.qubits.size(); ++i) os << (i ? "," : "") << "q[" << g.qubits[i] << "]";
    os << ";\n";
  }
  return os.str();
}

}  // namespace dqcc
