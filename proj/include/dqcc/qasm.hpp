#pragma once

#include "dqcc/circuit.hpp"

#include <stdexcept>
#include <string>

namespace dqcc {

struct ParseError : std::runtime_error {
  int line = 0, column = 0;
  ParseError(int line, int column, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
};

/// OpenQASM 2.0 subset: qreg/creg, the supported gate set, measure,
/// barrier, constant angle expressions with pi. Qubits flatten in register
/// declaration order.
Circuit parse_qasm(const std::string& text);

/// Same subset back out, one statement per line. parse(emit(c)) == c.
std::string emit_qasm(const Circuit& c);

}  // namespace dqcc
