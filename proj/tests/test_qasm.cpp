#include "dqcc/qasm.hpp"

#include <cmath>

#include "dqcc/benchmarks.hpp"
#include "dqcc/pipeline.hpp"

#include <doctest.h>

using namespace dqcc;

TEST_CASE("parse minimal program") {
  Circuit c = parse_qasm("qreg q[2]; cx q[0],q[1];");
  CHECK(c.num_qubits() == 2);
  REQUIRE(c.size() == 1);
  CHECK(c.gate(0).kind == GateKind::CX);
  CHECK(c.gate(0).qubits == std::vector<int>{0, 1});
}

TEST_CASE("parse crz with angle expression") {
  Circuit c = parse_qasm(
      "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncrz(0.5) q[1],q[0];\n");
  REQUIRE(c.size() == 1);
  CHECK(c.gate(0).kind == GateKind::CRZ);
  CHECK(c.gate(0).qubits == std::vector<int>{1, 0});
  CHECK(c.gate(0).params[0] == doctest::Approx(0.5));
}

TEST_CASE("pi expressions") {
  Circuit c = parse_qasm("qreg q[1]; rz(pi/2) q[0]; rx(-pi/4) q[0]; u1(2*pi) q[0];");
  CHECK(c.gate(0).params[0] == doctest::Approx(M_PI / 2));
  CHECK(c.gate(1).params[0] == doctest::Approx(-M_PI / 4));
  CHECK(c.gate(2).params[0] == doctest::Approx(2 * M_PI));
}

TEST_CASE("out-of-range index is an error with location") {
  try {
    parse_qasm("qreg q[4];\ncx q[0],q[9];");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("out of range") != std::string::npos);
  }
}

TEST_CASE("unsupported statement names the gate") {
  CHECK_THROWS_AS(parse_qasm("qreg q[2]; ccx q[0],q[1],q[1];"), ParseError);
  CHECK_THROWS_AS(parse_qasm("qreg q[2]; gate foo a { }"), ParseError);
}

TEST_CASE("syntax error carries line and column") {
  try {
    parse_qasm("qreg q[2];\nh q[0]");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line >= 2);
  }
}

TEST_CASE("register broadcast and measure") {
  Circuit c = parse_qasm("qreg q[3]; creg m[3]; h q; measure q[1] -> m[1]; barrier q;");
  int hs = 0;
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::H) ++hs;
  CHECK(hs == 3);
  CHECK(c.gate(3).kind == GateKind::Measure);
  CHECK(c.gate(4).kind == GateKind::Barrier);
  CHECK(c.gate(4).qubits.size() == 3);
}

TEST_CASE("two qregs flatten in declaration order") {
  Circuit c = parse_qasm("qreg a[2]; qreg b[2]; cx a[1],b[0];");
  CHECK(c.num_qubits() == 4);
  CHECK(c.gate(0).qubits == std::vector<int>{1, 2});
  CHECK(c.qubit_name(2) == "b[0]");
}

TEST_CASE("round trip: parse after emit is the identity") {
  Circuit orig = gen_qft(5);
  std::string text = emit_qasm(orig);
  Circuit back = parse_qasm(text);
  REQUIRE(back.size() == orig.size());
  for (size_t i = 0; i < orig.size(); ++i) {
    const Gate& a = orig.gate(static_cast<int>(i));
    const Gate& b = back.gate(static_cast<int>(i));
    CHECK(a.kind == b.kind);
    CHECK(a.qubits == b.qubits);
    REQUIRE(a.params.size() == b.params.size());
    for (size_t k = 0; k < a.params.size(); ++k) CHECK(a.params[k] == b.params[k]);
  }
  CHECK(emit_qasm(back) == text);  // byte-stable after one round
}

TEST_CASE("a measured program compiles without the unitary oracle") {
  // parse -> compile: measure schedules at t_ms and blocks aggregation
  std::string text =
      "OPENQASM 2.0;\nqreg q[4];\ncreg m[4];\n"
      "h q[0];\ncx q[0],q[2];\nmeasure q[0] -> m[0];\ncx q[0],q[2];\n";
  Circuit c = parse_qasm(text);
  Partition p = contiguous_partition(4, 2, 2);
  CompileOptions opts;
  opts.verify = true;  // silently skipped for non-unitary programs
  CompileResult r = compile_circuit(c, p, opts);
  CHECK(r.blocks.size() == 2);  // the measure splits the runs
  CHECK_FALSE(r.verified);
  CHECK(r.metrics.tot_comm >= 2);
}
