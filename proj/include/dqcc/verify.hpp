#pragma once

#include "dqcc/circuit.hpp"
#include "dqcc/protocol.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace dqcc {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// 2x2 or 4x4 matrix of one gate (qubit 0 = least significant).
Mat gate_matrix(const Gate& g);

/// Apply a gate to a dense state in place. Qubit q indexes bit q of the
/// basis state.
void apply_gate(Vec& state, const Gate& g);

Vec run_circuit(const Circuit& c, Vec state);

/// Full 2^n x 2^n unitary product. Errors above 12 qubits or if the
/// circuit measures.
Mat unitary_of(const Circuit& c);

/// Rewrites a protocol into a plain circuit over data + comm qubits:
/// epr_prepare becomes H+CX, measurements defer into coherent controlled
/// gates from the measured qubit, and each measured qubit is steered back
/// to |0> once its bit has been consumed.
Circuit defer_measurements(const ProtocolCircuit& pc);

/// True iff a's action on the data-qubit subspace (ancillas in/out |0>)
/// matches b up to one global phase, fixed at b's largest-magnitude entry.
/// data_qubits_in_a[i] is the qubit of `a` carrying b's qubit i.
bool equivalent(const Circuit& a, const Circuit& b, const std::vector<int>& data_qubits_in_a,
                double tol);

/// Max-norm distance of the restricted action, after phase alignment.
double equivalence_distance(const Circuit& a, const Circuit& b,
                            const std::vector<int>& data_qubits_in_a);

bool unitaries_equal_up_to_phase(const Mat& u, const Mat& v, double tol);

}  // namespace dqcc
