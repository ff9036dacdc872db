#include "dqcc/verify.hpp"

#include <cmath>
#include <map>

namespace dqcc {

namespace {

constexpr int kMaxQubits = 12;
const Cplx kI{0.0, 1.0};

Mat mat1(Cplx a, Cplx b, Cplx c, Cplx d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

Mat gate_matrix(const Gate& g) {
  const double s2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::H: return mat1(s2, s2, s2, -s2);
    case GateKind::X: return mat1(0, 1, 1, 0);
    case GateKind::Y: return mat1(0, -kI, kI, 0);
    case GateKind::Z: return mat1(1, 0, 0, -1);
    case GateKind::S: return mat1(1, 0, 0, kI);
    case GateKind::Sdg: return mat1(1, 0, 0, -kI);
    case GateKind::T: return mat1(1, 0, 0, std::exp(kI * (M_PI / 4)));
    case GateKind::Tdg: return mat1(1, 0, 0, std::exp(-kI * (M_PI / 4)));
    case GateKind::RX: {
      double t = g.params[0] / 2;
      return mat1(std::cos(t), -kI * std::sin(t), -kI * std::sin(t), std::cos(t));
    }
    case GateKind::RY: {
      double t = g.params[0] / 2;
      return mat1(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
    }
    case GateKind::RZ: {
      double t = g.params[0] / 2;
      return mat1(std::exp(-kI * t), 0, 0, std::exp(kI * t));
    }
    case GateKind::U1: return mat1(1, 0, 0, std::exp(kI * g.params[0]));
    case GateKind::U2: {
      double phi = g.params[0], lam = g.params[1];
      return mat1(s2, -s2 * std::exp(kI * lam), s2 * std::exp(kI * phi),
                  s2 * std::exp(kI * (phi + lam)));
    }
    case GateKind::U3: {
      double th = g.params[0] / 2, phi = g.params[1], lam = g.params[2];
      return mat1(std::cos(th), -std::exp(kI * lam) * std::sin(th),
                  std::exp(kI * phi) * std::sin(th), std::exp(kI * (phi + lam)) * std::cos(th));
    }
    case GateKind::CX: {
      Mat m = Mat::Zero(4, 4);
      // qubit order (q1 q0) with control = operand 0 mapped by caller;
      // here control = bit 0, target = bit 1 (basis index = t*2 + c)
      m(0, 0) = 1; m(3, 1) = 1; m(2, 2) = 1; m(1, 3) = 1;
      return m;
    }
    case GateKind::CZ: {
      Mat m = Mat::Identity(4, 4);
      m(3, 3) = -1;
      return m;
    }
    case GateKind::CRZ: {
      Mat m = Mat::Identity(4, 4);
      double t = g.params[0] / 2;
      m(1, 1) = std::exp(-kI * t);  // control=1 (bit0), target=0 (bit1)
      m(3, 3) = std::exp(kI * t);
      return m;
    }
    case GateKind::SWAP: {
      Mat m = Mat::Zero(4, 4);
      m(0, 0) = 1; m(2, 1) = 1; m(1, 2) = 1; m(3, 3) = 1;
      return m;
    }
    default:
      throw CircuitError(std::string("no matrix for ") + gate_name(g.kind));
  }
}

void apply_gate(Vec& state, const Gate& g) {
  const long dim = state.size();
  if (g.qubits.size() == 1) {
    Mat m = gate_matrix(g);
    long bit = 1L << g.qubits[0];
    for (long i = 0; i < dim; ++i) {
      if (i & bit) continue;
      Cplx a0 = state[i], a1 = state[i | bit];
      state[i] = m(0, 0) * a0 + m(0, 1) * a1;
      state[i | bit] = m(1, 0) * a0 + m(1, 1) * a1;
    }
    return;
  }
  if (g.qubits.size() == 2) {
    long b0 = 1L << g.qubits[0];  // gate's first operand = matrix bit 0
    long b1 = 1L << g.qubits[1];
    Mat m = gate_matrix(g);
    for (long i = 0; i < dim; ++i) {
      if ((i & b0) || (i & b1)) continue;
      long idx[4] = {i, i | b0, i | b1, i | b0 | b1};
      Cplx a[4];
      for (int k = 0; k < 4; ++k) a[k] = state[idx[k]];
      for (int r = 0; r < 4; ++r) {
        Cplx v = 0;
        for (int k = 0; k < 4; ++k) v += m(r, k) * a[k];
        state[idx[r]] = v;
      }
    }
    return;
  }
  if (g.kind == GateKind::Barrier) return;
  throw CircuitError("cannot apply gate in simulation");
}

Vec run_circuit(const Circuit& c, Vec state) {
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Measure)
      throw CircuitError("measurement inside unitary simulation");
    if (g.kind == GateKind::Barrier) continue;
    apply_gate(state, g);
  }
  return state;
}

Mat unitary_of(const Circuit& c) {
  if (c.num_qubits() > kMaxQubits)
    throw CircuitError("unitary_of: more than 12 qubits");
  for (const Gate& g : c.gates())
    if (g.kind == GateKind::Measure) throw CircuitError("unitary_of: measurement present");
  long dim = 1L << c.num_qubits();
  Mat u(dim, dim);
  for (long j = 0; j < dim; ++j) {
    Vec col = Vec::Zero(dim);
    col[j] = 1;
    u.col(j) = run_circuit(c, std::move(col));
  }
  return u;
}

Circuit defer_measurements(const ProtocolCircuit& pc) {
  int n = pc.total_qubits();
  if (n > kMaxQubits)
    throw CircuitError("defer_measurements: more than 12 qubits after ancilla inclusion");
  Circuit out(n);
  std::map<int, int> bit_source;        // bit -> measured qubit
  std::vector<char> seen_bit(static_cast<size_t>(pc.num_bits), 0);
  std::vector<char> pending_reset(static_cast<size_t>(n), 0);

  auto flush_reset = [&](int q) {
    if (pending_reset[static_cast<size_t>(q)]) {
      out.h(q);  // the measured qubit sits in |+> once its branches agree
      pending_reset[static_cast<size_t>(q)] = 0;
    }
  };

  for (const ProtoEvent& e : pc.events) {
    switch (e.kind) {
      case ProtoEventKind::EprPrepare:
        flush_reset(e.qubits[0]);
        flush_reset(e.qubits[1]);
        out.h(e.qubits[0]);
        out.cx(e.qubits[0], e.qubits[1]);
        break;
      case ProtoEventKind::LocalGate: {
        Gate g = e.gate;
        out.add(g.kind, g.qubits, g.params);
        break;
      }
      case ProtoEventKind::MeasureZ:
      case ProtoEventKind::MeasureX: {
        if (e.bit < 0 || e.bit >= pc.num_bits || seen_bit[static_cast<size_t>(e.bit)])
          throw CircuitError("defer_measurements: malformed classical dependency");
        seen_bit[static_cast<size_t>(e.bit)] = 1;
        if (e.kind == ProtoEventKind::MeasureX) out.h(e.qubits[0]);
        bit_source[e.bit] = e.qubits[0];
        pending_reset[static_cast<size_t>(e.qubits[0])] = 1;
        break;
      }
      case ProtoEventKind::CondX: {
        auto it = bit_source.find(e.bit);
        if (it == bit_source.end())
          throw CircuitError("defer_measurements: conditioned gate on unknown bit");
        out.cx(it->second, e.qubits[0]);
        break;
      }
      case ProtoEventKind::CondZ: {
        auto it = bit_source.find(e.bit);
        if (it == bit_source.end())
          throw CircuitError("defer_measurements: conditioned gate on unknown bit");
        out.cz(it->second, e.qubits[0]);
        break;
      }
      case ProtoEventKind::Send:
        break;
    }
  }
  for (int q = 0; q < n; ++q) flush_reset(q);
  return out;
}

namespace {

Mat restricted_action(const Circuit& a, const std::vector<int>& data, long dim_a) {
  long d = static_cast<long>(data.size());
  long dim = 1L << d;
  Mat m(dim, dim);
  for (long j = 0; j < dim; ++j) {
    Vec in = Vec::Zero(dim_a);
    long idx = 0;
    for (long bit = 0; bit < d; ++bit)
      if (j & (1L << bit)) idx |= 1L << data[static_cast<size_t>(bit)];
    in[idx] = 1;
    Vec fin = run_circuit(a, std::move(in));
    for (long i = 0; i < dim; ++i) {
      long out_idx = 0;
      for (long bit = 0; bit < d; ++bit)
        if (i & (1L << bit)) out_idx |= 1L << data[static_cast<size_t>(bit)];
      m(i, j) = fin[out_idx];
    }
  }
  return m;
}

double phase_aligned_distance(const Mat& u, const Mat& v) {
  long r = 0, c = 0;
  double best = -1;
  for (long i = 0; i < v.rows(); ++i)
    for (long j = 0; j < v.cols(); ++j)
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        r = i;
        c = j;
      }
  Cplx lambda = u(r, c) / v(r, c);
  double mag = std::abs(lambda);
  if (mag < 1e-300) return 1e300;
  lambda /= mag;  // compare up to a pure phase; magnitude loss must show up
  return (u - lambda * v).cwiseAbs().maxCoeff();
}

}  // namespace

bool unitaries_equal_up_to_phase(const Mat& u, const Mat& v, double tol) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
  return phase_aligned_distance(u, v) < tol;
}

double equivalence_distance(const Circuit& a, const Circuit& b,
                            const std::vector<int>& data_qubits_in_a) {
  if (a.num_qubits() > kMaxQubits)
    throw CircuitError("equivalent: more than 12 qubits after ancilla inclusion");
  if (static_cast<int>(data_qubits_in_a.size()) != b.num_qubits())
    throw CircuitError("equivalent: dimension mismatch");
  Mat ua = restricted_action(a, data_qubits_in_a, 1L << a.num_qubits());
  Mat ub = unitary_of(b);
  return phase_aligned_distance(ua, ub);
}

bool equivalent(const Circuit& a, const Circuit& b, const std::vector<int>& data_qubits_in_a,
                double tol) {
  return equivalence_distance(a, b, data_qubits_in_a) < tol;
}

}  // namespace dqcc
