#pragma once

#include "dqcc/aggregate.hpp"
#include "dqcc/circuit.hpp"
#include "dqcc/partition.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dqcc {

enum class ProtoEventKind {
  EprPrepare,  // entangle two communication qubits across nodes
  LocalGate,   // plain gate on physical qubits
  MeasureZ,    // computational-basis readout -> bit
  MeasureX,    // X-basis readout (H absorbed into the readout) -> bit
  CondX,       // classically conditioned X
  CondZ,       // classically conditioned Z
  Send,        // one classical bit between nodes
};

struct ProtoEvent {
  ProtoEventKind kind{ProtoEventKind::LocalGate};
  Gate gate;               // LocalGate only
  std::vector<int> qubits; // physical qubits touched (all kinds but Send)
  int bit = -1;            // MeasureZ/X produce, CondX/Z and Send consume
  int node_from = -1, node_to = -1;  // Send
};

/// Primitive event list over data + communication qubits. Physical layout:
/// data qubits 0..n-1, then two communication qubits per node.
struct ProtocolCircuit {
  int num_data_qubits = 0;
  int num_nodes = 0;
  int num_bits = 0;
  std::vector<ProtoEvent> events;

  int comm_qubit(int node, int slot) const { return num_data_qubits + 2 * node + slot; }
  int total_qubits() const { return num_data_qubits + 2 * num_nodes; }
};

/// Expand one block under its scheme, pivot starting and ending at home.
/// Cat: one EPR, cat-entangler, members on the remote node, disentangler.
/// TP: teleport out, execute, teleport back, shift into the home slot.
ProtocolCircuit expand(const CommBlock& b, Scheme s, const Circuit& c, const Partition& p);

/// One fused teleport chain: consecutive same-pivot TP blocks whose
/// intermediate return teleports are elided (visit order = circuit order).
struct FusionChain {
  std::vector<size_t> block_indices;  // >= 2 blocks, ascending span order
};

struct ExpandedProgram {
  ProtocolCircuit pc;
  int epr_total = 0;
  int epr_tp = 0;            // EPRs consumed by TP blocks (fused chains included)
  int elided_teleports = 0;  // returns removed by fusion
};

/// Expand the whole compiled program sequentially in circuit order:
/// standalone local gates verbatim, blocks via their schemes, TP fusion
/// chains as teleport cycles. Non-chain gates touching a travelling pivot
/// are remapped to its current host.
ExpandedProgram expand_program(const Circuit& c, const Partition& p,
                               const std::vector<CommBlock>& blocks,
                               const std::vector<Scheme>& schemes,
                               const std::vector<FusionChain>& chains);

/// Extended-QASM rendering of a protocol (epr/send/cond pseudo instructions),
/// for inspection only.
std::string protocol_to_extended_qasm(const ProtocolCircuit& pc);

/// Event emitter with communication-slot bookkeeping and a data-qubit
/// location map. Throws when a node runs out of free slots.
class ProtocolBuilder {
 public:
  ProtocolBuilder(const Circuit& c, const Partition& p);

  ProtocolCircuit take() { return std::move(pc_); }
  int epr_count() const { return epr_count_; }

  int alloc(int node);
  void release(int phys);
  int where(int q) const { return location_[static_cast<size_t>(q)]; }
  void set_where(int q, int phys) { location_[static_cast<size_t>(q)] = phys; }
  bool has_free_slot(int node) const;

  void epr(int qa, int qb);
  void local(const Gate& g);
  void local_remapped(const Gate& g);
  int measure(int q, bool x_basis);
  void send(int bit, int from, int to);
  void cond(ProtoEventKind kind, int q, int bit);

  /// Bell measurement + corrections: state at src_phys lands on a fresh comm
  /// qubit of dst_node (returned). Frees src_phys.
  int teleport(int src_phys, int src_node, int dst_node);
  /// Return a travelling data qubit into its home slot.
  void teleport_home(int q);

  void expand_cat(const CommBlock& b, const Circuit& c);
  void exec_tp_block(const CommBlock& b, const Circuit& c);

  const Partition& partition() const { return p_; }
  int num_data_qubits() const { return pc_.num_data_qubits; }

 private:
  const Circuit& c_;
  const Partition& p_;
  ProtocolCircuit pc_;
  std::vector<bool> slot_busy_;
  std::vector<int> location_;
  int epr_count_ = 0;
};

}  // namespace dqcc
