#pragma once

#include "dqcc/aggregate.hpp"
#include "dqcc/circuit.hpp"

#include <vector>

namespace dqcc {

enum class PatternClass { UniControlClean, UniControlDirty, UniTarget, Bidirectional };

const char* pattern_name(PatternClass p);

/// Pattern of a block: UniControl* when the pivot is control in every
/// member (Clean when every pivot-touching interior gate between members
/// can be commuted out to a block boundary), UniTarget when the pivot is
/// target throughout, Bidirectional otherwise.
///
/// Note a genuinely diagonal gate (T, T+, RZ, ...) on the pivot between two
/// control-role members commutes past them, so such a block stays Clean and
/// Cat-eligible; only separators the commutation rules cannot move (H,
/// X-axis rotations, ...) make a block Dirty.
PatternClass classify(const CommBlock& b, const Circuit& c);

struct TransformResult {
  Circuit circuit;
  std::vector<CommBlock> blocks;  // every block repositioned
};

/// Hadamard-conjugates a UniTarget block so the pivot becomes the control
/// (adjacent pivot-H pairs cancelled). Unitary preserved. Errors if the
/// block is not UniTarget.
TransformResult transform_target(const Circuit& c, const std::vector<CommBlock>& blocks, size_t index);

struct AssignResult {
  Circuit circuit;
  std::vector<CommBlock> blocks;
  std::vector<PatternClass> patterns;  // post-transform
  std::vector<Scheme> schemes;
};

/// Transforms UniTarget blocks, then assigns Cat to UniControlClean and
/// TP to everything else.
AssignResult assign(const Circuit& c, std::vector<CommBlock> blocks);

/// Number of Cat invocations a Cat-only assignment would need for this
/// block: maximal same-role runs unbroken by stuck pivot gates.
int cat_only_segments(const CommBlock& b, const Circuit& c);

}  // namespace dqcc
