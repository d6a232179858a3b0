#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "ued/rng.hpp"

namespace ued {

enum class CycleType { dr, replay, mutation };

inline const char* to_string(CycleType c) {
  switch (c) {
    case CycleType::dr:
      return "dr";
    case CycleType::replay:
      return "replay";
    case CycleType::mutation:
      return "mutation";
  }
  return "?";
}

enum class MetaNode { A, B };

/// Two-node automaton choosing the next update-cycle of replay-based training.
/// Node B is occupied only right after a Replay cycle.
///
///          DR            Replay      Mutation
///   A   1 - p            p           0
///   B   (1-p)(1-q)       p(1-q)      q
struct MetaPolicyState {
  MetaNode node = MetaNode::A;
  double p = 0.5;
  double q = 0.0;

  friend bool operator==(const MetaPolicyState&, const MetaPolicyState&) = default;
};

/// Samples the next cycle from the current node's row; the successor node is
/// B iff the chosen cycle is Replay.
inline std::pair<CycleType, MetaPolicyState> meta_policy_next(MetaPolicyState state, RngKey key) {
  if (!(state.p >= 0 && state.p <= 1) || !(state.q >= 0 && state.q <= 1))
    throw std::invalid_argument("meta-policy probabilities must lie in [0, 1]");
  RngStream rng(key);
  const double u = rng.uniform();
  CycleType op = CycleType::dr;
  if (state.node == MetaNode::A) {
    op = u < state.p ? CycleType::replay : CycleType::dr;
  } else if (u < state.q) {
    op = CycleType::mutation;
  } else if (u < state.q + state.p * (1.0 - state.q)) {
    op = CycleType::replay;
  }
  state.node = op == CycleType::replay ? MetaNode::B : MetaNode::A;
  return {op, state};
}

}  // namespace ued
