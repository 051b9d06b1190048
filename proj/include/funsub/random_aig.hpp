#pragma once

#include <funsub/aig.hpp>

#include <cstdint>

namespace funsub
{

struct random_aig_params
{
  unsigned pis_min = 6;
  unsigned pis_max = 12;
  unsigned nodes_min = 30;
  unsigned nodes_max = 200;
  /// Probability that a generated gate is a NOT.
  double not_probability = 0.3;
  /// Probability that a fanin is drawn from the nodes without fanout.
  double dangling_bias = 0.5;
};

/*! \brief Random valid circuit with PI and total node counts inside the
  requested ranges.

  Gates are added one at a time, with fanins biased toward unused and recent
  nodes; leftover unused nodes are then merged pairwise into ANDs so that
  every node reaches the single output. No NOT->NOT edge, no duplicate AND
  pairs, no AND of a node with itself or its own complement. Deterministic in
  (params, seed).
*/
aig random_aig( random_aig_params const& params, std::uint64_t seed );

} // namespace funsub
