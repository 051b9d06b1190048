#pragma once

#include <funsub/aig.hpp>

#include <cstdint>
#include <vector>

namespace funsub
{

struct sample_params
{
  double rho_min = 0.6;
  double rho_max = 0.95;
  unsigned k_min = 8;
  unsigned k_max = 12;
  std::uint64_t seed = 0;

  /// Throws `error` unless 0 < rho_min <= rho_max <= 1 and k_min <= k_max.
  void check() const;
};

/*! \brief Sampled subgraph with its provenance.

  `source[i]` is the node of the sampled-from circuit that node i stands
  for; for a PI created at the cut (`fresh[i]`) it is the dropped node whose
  signal the PI replaces.
*/
struct sampled_subgraph
{
  aig circuit;
  std::vector<node_id> source;
  std::vector<bool> fresh;
  node_id root = 0; ///< root in the sampled-from circuit
  double rho = 0;
};

/*! \brief Random subgraph sampling by fanin BFS.

  Draw order from `splitmix64(seed)`: a coin (p = 0.5) that moves the root
  from the output to the fanin with the largest transitive fanin cone (ties
  to the lower id; never onto a PI), then rho ~ U[rho_min, rho_max], then one
  shuffle of the fanin list of every expanded node. Nodes are collected until
  |V| >= rho * |g|. The result keeps every fanin edge among collected nodes;
  fanins outside the sample become fresh PIs (one per dropped source node),
  and nodes that do not reach the root are removed. Throws
  `degenerate_sample` when fewer than two nodes remain.
*/
sampled_subgraph sample_subgraph_detailed( aig const& g, std::uint64_t seed, sample_params const& params = {} );

aig sample_subgraph( aig const& g, std::uint64_t seed, sample_params const& params = {} );

/// Retries degenerate samples with seeds derived from `seed` (attempt i
/// uses derive_seed(seed, i), attempt 0 uses `seed` itself).
sampled_subgraph sample_with_retry( aig const& g, std::uint64_t seed, sample_params const& params = {}, int max_attempts = 16 );

/*! \brief Covers the circuit with k-hop fanin cones.

  The first cone is rooted at the output; each later root is drawn
  uniformly among uncovered gates whose fanouts are all covered, until every
  gate is covered. Each cone holds the nodes within k fanin hops of its root
  (k ~ U{k_min..k_max}); fanins beyond the cone become PIs.
*/
std::vector<aig> partition_khop( aig const& g, sample_params const& params );

/// Transitive fanin cone size (excluding the node itself) of every node.
std::vector<std::size_t> fanin_cone_sizes( aig const& g );

} // namespace funsub
