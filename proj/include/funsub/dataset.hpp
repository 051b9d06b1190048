#pragma once

#include <funsub/aig.hpp>
#include <funsub/cell_library.hpp>
#include <funsub/pm_netlist.hpp>
#include <funsub/records.hpp>
#include <funsub/sampler.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace funsub
{

struct base_circuit
{
  std::string id;
  aig circuit;
};

struct named_netlist
{
  std::string id;
  pm_netlist pm;
};

struct gen_options
{
  sample_params sampling;
  /// Negatives per positive; base i gets floor((i+1)r) - floor(ir).
  double ratio = 1.0;
  /// Worker threads; the output does not depend on this.
  unsigned jobs = 1;
  /// Resampling attempts for a negative that embeds the query.
  int negative_attempts = 5;
  /// Search budget of each negative filter match; an aborted search counts
  /// as an embedding.
  std::uint64_t filter_steps = 200000;
};

/// Seed stream of one base: derive_seed(seed, fnv1a(text)).
std::uint64_t base_seed( std::uint64_t seed, std::string_view canonical_text );

/*! \brief Positive-labeling rule.
  (sub, candidate) is positive when sub embeds structurally into `base` and
  `candidate` is functionally equivalent to `base`.
*/
bool positive_witness( aig const& sub, aig const& base, aig const& candidate );

/*! \brief Stage 1 records.
  For each base: sub = sampled subgraph, syn = a random named flow applied
  to the base (bases that cannot be restructured are skipped), pm = the
  mapped syn. Each kept base yields one positive followed by its negatives,
  which pair the same sub with the circuits of other kept bases drawn
  uniformly. A candidate into which sub embeds (aig or syn form) is redrawn
  up to `negative_attempts` times, then the negative is dropped. Throws
  `error("cannot form negatives")` with fewer than two usable bases.
*/
std::vector<stage1_record> gen_stage1( std::vector<base_circuit> const& bases, cell_library const& lib,
                                       std::uint64_t seed, gen_options const& options = {} );

/*! \brief Stage 2 records.
  Each netlist is expanded, a subgraph of the expansion is sampled and cell
  i is labeled 1 iff some non-fresh sub node stands for an expanded node
  related to i.
*/
std::vector<stage2_record> gen_stage2( std::vector<named_netlist> const& pms, cell_library const& lib,
                                       std::uint64_t seed, gen_options const& options = {} );

/// Per-cell labels of `sub` against the node map of an expansion.
std::vector<int> boundary_labels( sampled_subgraph const& sub, std::vector<std::pair<node_id, cell_id>> const& phi,
                                  std::size_t num_cells );

/// k-hop cones of each circuit, named `<id>/<k>`; cones smaller than
/// `min_nodes` are skipped.
std::vector<base_circuit> partition_bases( std::vector<base_circuit> const& circuits, sample_params const& params,
                                           std::uint64_t seed, std::size_t min_nodes = 8 );

} // namespace funsub
