#pragma once

#include <funsub/aig.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace funsub
{

/// Injective map from query node ids to target node ids (`image[q]`).
struct embedding
{
  std::vector<node_id> image;

  friend bool operator==( embedding const&, embedding const& ) = default;
};

struct match_options
{
  /// Query PIs may only map to target PIs (used for isomorphism).
  bool pis_to_pis = false;
  /// Query output must map to the target output (used for isomorphism).
  bool output_to_output = false;
  /// Abort after this many candidate assignments; 0 means unlimited.
  std::uint64_t max_steps = 0;
};

enum class match_status
{
  found,
  none,
  aborted
};

struct match_outcome
{
  match_status status = match_status::none;
  std::optional<embedding> mapping;
  std::uint64_t steps = 0;
};

/*! \brief Structural subgraph embedding of `query` into `target`.

  Non-PI query nodes map to target nodes of the same kind, and every query
  edge u->v maps onto a target edge into m(v); AND fanins are matched as an
  unordered pair. Query PIs are cut points and may map to any target node.
  The search assigns query nodes outward from the output; candidates are
  ordered by (kind, fanin count, id).
*/
match_outcome match( aig const& query, aig const& target, match_options const& options = {} );

/// Unlimited search with cut semantics.
std::optional<embedding> find_embedding( aig const& query, aig const& target );

/// Edge-by-edge check of a mapping, independent of the search.
bool verify_embedding( aig const& query, aig const& target, embedding const& m );

/// True iff a bijective, kind- and edge-preserving mapping exists.
bool is_isomorphic( aig const& a, aig const& b );

} // namespace funsub
