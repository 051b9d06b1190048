#pragma once

#include <funsub/aig.hpp>
#include <funsub/cell_library.hpp>
#include <funsub/pm_netlist.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace funsub
{

inline constexpr unsigned default_cut_size = 4;
inline constexpr std::size_t default_cut_cap = 16;

struct cut
{
  node_id root = 0;
  std::vector<node_id> leaves; ///< ascending ids

  friend bool operator==( cut const&, cut const& ) = default;
};

/*! \brief K-feasible cuts of every node.

  Each set starts with the trivial cut {v}; the rest follow in priority
  order (fewer leaves first, then lexicographic leaf ids), truncated to `cap`
  cuts per node. Requires 2 <= k <= 4.
*/
std::vector<std::vector<cut>> enumerate_cuts( aig const& g, unsigned k = default_cut_size, std::size_t cap = default_cut_cap );

/// Function of the cut root over its leaves (leaf j is variable j). At most
/// four leaves; rows past 2^|leaves| are zero.
std::uint16_t cut_function( aig const& g, cut const& c );

struct mapping_result
{
  pm_netlist pm;
  /// Chosen cut for every node that became a cell root.
  std::map<node_id, cut> coverage;
};

/*! \brief Covers the circuit with library cells.

  Dynamic programming over cuts minimizes the cell count; a cut matches a
  cell when the cut function equals the cell table under some assignment of
  leaves to cell inputs. Ties break by cell name, then leaf order. Inputs
  follow ascending PI id; cells follow topological root order.
*/
mapping_result map_to_cells( aig const& g, cell_library const& lib, unsigned k = default_cut_size );

/*! \brief Node map produced by expansion.

  `phi` relates expanded node ids to cell ids as sorted (node, cell) pairs.
  Every gate belongs to the cell whose template created it; a cell whose
  nodes were all removed by cleanup adopts its output driver's surviving
  node, so a node may appear with more than one cell.
  `pi_map[p]` is the PM input index of expanded PI p.
*/
struct node_map
{
  std::vector<std::pair<node_id, cell_id>> phi;
  std::vector<std::uint32_t> pi_map;

  /// Cells related to `node` (ascending).
  std::vector<cell_id> cells_of( node_id node ) const;

  friend bool operator==( node_map const&, node_map const& ) = default;
};

struct expansion
{
  aig circuit;
  node_map map;
};

/// Replaces every cell with its template, collapses double negations and
/// removes dead nodes, keeping `phi` consistent.
expansion expand( pm_netlist const& pm, cell_library const& lib );

/// Checks phi totality over gates and cell coverage; returns problems found.
std::vector<std::string> check_node_map( expansion const& e, pm_netlist const& pm );

std::string write_node_map( node_map const& m );
node_map parse_node_map( std::string_view text );

} // namespace funsub
