#pragma once

#include <funsub/aig.hpp>
#include <funsub/cell_library.hpp>
#include <funsub/pm_netlist.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace funsub
{

/// One broken invariant. `node` is the offending node (or cell) id when the
/// rule is tied to one.
struct violation
{
  std::optional<std::uint32_t> node;
  std::string rule;
  std::string detail;

  friend bool operator==( violation const&, violation const& ) = default;
};

namespace rules
{
inline constexpr char const* empty = "empty graph";
inline constexpr char const* no_output = "no output";
inline constexpr char const* bad_fanin = "fanin out of range";
inline constexpr char const* arity = "arity";
inline constexpr char const* not_not = "NOT→NOT edge";
inline constexpr char const* cycle = "cycle";
inline constexpr char const* dead_logic = "dead logic";
inline constexpr char const* unknown_cell = "unknown cell";
inline constexpr char const* dead_input = "dead input";
} // namespace rules

std::vector<violation> validate( aig const& g );
std::vector<violation> validate( pm_netlist const& pm, cell_library const& lib );

std::string format_violations( std::vector<violation> const& report );

/// Throws `error` listing the violations when the report is non-empty.
void expect_valid( aig const& g, std::string_view what = "circuit" );

/// Topological order (fanins first), lexicographically smallest by node id.
/// Throws `error("not a DAG")` on a cycle.
std::vector<node_id> topo_order( aig const& g );

/// Longest PI-to-output path length in edges; PIs sit at level 0.
std::uint32_t depth( aig const& g );

/// Per-node levels (PIs 0, every gate 1 + max fanin level).
std::vector<std::uint32_t> levels( aig const& g );

std::vector<cell_id> topo_order( pm_netlist const& pm );
std::uint32_t depth( pm_netlist const& pm );

} // namespace funsub
