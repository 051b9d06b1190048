#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace funsub
{

using cell_id = std::uint32_t;

/// Fanin reference inside a post-mapping netlist: a primary input or a cell.
struct pm_signal
{
  bool is_input = true;
  std::uint32_t index = 0;

  static constexpr pm_signal input( std::uint32_t i ) noexcept { return { true, i }; }
  static constexpr pm_signal cell( cell_id c ) noexcept { return { false, c }; }

  friend auto operator<=>( pm_signal const&, pm_signal const& ) = default;
};

struct pm_cell
{
  std::string type;
  std::vector<pm_signal> fanins;

  friend bool operator==( pm_cell const&, pm_cell const& ) = default;
};

/// Post-mapping netlist: library cell instances over ordered primary inputs,
/// with a single output cell. Cell ids are positions in `cells`.
struct pm_netlist
{
  std::uint32_t num_inputs = 0;
  std::vector<pm_cell> cells;
  cell_id output = 0;

  friend bool operator==( pm_netlist const&, pm_netlist const& ) = default;
};

} // namespace funsub
