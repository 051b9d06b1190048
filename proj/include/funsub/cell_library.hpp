#pragma once

#include <funsub/aig.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace funsub
{

/*! \brief A library cell and its AIG implementation.

  Template PIs, in ascending id order, are the cell inputs i0, i1, ...
  `table` lists the output for every input row, row 0 first; row r assigns
  bit k of r to input k (i0 least significant).
*/
struct cell_type
{
  std::string name;
  unsigned arity = 0;
  aig tmpl;
  std::string table;

  friend bool operator==( cell_type const&, cell_type const& ) = default;
};

class cell_library
{
public:
  cell_library() = default;

  /// Checks every invariant (valid template, PI count equals arity, table
  /// matches the simulated template, unique names, standard names carry
  /// their standard function) and throws
  /// `error("library corrupt: <cell>")` on the first offending cell.
  explicit cell_library( std::vector<cell_type> cells );

  cell_type const* find( std::string_view name ) const noexcept;
  cell_type const& at( std::string_view name ) const;

  /// Cells sorted by name.
  std::vector<cell_type> const& cells() const noexcept { return cells_; }
  bool contains_required_cells() const noexcept;

  friend bool operator==( cell_library const&, cell_library const& ) = default;

private:
  std::vector<cell_type> cells_;
};

/// Names every library must provide.
std::vector<std::string_view> const& required_cell_names();

/// The built-in mini library: INV, AND2, NAND2, OR2, NOR2, XOR2, AOI21.
cell_library const& builtin_library();

} // namespace funsub
