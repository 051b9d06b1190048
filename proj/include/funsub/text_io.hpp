#pragma once

#include <funsub/aig.hpp>
#include <funsub/cell_library.hpp>
#include <funsub/pm_netlist.hpp>

#include <string>
#include <string_view>

namespace funsub
{

/*! \brief Circuit text format (`.aig.txt`).

  One statement per line; `#` starts a comment.

      pi  <name>
      and <name> <fanin> <fanin>
      not <name> <fanin>
      out <name>

  Names are arbitrary tokens and are densified to ids in order of
  appearance. The canonical writer names node i `n<i>`.
*/
aig parse_aig( std::string_view text, bool check = true );
std::string write_aig( aig const& g );

/*! \brief Cell library format (`.lib.txt`).

      cell <NAME> <arity> <table>
        <circuit statements for the template>
      end
*/
cell_library parse_library( std::string_view text );
std::string write_library( cell_library const& lib );

/*! \brief Mapped netlist format (`.pm.txt`).

      input <name>
      cell  <name> <TYPE> <fanin>...
      out   <name>

  Canonical names: `i<k>` for inputs, `c<k>` for cells.
*/
pm_netlist parse_pm( std::string_view text, cell_library const& lib, bool check = true );
std::string write_pm( pm_netlist const& pm );

} // namespace funsub
