#include <funsub/cell_library.hpp>

#include <funsub/error.hpp>
#include <funsub/simulate.hpp>
#include <funsub/validate.hpp>

#include <fmt/format.h>

#include <algorithm>

namespace funsub
{

namespace
{

/* functions of the standard cell names */
std::string_view standard_table( std::string_view name )
{
  static std::pair<std::string_view, std::string_view> const tables[] = {
      { "AND2", "0001" }, { "AOI21", "11100000" }, { "INV", "10" }, { "NAND2", "1110" },
      { "NOR2", "1000" }, { "OR2", "0111" },       { "XOR2", "0110" } };
  for ( auto const& [n, t] : tables )
  {
    if ( n == name )
      return t;
  }
  return {};
}

} // namespace

cell_library::cell_library( std::vector<cell_type> cells ) : cells_( std::move( cells ) )
{
  std::sort( cells_.begin(), cells_.end(), []( auto const& a, auto const& b ) { return a.name < b.name; } );
  for ( std::size_t i = 0; i < cells_.size(); ++i )
  {
    auto const& c = cells_[i];
    auto const corrupt = [&]( std::string const& why ) {
      return error( fmt::format( "library corrupt: {} ({})", c.name, why ) );
    };
    if ( c.name.empty() )
      throw corrupt( "empty name" );
    if ( i > 0 && cells_[i - 1].name == c.name )
      throw corrupt( "duplicate name" );
    if ( auto const report = validate( c.tmpl ); !report.empty() )
      throw corrupt( format_violations( report ) );
    if ( c.tmpl.num_pis() != c.arity )
      throw corrupt( fmt::format( "template has {} PIs, arity is {}", c.tmpl.num_pis(), c.arity ) );
    if ( c.arity > exhaustive_pi_cap )
      throw corrupt( "arity too large" );
    auto const simulated = compute_truth_table( c.tmpl ).to_string();
    if ( simulated != c.table )
      throw corrupt( fmt::format( "declared table {} but template computes {}", c.table, simulated ) );
    if ( auto const standard = standard_table( c.name ); !standard.empty() && standard != c.table )
      throw corrupt( fmt::format( "table {} differs from the standard {} function {}", c.table, c.name, standard ) );
  }
}

cell_type const* cell_library::find( std::string_view name ) const noexcept
{
  auto it = std::lower_bound( cells_.begin(), cells_.end(), name, []( auto const& c, std::string_view n ) { return c.name < n; } );
  if ( it != cells_.end() && it->name == name )
    return &*it;
  return nullptr;
}

cell_type const& cell_library::at( std::string_view name ) const
{
  if ( auto const* c = find( name ) )
    return *c;
  throw error( fmt::format( "unknown cell '{}'", name ) );
}

std::vector<std::string_view> const& required_cell_names()
{
  static std::vector<std::string_view> const names{ "AND2", "AOI21", "INV", "NAND2", "NOR2", "OR2", "XOR2" };
  return names;
}

bool cell_library::contains_required_cells() const noexcept
{
  return std::all_of( required_cell_names().begin(), required_cell_names().end(), [this]( auto n ) { return find( n ) != nullptr; } );
}

namespace
{

cell_type make_cell( std::string name, unsigned arity, std::string table, auto&& body )
{
  aig g;
  std::vector<node_id> in;
  for ( unsigned k = 0; k < arity; ++k )
    in.push_back( g.add_pi() );
  g.set_output( body( g, in ) );
  return { std::move( name ), arity, std::move( g ), std::move( table ) };
}

cell_library make_builtin()
{
  std::vector<cell_type> cells;
  cells.push_back( make_cell( "INV", 1, "10", []( aig& g, auto const& i ) { return g.add_not( i[0] ); } ) );
  cells.push_back( make_cell( "AND2", 2, "0001", []( aig& g, auto const& i ) { return g.add_and( i[0], i[1] ); } ) );
  cells.push_back( make_cell( "NAND2", 2, "1110", []( aig& g, auto const& i ) { return g.add_not( g.add_and( i[0], i[1] ) ); } ) );
  cells.push_back( make_cell( "OR2", 2, "0111", []( aig& g, auto const& i ) {
    return g.add_not( g.add_and( g.add_not( i[0] ), g.add_not( i[1] ) ) );
  } ) );
  cells.push_back( make_cell( "NOR2", 2, "1000", []( aig& g, auto const& i ) {
    return g.add_and( g.add_not( i[0] ), g.add_not( i[1] ) );
  } ) );
  cells.push_back( make_cell( "XOR2", 2, "0110", []( aig& g, auto const& i ) {
    auto const na = g.add_not( i[0] );
    auto const nb = g.add_not( i[1] );
    auto const t0 = g.add_not( g.add_and( i[0], nb ) );
    auto const t1 = g.add_not( g.add_and( na, i[1] ) );
    return g.add_not( g.add_and( t0, t1 ) );
  } ) );
  // !((i0 & i1) | i2)
  cells.push_back( make_cell( "AOI21", 3, "11100000", []( aig& g, auto const& i ) {
    return g.add_and( g.add_not( g.add_and( i[0], i[1] ) ), g.add_not( i[2] ) );
  } ) );
  return cell_library( std::move( cells ) );
}

} // namespace

cell_library const& builtin_library()
{
  static cell_library const lib = make_builtin();
  return lib;
}

} // namespace funsub
