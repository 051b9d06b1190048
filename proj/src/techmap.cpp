#include <funsub/techmap.hpp>

#include <funsub/error.hpp>
#include <funsub/validate.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace funsub
{

namespace
{

bool cut_priority( std::vector<node_id> const& a, std::vector<node_id> const& b )
{
  if ( a.size() != b.size() )
    return a.size() < b.size();
  return a < b;
}

std::vector<node_id> merge_leaves( std::vector<node_id> const& a, std::vector<node_id> const& b )
{
  std::vector<node_id> out;
  std::set_union( a.begin(), a.end(), b.begin(), b.end(), std::back_inserter( out ) );
  return out;
}

constexpr std::uint16_t projections[4] = { 0xAAAA, 0xCCCC, 0xF0F0, 0xFF00 };

} // namespace

std::vector<std::vector<cut>> enumerate_cuts( aig const& g, unsigned k, std::size_t cap )
{
  if ( k < 2 || k > 4 )
    throw error( fmt::format( "cut size {} outside [2, 4]", k ) );
  if ( cap < 1 )
    throw error( "cut cap must be positive" );

  std::vector<std::vector<std::vector<node_id>>> sets( g.size() );
  for ( auto v : topo_order( g ) )
  {
    std::vector<std::vector<node_id>> found;
    auto const& f = g.fanins( v );
    switch ( g.kind( v ) )
    {
    case node_kind::pi:
      break;
    case node_kind::not_gate:
      found = sets[f[0]];
      break;
    case node_kind::and_gate:
      for ( auto const& a : sets[f[0]] )
      {
        for ( auto const& b : sets[f[1]] )
        {
          auto m = merge_leaves( a, b );
          if ( m.size() <= k )
            found.push_back( std::move( m ) );
        }
      }
      break;
    }
    std::sort( found.begin(), found.end(), cut_priority );
    found.erase( std::unique( found.begin(), found.end() ), found.end() );
    found.erase( std::remove( found.begin(), found.end(), std::vector<node_id>{ v } ), found.end() );
    if ( found.size() > cap - 1 )
      found.resize( cap - 1 );
    found.insert( found.begin(), std::vector<node_id>{ v } );
    sets[v] = std::move( found );
  }

  std::vector<std::vector<cut>> result( g.size() );
  for ( node_id v = 0; v < g.size(); ++v )
  {
    for ( auto& leaves : sets[v] )
      result[v].push_back( { v, std::move( leaves ) } );
  }
  return result;
}

std::uint16_t cut_function( aig const& g, cut const& c )
{
  if ( c.leaves.size() > 4 )
    throw error( "cut_function supports at most four leaves" );
  std::unordered_map<node_id, std::uint16_t> value;
  for ( std::size_t j = 0; j < c.leaves.size(); ++j )
    value[c.leaves[j]] = projections[j];

  // iterative post-order evaluation of the cone
  std::vector<node_id> stack{ c.root };
  while ( !stack.empty() )
  {
    auto const v = stack.back();
    if ( value.count( v ) )
    {
      stack.pop_back();
      continue;
    }
    if ( g.is_pi( v ) )
      throw error( fmt::format( "leaves of the cut at {} do not separate PI {}", c.root, v ) );
    bool ready = true;
    for ( auto f : g.fanins( v ) )
    {
      if ( !value.count( f ) )
      {
        stack.push_back( f );
        ready = false;
      }
    }
    if ( !ready )
      continue;
    auto const& f = g.fanins( v );
    value[v] = g.kind( v ) == node_kind::not_gate ? static_cast<std::uint16_t>( ~value[f[0]] )
                                                  : static_cast<std::uint16_t>( value[f[0]] & value[f[1]] );
    stack.pop_back();
  }
  auto const rows = 1u << c.leaves.size();
  auto const mask = rows >= 16 ? 0xFFFFu : ( ( 1u << rows ) - 1 );
  return static_cast<std::uint16_t>( value[c.root] & mask );
}

namespace
{

struct cell_match
{
  std::string const* name;
  std::vector<unsigned> input_leaf; ///< cell input k is driven by leaf input_leaf[k]
};

/// Index from (leaf count, function) to the cells implementing it, sorted by
/// (cell name, leaf order).
class match_index
{
public:
  match_index( cell_library const& lib, unsigned k )
  {
    for ( auto const& cell : lib.cells() )
    {
      if ( cell.arity == 0 || cell.arity > k )
        continue;
      std::vector<unsigned> perm( cell.arity );
      std::iota( perm.begin(), perm.end(), 0u );
      auto const rows = 1u << cell.arity;
      do
      {
        std::uint16_t tt = 0;
        for ( unsigned r = 0; r < rows; ++r )
        {
          unsigned cell_row = 0;
          for ( unsigned in = 0; in < cell.arity; ++in )
            cell_row |= ( ( r >> perm[in] ) & 1u ) << in;
          if ( cell.table[cell_row] == '1' )
            tt |= static_cast<std::uint16_t>( 1u << r );
        }
        auto& bucket = index_[key( cell.arity, tt )];
        bucket.push_back( { &cell.name, perm } );
      } while ( std::next_permutation( perm.begin(), perm.end() ) );
    }
    for ( auto& [_, bucket] : index_ )
    {
      std::stable_sort( bucket.begin(), bucket.end(), []( auto const& a, auto const& b ) {
        return std::tie( *a.name, a.input_leaf ) < std::tie( *b.name, b.input_leaf );
      } );
    }
  }

  std::vector<cell_match> const* find( std::size_t arity, std::uint16_t tt ) const
  {
    auto it = index_.find( key( arity, tt ) );
    return it == index_.end() ? nullptr : &it->second;
  }

private:
  static std::uint32_t key( std::size_t arity, std::uint16_t tt ) { return static_cast<std::uint32_t>( arity ) << 16 | tt; }
  std::unordered_map<std::uint32_t, std::vector<cell_match>> index_;
};

struct choice
{
  std::uint64_t cost = std::numeric_limits<std::uint64_t>::max();
  cut chosen;
  cell_match match{ nullptr, {} };
};

bool better( choice const& cand, choice const& best )
{
  if ( cand.cost != best.cost )
    return cand.cost < best.cost;
  if ( !best.match.name )
    return true;
  if ( *cand.match.name != *best.match.name )
    return *cand.match.name < *best.match.name;
  std::vector<node_id> lc, lb;
  for ( auto j : cand.match.input_leaf )
    lc.push_back( cand.chosen.leaves[j] );
  for ( auto j : best.match.input_leaf )
    lb.push_back( best.chosen.leaves[j] );
  return lc < lb;
}

} // namespace

mapping_result map_to_cells( aig const& g, cell_library const& lib, unsigned k )
{
  expect_valid( g );
  if ( g.is_pi( g.output() ) )
    throw error( "cannot map a circuit whose output is a primary input" );

  match_index const index( lib, k );
  auto const cuts = enumerate_cuts( g, k );
  auto const order = topo_order( g );
  std::vector<choice> best( g.size() );

  for ( auto v : order )
  {
    if ( g.is_pi( v ) )
    {
      best[v].cost = 0;
      continue;
    }
    for ( auto const& c : cuts[v] )
    {
      if ( c.leaves.size() == 1 && c.leaves[0] == v )
        continue;
      auto const* matches = index.find( c.leaves.size(), cut_function( g, c ) );
      if ( !matches )
        continue;
      std::uint64_t cost = 1;
      for ( auto l : c.leaves )
        cost += best[l].cost;
      for ( auto const& m : *matches )
      {
        choice cand{ cost, c, m };
        if ( better( cand, best[v] ) )
          best[v] = cand;
      }
    }
    if ( !best[v].match.name )
      throw error( fmt::format( "internal error: no library cell covers node {}", v ) );
  }

  std::vector<bool> needed( g.size(), false );
  needed[g.output()] = true;
  for ( auto it = order.rbegin(); it != order.rend(); ++it )
  {
    if ( !needed[*it] || g.is_pi( *it ) )
      continue;
    for ( auto l : best[*it].chosen.leaves )
      needed[l] = true;
  }

  mapping_result result;
  std::vector<pm_signal> signal_of( g.size() );
  for ( auto p : g.pis() )
    signal_of[p] = pm_signal::input( result.pm.num_inputs++ );
  for ( auto v : order )
  {
    if ( !needed[v] || g.is_pi( v ) )
      continue;
    auto const& b = best[v];
    pm_cell cell{ *b.match.name, {} };
    for ( auto j : b.match.input_leaf )
      cell.fanins.push_back( signal_of[b.chosen.leaves[j]] );
    signal_of[v] = pm_signal::cell( static_cast<cell_id>( result.pm.cells.size() ) );
    result.pm.cells.push_back( std::move( cell ) );
    result.coverage.emplace( v, b.chosen );
  }
  result.pm.output = signal_of[g.output()].index;
  return result;
}

std::vector<cell_id> node_map::cells_of( node_id node ) const
{
  std::vector<cell_id> cells;
  auto it = std::lower_bound( phi.begin(), phi.end(), std::pair{ node, cell_id{ 0 } } );
  for ( ; it != phi.end() && it->first == node; ++it )
    cells.push_back( it->second );
  return cells;
}

expansion expand( pm_netlist const& pm, cell_library const& lib )
{
  if ( auto const report = validate( pm, lib ); !report.empty() )
    throw error( "invalid netlist:\n" + format_violations( report ) );

  constexpr auto none = std::numeric_limits<std::uint32_t>::max();
  aig a;
  std::vector<cell_id> owner; // per expanded node; none for PIs
  for ( std::uint32_t i = 0; i < pm.num_inputs; ++i )
  {
    a.add_pi();
    owner.push_back( none );
  }

  std::vector<node_id> out( pm.cells.size() );
  auto const order = topo_order( pm );
  for ( auto c : order )
  {
    auto const& tmpl = lib.at( pm.cells[c].type ).tmpl;
    std::vector<node_id> img( tmpl.size() );
    auto const tpis = tmpl.pis();
    for ( std::size_t k = 0; k < tpis.size(); ++k )
    {
      auto const s = pm.cells[c].fanins[k];
      img[tpis[k]] = s.is_input ? s.index : out[s.index];
    }
    for ( auto t : topo_order( tmpl ) )
    {
      auto const& f = tmpl.fanins( t );
      switch ( tmpl.kind( t ) )
      {
      case node_kind::pi:
        break;
      case node_kind::not_gate:
        if ( a.kind( img[f[0]] ) == node_kind::not_gate )
          img[t] = a.fanins( img[f[0]] )[0];
        else
        {
          img[t] = a.add_not( img[f[0]] );
          owner.push_back( c );
        }
        break;
      case node_kind::and_gate:
        img[t] = a.add_and( img[f[0]], img[f[1]] );
        owner.push_back( c );
        break;
      }
    }
    out[c] = img[tmpl.output()];
  }
  a.set_output( out[pm.output] );

  std::vector<std::optional<node_id>> remap;
  expansion e;
  e.circuit = remove_dead( a, &remap );

  std::vector<bool> covered( pm.cells.size(), false );
  for ( node_id v = 0; v < a.size(); ++v )
  {
    if ( owner[v] != none && remap[v] )
    {
      e.map.phi.emplace_back( *remap[v], owner[v] );
      covered[owner[v]] = true;
    }
  }

  // cells whose nodes all vanished adopt the surviving node driving their
  // output; a driver removed as dead defers to the first consuming cell
  std::vector<std::vector<cell_id>> consumers( pm.cells.size() );
  for ( cell_id c = 0; c < pm.cells.size(); ++c )
  {
    for ( auto const& s : pm.cells[c].fanins )
    {
      if ( !s.is_input )
        consumers[s.index].push_back( c );
    }
  }
  std::vector<std::optional<node_id>> rep( pm.cells.size() );
  for ( auto it = order.rbegin(); it != order.rend(); ++it )
  {
    auto const c = *it;
    if ( remap[out[c]] )
      rep[c] = remap[out[c]];
    else
    {
      for ( auto d : consumers[c] )
      {
        if ( rep[d] )
        {
          rep[c] = rep[d];
          break;
        }
      }
    }
  }
  for ( cell_id c = 0; c < pm.cells.size(); ++c )
  {
    if ( !covered[c] && rep[c] )
      e.map.phi.emplace_back( *rep[c], c );
  }
  std::sort( e.map.phi.begin(), e.map.phi.end() );
  e.map.phi.erase( std::unique( e.map.phi.begin(), e.map.phi.end() ), e.map.phi.end() );

  for ( std::uint32_t i = 0; i < pm.num_inputs; ++i )
    e.map.pi_map.push_back( i );
  return e;
}

std::vector<std::string> check_node_map( expansion const& e, pm_netlist const& pm )
{
  std::vector<std::string> problems;
  auto const& g = e.circuit;
  for ( node_id v = 0; v < g.size(); ++v )
  {
    auto const cells = e.map.cells_of( v );
    if ( !g.is_pi( v ) && cells.empty() )
      problems.push_back( fmt::format( "gate {} has no cell", v ) );
    for ( auto c : cells )
    {
      if ( c >= pm.cells.size() )
        problems.push_back( fmt::format( "node {} maps to missing cell {}", v, c ) );
    }
  }
  std::vector<bool> covered( pm.cells.size(), false );
  for ( auto [v, c] : e.map.phi )
  {
    if ( v >= g.size() )
      problems.push_back( fmt::format( "phi names missing node {}", v ) );
    if ( c < covered.size() )
      covered[c] = true;
  }
  for ( cell_id c = 0; c < pm.cells.size(); ++c )
  {
    if ( !covered[c] )
      problems.push_back( fmt::format( "cell {} is the image of no node", c ) );
  }
  if ( e.map.pi_map.size() != pm.num_inputs )
    problems.push_back( "pi_map does not cover every input" );
  return problems;
}

std::string write_node_map( node_map const& m )
{
  std::string out;
  for ( std::size_t p = 0; p < m.pi_map.size(); ++p )
    out += fmt::format( "pi {} {}\n", p, m.pi_map[p] );
  for ( auto [v, c] : m.phi )
    out += fmt::format( "{} {}\n", v, c );
  return out;
}

node_map parse_node_map( std::string_view text )
{
  node_map m;
  std::istringstream in{ std::string( text ) };
  std::string line;
  std::size_t number = 0;
  while ( std::getline( in, line ) )
  {
    ++number;
    if ( auto const hash = line.find( '#' ); hash != std::string::npos )
      line.resize( hash );
    std::istringstream fields( line );
    std::uint64_t v, c;
    if ( line.rfind( "pi ", 0 ) == 0 )
    {
      std::string keyword, rest;
      fields >> keyword;
      if ( !( fields >> v >> c ) || ( fields >> rest ) || v != m.pi_map.size() )
        throw parse_error( "expected 'pi <index> <input>' in index order", number );
      m.pi_map.push_back( static_cast<std::uint32_t>( c ) );
      continue;
    }
    if ( !( fields >> v ) )
      continue;
    std::string rest;
    if ( !( fields >> c ) || ( fields >> rest ) )
      throw parse_error( "expected '<aig_id> <cell_id>'", number );
    m.phi.emplace_back( static_cast<node_id>( v ), static_cast<cell_id>( c ) );
  }
  std::sort( m.phi.begin(), m.phi.end() );
  return m;
}

} // namespace funsub
