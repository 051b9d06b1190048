#include <funsub/validate.hpp>

#include <funsub/error.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <queue>

namespace funsub
{

namespace
{

/// Kahn's algorithm over an adjacency given as fanin lists; returns the
/// ordered prefix that could be scheduled (shorter than n on a cycle).
template<typename FaninsOf>
std::vector<std::uint32_t> kahn( std::uint32_t n, FaninsOf&& fanins_of )
{
  std::vector<std::uint32_t> pending( n, 0 );
  std::vector<std::vector<std::uint32_t>> fanouts( n );
  for ( std::uint32_t v = 0; v < n; ++v )
  {
    fanins_of( v, [&]( std::uint32_t f ) {
      ++pending[v];
      fanouts[f].push_back( v );
    } );
  }
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
  for ( std::uint32_t v = 0; v < n; ++v )
  {
    if ( pending[v] == 0 )
      ready.push( v );
  }
  std::vector<std::uint32_t> order;
  order.reserve( n );
  while ( !ready.empty() )
  {
    auto const v = ready.top();
    ready.pop();
    order.push_back( v );
    for ( auto w : fanouts[v] )
    {
      if ( --pending[w] == 0 )
        ready.push( w );
    }
  }
  return order;
}

template<typename FaninsOf>
std::vector<bool> reaches_root( std::uint32_t n, std::uint32_t root, FaninsOf&& fanins_of )
{
  std::vector<bool> seen( n, false );
  std::vector<std::uint32_t> stack{ root };
  seen[root] = true;
  while ( !stack.empty() )
  {
    auto const v = stack.back();
    stack.pop_back();
    fanins_of( v, [&]( std::uint32_t f ) {
      if ( !seen[f] )
      {
        seen[f] = true;
        stack.push_back( f );
      }
    } );
  }
  return seen;
}

} // namespace

std::vector<violation> validate( aig const& g )
{
  std::vector<violation> report;
  auto const n = static_cast<node_id>( g.size() );
  if ( n == 0 )
  {
    report.push_back( { std::nullopt, rules::empty, "graph has no nodes" } );
    return report;
  }

  for ( node_id v = 0; v < n; ++v )
  {
    auto const& nd = g.at( v );
    if ( nd.fanins.size() != arity( nd.kind ) )
    {
      report.push_back( { v, rules::arity,
                          fmt::format( "{} node has {} fanins, expected {}", to_string( nd.kind ), nd.fanins.size(), arity( nd.kind ) ) } );
    }
    for ( auto f : nd.fanins )
    {
      if ( f >= n )
        report.push_back( { v, rules::bad_fanin, fmt::format( "fanin {} does not exist", f ) } );
    }
    if ( nd.kind == node_kind::not_gate && nd.fanins.size() == 1 && nd.fanins[0] < n &&
         g.kind( nd.fanins[0] ) == node_kind::not_gate )
    {
      report.push_back( { v, rules::not_not, fmt::format( "NOT {} is driven by NOT {}", v, nd.fanins[0] ) } );
    }
  }

  auto const valid_fanins = [&]( std::uint32_t v, auto&& visit ) {
    for ( auto f : g.fanins( v ) )
    {
      if ( f < n )
        visit( f );
    }
  };

  auto const order = kahn( n, valid_fanins );
  if ( order.size() != n )
  {
    std::vector<bool> placed( n, false );
    for ( auto v : order )
      placed[v] = true;
    auto const first = static_cast<node_id>( std::find( placed.begin(), placed.end(), false ) - placed.begin() );
    report.push_back( { first, rules::cycle, fmt::format( "{} nodes lie on or behind a cycle", n - order.size() ) } );
  }

  if ( !g.has_output() )
  {
    report.push_back( { std::nullopt, rules::no_output, "no output designated" } );
    return report;
  }
  if ( g.output() >= n )
  {
    report.push_back( { g.output(), rules::no_output, "output refers to a missing node" } );
    return report;
  }

  auto const live = reaches_root( n, g.output(), valid_fanins );
  for ( node_id v = 0; v < n; ++v )
  {
    if ( !live[v] )
      report.push_back( { v, rules::dead_logic, fmt::format( "{} node {} does not reach the output", to_string( g.kind( v ) ), v ) } );
  }
  return report;
}

std::vector<violation> validate( pm_netlist const& pm, cell_library const& lib )
{
  std::vector<violation> report;
  auto const n = static_cast<cell_id>( pm.cells.size() );
  if ( n == 0 )
  {
    report.push_back( { std::nullopt, rules::empty, "netlist has no cells" } );
    return report;
  }

  for ( cell_id c = 0; c < n; ++c )
  {
    auto const& cell = pm.cells[c];
    auto const* type = lib.find( cell.type );
    if ( !type )
      report.push_back( { c, rules::unknown_cell, fmt::format( "cell type '{}' is not in the library", cell.type ) } );
    else if ( cell.fanins.size() != type->arity )
      report.push_back( { c, rules::arity, fmt::format( "{} has {} fanins, expected {}", cell.type, cell.fanins.size(), type->arity ) } );
    for ( auto const& s : cell.fanins )
    {
      if ( ( s.is_input && s.index >= pm.num_inputs ) || ( !s.is_input && s.index >= n ) )
        report.push_back( { c, rules::bad_fanin, fmt::format( "fanin {}{} does not exist", s.is_input ? 'i' : 'c', s.index ) } );
    }
  }

  auto const cell_fanins = [&]( std::uint32_t c, auto&& visit ) {
    for ( auto const& s : pm.cells[c].fanins )
    {
      if ( !s.is_input && s.index < n )
        visit( s.index );
    }
  };
  auto const order = kahn( n, cell_fanins );
  if ( order.size() != n )
    report.push_back( { std::nullopt, rules::cycle, fmt::format( "{} cells lie on or behind a cycle", n - order.size() ) } );

  if ( pm.output >= n )
  {
    report.push_back( { pm.output, rules::no_output, "output refers to a missing cell" } );
    return report;
  }

  auto const live = reaches_root( n, pm.output, cell_fanins );
  std::vector<bool> input_used( pm.num_inputs, false );
  for ( cell_id c = 0; c < n; ++c )
  {
    if ( !live[c] )
    {
      report.push_back( { c, rules::dead_logic, fmt::format( "cell {} does not reach the output", c ) } );
      continue;
    }
    for ( auto const& s : pm.cells[c].fanins )
    {
      if ( s.is_input && s.index < pm.num_inputs )
        input_used[s.index] = true;
    }
  }
  for ( std::uint32_t i = 0; i < pm.num_inputs; ++i )
  {
    if ( !input_used[i] )
      report.push_back( { std::nullopt, rules::dead_input, fmt::format( "input {} drives no live cell", i ) } );
  }
  return report;
}

std::string format_violations( std::vector<violation> const& report )
{
  std::string text;
  for ( auto const& v : report )
  {
    if ( !text.empty() )
      text += '\n';
    if ( v.node )
      text += fmt::format( "node {}: {}: {}", *v.node, v.rule, v.detail );
    else
      text += fmt::format( "{}: {}", v.rule, v.detail );
  }
  return text;
}

void expect_valid( aig const& g, std::string_view what )
{
  auto const report = validate( g );
  if ( !report.empty() )
    throw error( fmt::format( "invalid {}:\n{}", what, format_violations( report ) ) );
}

std::vector<node_id> topo_order( aig const& g )
{
  auto const n = static_cast<node_id>( g.size() );
  auto order = kahn( n, [&]( std::uint32_t v, auto&& visit ) {
    for ( auto f : g.fanins( v ) )
    {
      if ( f >= n )
        throw error( fmt::format( "node {}: fanin {} does not exist", v, f ) );
      visit( f );
    }
  } );
  if ( order.size() != n )
    throw error( "not a DAG" );
  return order;
}

std::vector<std::uint32_t> levels( aig const& g )
{
  std::vector<std::uint32_t> level( g.size(), 0 );
  for ( auto v : topo_order( g ) )
  {
    for ( auto f : g.fanins( v ) )
      level[v] = std::max( level[v], level[f] + 1 );
  }
  return level;
}

std::uint32_t depth( aig const& g )
{
  if ( g.empty() )
    return 0;
  auto const level = levels( g );
  return *std::max_element( level.begin(), level.end() );
}

std::vector<cell_id> topo_order( pm_netlist const& pm )
{
  auto const n = static_cast<cell_id>( pm.cells.size() );
  auto order = kahn( n, [&]( std::uint32_t c, auto&& visit ) {
    for ( auto const& s : pm.cells[c].fanins )
    {
      if ( !s.is_input )
        visit( s.index );
    }
  } );
  if ( order.size() != n )
    throw error( "not a DAG" );
  return order;
}

std::uint32_t depth( pm_netlist const& pm )
{
  std::vector<std::uint32_t> level( pm.cells.size(), 0 );
  std::uint32_t deepest = 0;
  for ( auto c : topo_order( pm ) )
  {
    std::uint32_t l = 1;
    for ( auto const& s : pm.cells[c].fanins )
    {
      if ( !s.is_input )
        l = std::max( l, level[s.index] + 1 );
    }
    level[c] = l;
    deepest = std::max( deepest, l );
  }
  return deepest;
}

} // namespace funsub
