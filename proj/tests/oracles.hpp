#pragma once

/* Reference implementations used only by tests. They share no code with the
   library beyond the graph container. */

#include <funsub/aig.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace oracle
{

using funsub::aig;
using funsub::node_id;
using funsub::node_kind;

/// Output value under one assignment of the PIs (ascending id order).
inline bool eval( aig const& g, std::vector<bool> const& pi_values )
{
  std::map<node_id, std::size_t> pi_index;
  for ( node_id v = 0; v < g.size(); ++v )
  {
    if ( g.kind( v ) == node_kind::pi )
      pi_index.emplace( v, pi_index.size() );
  }
  std::vector<std::optional<bool>> memo( g.size() );
  auto rec = [&]( auto&& self, node_id v ) -> bool {
    if ( memo[v] )
      return *memo[v];
    bool r = false;
    switch ( g.kind( v ) )
    {
    case node_kind::pi:
      r = pi_values[pi_index.at( v )];
      break;
    case node_kind::not_gate:
      r = !self( self, g.fanins( v )[0] );
      break;
    case node_kind::and_gate:
      r = self( self, g.fanins( v )[0] ) && self( self, g.fanins( v )[1] );
      break;
    }
    memo[v] = r;
    return r;
  };
  return rec( rec, g.output() );
}

/// Row r assigns bit k of r to the k-th PI.
inline std::vector<bool> table( aig const& g )
{
  std::size_t n = 0;
  for ( node_id v = 0; v < g.size(); ++v )
    n += g.kind( v ) == node_kind::pi;
  std::vector<bool> rows;
  for ( std::size_t r = 0; r < ( std::size_t{ 1 } << n ); ++r )
  {
    std::vector<bool> values( n );
    for ( std::size_t k = 0; k < n; ++k )
      values[k] = ( r >> k ) & 1;
    rows.push_back( eval( g, values ) );
  }
  return rows;
}

/// Same rows as `table`, packed 64 per word, computed by a word-parallel
/// sweep in depth-first order.
inline std::vector<std::uint64_t> packed_table( aig const& g )
{
  std::vector<node_id> pis;
  for ( node_id v = 0; v < g.size(); ++v )
  {
    if ( g.kind( v ) == node_kind::pi )
      pis.push_back( v );
  }
  std::vector<node_id> order;
  std::vector<int> state( g.size(), 0 );
  std::vector<std::pair<node_id, std::size_t>> stack{ { g.output(), 0 } };
  while ( !stack.empty() )
  {
    auto& [v, next] = stack.back();
    if ( next < g.fanins( v ).size() )
    {
      auto const f = g.fanins( v )[next++];
      if ( state[f] == 0 )
      {
        state[f] = 1;
        stack.push_back( { f, 0 } );
      }
      continue;
    }
    order.push_back( v );
    stack.pop_back();
  }

  std::size_t const rows = std::size_t{ 1 } << pis.size();
  std::size_t const words = ( rows + 63 ) / 64;
  std::vector<std::uint64_t> out( words );
  std::vector<std::uint64_t> value( g.size() );
  for ( std::size_t w = 0; w < words; ++w )
  {
    for ( std::size_t k = 0; k < pis.size(); ++k )
    {
      std::uint64_t word = 0;
      for ( std::size_t b = 0; b < 64; ++b )
      {
        auto const row = w * 64 + b;
        if ( row < rows && ( ( row >> k ) & 1 ) )
          word |= std::uint64_t{ 1 } << b;
      }
      value[pis[k]] = word;
    }
    for ( auto v : order )
    {
      if ( g.kind( v ) == node_kind::and_gate )
        value[v] = value[g.fanins( v )[0]] & value[g.fanins( v )[1]];
      else if ( g.kind( v ) == node_kind::not_gate )
        value[v] = ~value[g.fanins( v )[0]];
    }
    auto word = value[g.output()];
    if ( rows < 64 )
      word &= ( std::uint64_t{ 1 } << rows ) - 1;
    out[w] = word;
  }
  return out;
}

/// True iff some injective map from query nodes to target nodes preserves
/// the kind of every non-PI query node and maps its fanin multiset onto
/// the fanin multiset of its image.
inline bool embeds( aig const& q, aig const& g, bool pis_to_pis = false, bool output_to_output = false )
{
  if ( q.size() > g.size() )
    return false;
  std::vector<node_id> image( q.size() );
  std::vector<bool> used( g.size(), false );

  auto consistent = [&]() {
    for ( node_id v = 0; v < q.size(); ++v )
    {
      auto const t = image[v];
      if ( q.kind( v ) == node_kind::pi )
      {
        if ( pis_to_pis && g.kind( t ) != node_kind::pi )
          return false;
        continue;
      }
      if ( g.kind( t ) != q.kind( v ) )
        return false;
      std::multiset<node_id> want, have;
      for ( auto f : q.fanins( v ) )
        want.insert( image[f] );
      for ( auto f : g.fanins( t ) )
        have.insert( f );
      if ( want != have )
        return false;
    }
    if ( output_to_output && image[q.output()] != g.output() )
      return false;
    return true;
  };

  auto rec = [&]( auto&& self, node_id v ) -> bool {
    if ( v == q.size() )
      return consistent();
    for ( node_id t = 0; t < g.size(); ++t )
    {
      if ( used[t] )
        continue;
      used[t] = true;
      image[v] = t;
      if ( self( self, v + 1 ) )
        return true;
      used[t] = false;
    }
    return false;
  };
  return rec( rec, 0 );
}

inline bool isomorphic( aig const& a, aig const& b )
{
  return a.size() == b.size() && a.num_edges() == b.num_edges() && embeds( a, b, true, true );
}

/// Nodes with no path to the output.
inline std::size_t dead_count( aig const& g )
{
  std::vector<bool> seen( g.size(), false );
  std::vector<node_id> stack{ g.output() };
  while ( !stack.empty() )
  {
    auto v = stack.back();
    stack.pop_back();
    if ( seen[v] )
      continue;
    seen[v] = true;
    for ( auto f : g.fanins( v ) )
      stack.push_back( f );
  }
  std::size_t dead = 0;
  for ( node_id v = 0; v < g.size(); ++v )
    dead += !seen[v] && g.kind( v ) != node_kind::pi;
  return dead;
}

inline bool has_not_not( aig const& g )
{
  for ( node_id v = 0; v < g.size(); ++v )
  {
    if ( g.kind( v ) == node_kind::not_gate && g.kind( g.fanins( v )[0] ) == node_kind::not_gate )
      return true;
  }
  return false;
}

} // namespace oracle
