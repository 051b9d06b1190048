#include <funsub/sampler.hpp>

#include <funsub/error.hpp>
#include <funsub/random.hpp>
#include <funsub/validate.hpp>

#include <fmt/format.h>

#include <bit>
#include <deque>
#include <limits>

namespace funsub
{

void sample_params::check() const
{
  if ( !( 0 < rho_min && rho_min <= rho_max && rho_max <= 1 ) )
    throw error( fmt::format( "need 0 < rho_min <= rho_max <= 1, got [{}, {}]", rho_min, rho_max ) );
  if ( k_min > k_max )
    throw error( fmt::format( "need k_min <= k_max, got {}..{}", k_min, k_max ) );
}

std::vector<std::size_t> fanin_cone_sizes( aig const& g )
{
  auto const n = g.size();
  auto const words = ( n + 63 ) / 64;
  std::vector<std::vector<std::uint64_t>> cone( n, std::vector<std::uint64_t>( words, 0 ) );
  std::vector<std::size_t> sizes( n, 0 );
  for ( auto v : topo_order( g ) )
  {
    for ( auto f : g.fanins( v ) )
    {
      for ( std::size_t w = 0; w < words; ++w )
        cone[v][w] |= cone[f][w];
      cone[v][f / 64] |= std::uint64_t{ 1 } << ( f % 64 );
    }
    for ( auto w : cone[v] )
      sizes[v] += std::popcount( w );
  }
  return sizes;
}

namespace
{

/// Builds the circuit induced by `member` nodes rooted at `root`; fanins
/// outside the member set become fresh PIs.
sampled_subgraph induce( aig const& g, std::vector<bool> const& member, node_id root )
{
  constexpr auto none = std::numeric_limits<node_id>::max();
  std::vector<bool> needed_as_pi( g.size(), false );
  for ( node_id v = 0; v < g.size(); ++v )
  {
    if ( !member[v] )
      continue;
    for ( auto f : g.fanins( v ) )
    {
      if ( !member[f] )
        needed_as_pi[f] = true;
    }
  }

  aig_builder b;
  std::vector<node_id> img( g.size(), none );
  std::vector<node_id> source;
  std::vector<bool> fresh;
  auto const record = [&]( node_id built, node_id src, bool is_fresh ) {
    if ( built == source.size() )
    {
      source.push_back( src );
      fresh.push_back( is_fresh );
    }
  };
  for ( auto v : topo_order( g ) )
  {
    if ( needed_as_pi[v] )
    {
      img[v] = b.make_pi();
      record( img[v], v, true );
      continue;
    }
    if ( !member[v] )
      continue;
    auto const& f = g.fanins( v );
    switch ( g.kind( v ) )
    {
    case node_kind::pi:
      img[v] = b.make_pi();
      break;
    case node_kind::not_gate:
      img[v] = b.make_not( img[f[0]] );
      break;
    case node_kind::and_gate:
      img[v] = b.make_and( img[f[0]], img[f[1]] );
      break;
    }
    record( img[v], v, false );
  }

  std::vector<std::optional<node_id>> remap;
  sampled_subgraph s;
  s.root = root;
  s.circuit = b.finish( img[root], &remap );
  // fresh PIs that no longer feed anything are dropped as well
  if ( auto const report = validate( s.circuit ); !report.empty() )
  {
    std::vector<std::optional<node_id>> second;
    s.circuit = remove_dead( s.circuit, &second, false );
    for ( auto& r : remap )
    {
      if ( r )
        r = second[*r];
    }
  }
  s.source.assign( s.circuit.size(), none );
  s.fresh.assign( s.circuit.size(), false );
  for ( std::size_t i = 0; i < remap.size(); ++i )
  {
    if ( remap[i] )
    {
      s.source[*remap[i]] = source[i];
      s.fresh[*remap[i]] = fresh[i];
    }
  }
  return s;
}

} // namespace

sampled_subgraph sample_subgraph_detailed( aig const& g, std::uint64_t seed, sample_params const& params )
{
  params.check();
  expect_valid( g );
  splitmix64 rng( seed );

  node_id root = g.output();
  if ( rng.coin( 0.5 ) && !g.is_pi( root ) )
  {
    auto const cone = fanin_cone_sizes( g );
    std::optional<node_id> best;
    for ( auto p : g.fanins( root ) )
    {
      if ( !best || cone[p] > cone[*best] || ( cone[p] == cone[*best] && p < *best ) )
        best = p;
    }
    if ( best && cone[*best] > 0 )
      root = *best;
  }

  auto const rho = rng.uniform( params.rho_min, params.rho_max );
  auto const threshold = rho * static_cast<double>( g.size() );

  std::vector<bool> member( g.size(), false );
  std::size_t count = 1;
  member[root] = true;
  std::deque<node_id> queue{ root };
  while ( !queue.empty() && static_cast<double>( count ) < threshold )
  {
    auto const n = queue.front();
    queue.pop_front();
    auto next = g.fanins( n );
    rng.shuffle( std::span<node_id>( next ) );
    for ( auto v : next )
    {
      if ( !member[v] )
      {
        member[v] = true;
        ++count;
        queue.push_back( v );
      }
    }
  }

  auto s = induce( g, member, root );
  s.rho = rho;
  if ( s.circuit.size() < 2 )
    throw degenerate_sample( fmt::format( "degenerate sample: {} node(s) remain", s.circuit.size() ) );
  return s;
}

aig sample_subgraph( aig const& g, std::uint64_t seed, sample_params const& params )
{
  return sample_subgraph_detailed( g, seed, params ).circuit;
}

sampled_subgraph sample_with_retry( aig const& g, std::uint64_t seed, sample_params const& params, int max_attempts )
{
  for ( int attempt = 0; attempt < max_attempts; ++attempt )
  {
    try
    {
      return sample_subgraph_detailed( g, attempt == 0 ? seed : derive_seed( seed, static_cast<std::uint64_t>( attempt ) ), params );
    }
    catch ( degenerate_sample const& )
    {
    }
  }
  throw degenerate_sample( fmt::format( "degenerate sample after {} attempts", max_attempts ) );
}

std::vector<aig> partition_khop( aig const& g, sample_params const& params )
{
  params.check();
  expect_valid( g );
  if ( g.is_pi( g.output() ) )
    return { g };

  splitmix64 rng( params.seed );
  auto const fanouts = g.fanouts();
  std::vector<bool> covered( g.size(), false );
  std::vector<aig> cones;

  std::optional<node_id> next_root = g.output();
  while ( next_root )
  {
    auto const root = *next_root;
    auto const k = static_cast<unsigned>( rng.between( params.k_min, params.k_max ) );

    std::vector<unsigned> dist( g.size(), std::numeric_limits<unsigned>::max() );
    std::vector<bool> member( g.size(), false );
    std::deque<node_id> queue{ root };
    dist[root] = 0;
    member[root] = true;
    while ( !queue.empty() )
    {
      auto const v = queue.front();
      queue.pop_front();
      if ( dist[v] == k )
        continue;
      for ( auto f : g.fanins( v ) )
      {
        if ( dist[f] == std::numeric_limits<unsigned>::max() )
        {
          dist[f] = dist[v] + 1;
          member[f] = true;
          queue.push_back( f );
        }
      }
    }
    for ( node_id v = 0; v < g.size(); ++v )
    {
      if ( member[v] && !g.is_pi( v ) )
        covered[v] = true;
    }
    cones.push_back( induce( g, member, root ).circuit );

    std::vector<node_id> frontier;
    for ( node_id v = 0; v < g.size(); ++v )
    {
      if ( covered[v] || g.is_pi( v ) )
        continue;
      bool const ready = std::all_of( fanouts[v].begin(), fanouts[v].end(), [&]( node_id w ) { return covered[w]; } );
      if ( ready )
        frontier.push_back( v );
    }
    next_root.reset();
    if ( !frontier.empty() )
      next_root = frontier[rng.below( frontier.size() )];
  }
  return cones;
}

} // namespace funsub
