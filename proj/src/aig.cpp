#include <funsub/aig.hpp>

#include <algorithm>

namespace funsub
{

std::string_view to_string( node_kind kind ) noexcept
{
  switch ( kind )
  {
  case node_kind::pi:
    return "pi";
  case node_kind::and_gate:
    return "and";
  case node_kind::not_gate:
    return "not";
  }
  return "?";
}

std::optional<node_kind> parse_node_kind( std::string_view keyword ) noexcept
{
  if ( keyword == "pi" )
    return node_kind::pi;
  if ( keyword == "and" )
    return node_kind::and_gate;
  if ( keyword == "not" )
    return node_kind::not_gate;
  return std::nullopt;
}

node_id aig::add_pi()
{
  return add_node( node_kind::pi, {} );
}

node_id aig::add_and( node_id a, node_id b )
{
  return add_node( node_kind::and_gate, { a, b } );
}

node_id aig::add_not( node_id a )
{
  return add_node( node_kind::not_gate, { a } );
}

node_id aig::add_node( node_kind kind, std::vector<node_id> fanins )
{
  nodes_.push_back( node{ kind, std::move( fanins ) } );
  return static_cast<node_id>( nodes_.size() - 1 );
}

std::vector<node_id> aig::pis() const
{
  std::vector<node_id> result;
  for ( node_id i = 0; i < nodes_.size(); ++i )
  {
    if ( nodes_[i].kind == node_kind::pi )
      result.push_back( i );
  }
  return result;
}

std::size_t aig::num_pis() const
{
  return count( node_kind::pi );
}

std::size_t aig::count( node_kind kind ) const
{
  return std::count_if( nodes_.begin(), nodes_.end(), [kind]( auto const& n ) { return n.kind == kind; } );
}

std::size_t aig::num_edges() const
{
  std::size_t edges = 0;
  for ( auto const& n : nodes_ )
    edges += n.fanins.size();
  return edges;
}

std::vector<std::vector<node_id>> aig::fanouts() const
{
  std::vector<std::vector<node_id>> result( nodes_.size() );
  for ( node_id i = 0; i < nodes_.size(); ++i )
  {
    for ( auto f : nodes_[i].fanins )
    {
      if ( f < nodes_.size() )
        result[f].push_back( i );
    }
  }
  return result;
}

namespace
{

constexpr std::uint64_t and_key( node_id a, node_id b )
{
  if ( a > b )
    std::swap( a, b );
  return ( std::uint64_t{ a } << 32 | b ) << 1;
}

constexpr std::uint64_t not_key( node_id a )
{
  return ( std::uint64_t{ a } << 1 ) | 1u;
}

} // namespace

std::optional<node_id> aig_builder::lookup( std::uint64_t key ) const
{
  auto it = std::lower_bound( table_.begin(), table_.end(), std::pair{ key, node_id{ 0 } } );
  if ( it != table_.end() && it->first == key )
    return it->second;
  return std::nullopt;
}

void aig_builder::remember( std::uint64_t key, node_id id )
{
  auto it = std::lower_bound( table_.begin(), table_.end(), std::pair{ key, node_id{ 0 } } );
  table_.insert( it, { key, id } );
}

node_id aig_builder::make_and( node_id a, node_id b )
{
  if ( !strash_ )
    return g_.add_and( a, b );
  auto const key = and_key( a, b );
  if ( auto hit = lookup( key ) )
    return *hit;
  auto const id = g_.add_and( a, b );
  remember( key, id );
  return id;
}

node_id aig_builder::make_not( node_id a )
{
  if ( g_.kind( a ) == node_kind::not_gate )
    return g_.fanins( a )[0];
  if ( !strash_ )
    return g_.add_not( a );
  auto const key = not_key( a );
  if ( auto hit = lookup( key ) )
    return *hit;
  auto const id = g_.add_not( a );
  remember( key, id );
  return id;
}

aig aig_builder::finish( node_id output, std::vector<std::optional<node_id>>* remap ) const
{
  aig g = g_;
  g.set_output( output );
  return remove_dead( g, remap );
}

aig remove_dead( aig const& g, std::vector<std::optional<node_id>>* remap, bool keep_pis )
{
  auto const n = g.size();
  std::vector<bool> live( n, false );
  if ( g.has_output() && g.output() < n )
  {
    std::vector<node_id> stack{ g.output() };
    live[g.output()] = true;
    while ( !stack.empty() )
    {
      auto const v = stack.back();
      stack.pop_back();
      for ( auto f : g.fanins( v ) )
      {
        if ( f < n && !live[f] )
        {
          live[f] = true;
          stack.push_back( f );
        }
      }
    }
  }

  std::vector<std::optional<node_id>> map( n );
  node_id next = 0;
  for ( node_id i = 0; i < n; ++i )
  {
    if ( live[i] || ( keep_pis && g.is_pi( i ) ) )
      map[i] = next++;
  }
  aig result;
  for ( node_id i = 0; i < n; ++i )
  {
    if ( !map[i] )
      continue;
    std::vector<node_id> fanins;
    fanins.reserve( g.fanins( i ).size() );
    for ( auto f : g.fanins( i ) )
      fanins.push_back( map[f].value() );
    result.add_node( g.kind( i ), std::move( fanins ) );
  }
  if ( g.has_output() && g.output() < n )
    result.set_output( *map[g.output()] );
  if ( remap )
    *remap = std::move( map );
  return result;
}

aig permute_ids( aig const& g, std::vector<node_id> const& perm )
{
  std::vector<node> nodes( g.size() );
  for ( node_id i = 0; i < g.size(); ++i )
  {
    node n = g.at( i );
    for ( auto& f : n.fanins )
      f = perm[f];
    nodes[perm[i]] = std::move( n );
  }
  aig result;
  for ( auto& n : nodes )
    result.add_node( n.kind, std::move( n.fanins ) );
  if ( g.has_output() )
    result.set_output( perm[g.output()] );
  return result;
}

} // namespace funsub
