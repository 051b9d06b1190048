#include <funsub/random_aig.hpp>

#include <funsub/error.hpp>
#include <funsub/random.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <set>

namespace funsub
{

namespace
{

class generator
{
public:
  generator( random_aig_params const& p, std::uint64_t seed ) : p_( p ), rng_( seed ) {}

  aig run()
  {
    auto const pis = static_cast<unsigned>( rng_.between( p_.pis_min, p_.pis_max ) );
    auto const lo = std::max( p_.nodes_min, pis + 1 );
    auto const target = static_cast<unsigned>( rng_.between( lo, std::max( lo, p_.nodes_max ) ) );
    for ( unsigned i = 0; i < pis; ++i )
      add( g_.add_pi() );

    // leave room for the merge tree over the nodes that are still unused
    for ( unsigned stalls = 0; g_.size() + dangling_.size() < target && stalls < 1000; )
    {
      auto const before = g_.size();
      if ( rng_.coin( p_.not_probability ) && try_not() )
        continue;
      try_and();
      stalls = g_.size() == before ? stalls + 1 : 0;
    }
    while ( dangling_.size() > 1 )
    {
      auto x = take_dangling();
      auto y = take_dangling();
      if ( g_.kind( x ) != node_kind::not_gate && rng_.coin( p_.not_probability ) )
        x = complement( x );
      link( g_.add_and( x, y ), x, y );
    }
    auto out = dangling_.front();
    if ( rng_.coin( p_.not_probability ) && g_.kind( out ) != node_kind::not_gate )
      out = complement( out );
    g_.set_output( out );
    return g_;
  }

private:
  void add( node_id v )
  {
    fanout_.push_back( 0 );
    negation_.push_back( std::nullopt );
    dangling_.push_back( v );
  }

  void use( node_id v )
  {
    if ( fanout_[v]++ == 0 )
      dangling_.erase( std::find( dangling_.begin(), dangling_.end(), v ) );
  }

  void link( node_id created, node_id a, node_id b )
  {
    use( a );
    use( b );
    add( created );
    pairs_.insert( std::minmax( a, b ) );
  }

  node_id take_dangling()
  {
    auto const i = rng_.below( dangling_.size() );
    auto const v = dangling_[i];
    dangling_.erase( dangling_.begin() + static_cast<std::ptrdiff_t>( i ) );
    fanout_[v] = std::max( fanout_[v], 1u ); // reserved for the merge AND
    return v;
  }

  /// New NOT of an unused non-NOT node.
  node_id complement( node_id v )
  {
    auto const n = g_.add_not( v );
    ++fanout_[v];
    fanout_.push_back( 1 ); // consumed by the caller
    negation_.push_back( std::nullopt );
    negation_[v] = n;
    return n;
  }

  bool complementary( node_id a, node_id b ) const
  {
    auto const neg = [this]( node_id x, node_id y ) { return g_.kind( x ) == node_kind::not_gate && g_.fanins( x )[0] == y; };
    return neg( a, b ) || neg( b, a );
  }

  node_id pick()
  {
    if ( !dangling_.empty() && rng_.coin( p_.dangling_bias ) )
      return dangling_[rng_.below( dangling_.size() )];
    auto const n = g_.size();
    if ( rng_.coin( 0.5 ) )
    {
      auto const window = std::min<std::size_t>( n, 16 );
      return static_cast<node_id>( n - 1 - rng_.below( window ) );
    }
    return static_cast<node_id>( rng_.below( n ) );
  }

  bool try_not()
  {
    for ( int attempt = 0; attempt < 8; ++attempt )
    {
      auto const v = pick();
      if ( g_.kind( v ) == node_kind::not_gate || negation_[v] )
        continue;
      auto const n = g_.add_not( v );
      use( v );
      add( n );
      negation_[v] = n;
      return true;
    }
    return false;
  }

  bool try_and()
  {
    for ( int attempt = 0; attempt < 16; ++attempt )
    {
      auto const a = pick();
      auto const b = pick();
      if ( a == b || complementary( a, b ) || pairs_.count( std::minmax( a, b ) ) )
        continue;
      link( g_.add_and( a, b ), a, b );
      return true;
    }
    return false;
  }

  random_aig_params p_;
  splitmix64 rng_;
  aig g_;
  std::vector<unsigned> fanout_;
  std::vector<std::optional<node_id>> negation_;
  std::vector<node_id> dangling_;
  std::set<std::pair<node_id, node_id>> pairs_;
};

} // namespace

aig random_aig( random_aig_params const& params, std::uint64_t seed )
{
  if ( params.pis_min < 2 || params.pis_min > params.pis_max )
    throw error( fmt::format( "bad PI range {}..{}", params.pis_min, params.pis_max ) );
  if ( params.nodes_min > params.nodes_max || params.nodes_max < params.pis_max + 1 )
    throw error( fmt::format( "bad node range {}..{}", params.nodes_min, params.nodes_max ) );
  for ( std::uint64_t attempt = 0;; ++attempt )
  {
    auto g = generator( params, derive_seed( seed, attempt ) ).run();
    if ( g.size() >= params.nodes_min && g.size() <= params.nodes_max )
      return g;
  }
}

} // namespace funsub
