#include <doctest.h>

#include <funsub/iso_match.hpp>
#include <funsub/random.hpp>
#include <funsub/random_aig.hpp>
#include <funsub/sampler.hpp>

#include "oracles.hpp"

#include <numeric>

using namespace funsub;

namespace
{

aig and_of_nots()
{
  aig g;
  auto a = g.add_pi();
  auto b = g.add_pi();
  g.set_output( g.add_and( g.add_not( a ), b ) );
  return g;
}

} // namespace

TEST_CASE( "reflexive embedding" )
{
  for ( std::uint64_t s = 0; s < 30; ++s )
  {
    auto const g = random_aig( {}, s );
    auto const m = find_embedding( g, g );
    REQUIRE( m );
    CHECK( verify_embedding( g, g, *m ) );
    CHECK( is_isomorphic( g, g ) );
  }
}

TEST_CASE( "commuted AND fanins still match" )
{
  aig a;
  auto x = a.add_pi();
  auto y = a.add_pi();
  a.set_output( a.add_and( x, y ) );
  aig b;
  auto u = b.add_pi();
  auto v = b.add_pi();
  b.set_output( b.add_and( v, u ) );
  CHECK( is_isomorphic( a, b ) );
  CHECK( find_embedding( a, b ) );
}

TEST_CASE( "kind mismatch and size rejects" )
{
  auto const q = and_of_nots();
  aig g;
  auto a = g.add_pi();
  auto b = g.add_pi();
  g.set_output( g.add_and( a, b ) );
  CHECK_FALSE( find_embedding( q, g ) );
  CHECK_FALSE( is_isomorphic( q, g ) );
}

TEST_CASE( "query PIs map onto internal nodes" )
{
  aig q;
  auto p = q.add_pi();
  q.set_output( q.add_not( p ) );
  auto const g = and_of_nots();
  auto const m = find_embedding( q, g );
  REQUIRE( m );
  CHECK( verify_embedding( q, g, *m ) );
}

TEST_CASE( "relabeled circuits are isomorphic" )
{
  for ( std::uint64_t s = 0; s < 30; ++s )
  {
    auto const g = random_aig( {}, s );
    std::vector<node_id> perm( g.size() );
    std::iota( perm.begin(), perm.end(), node_id{ 0 } );
    splitmix64 rng( s );
    rng.shuffle( std::span<node_id>( perm ) );
    auto const p = permute_ids( g, perm );
    CHECK( is_isomorphic( g, p ) );
    auto const m = find_embedding( g, p );
    REQUIRE( m );
    CHECK( verify_embedding( g, p, *m ) );
  }
}

TEST_CASE( "budget aborts" )
{
  auto const g = random_aig( {}, 5 );
  match_options o;
  o.max_steps = 1;
  CHECK( match( g, g, o ).status == match_status::aborted );
  o.max_steps = 0;
  CHECK( match( g, g, o ).status == match_status::found );
}

TEST_CASE( "search agrees with exhaustive enumeration on small graphs" )
{
  random_aig_params small{ 2, 4, 3, 8, 0.3, 0.5 };
  for ( std::uint64_t s = 0; s < 150; ++s )
  {
    auto const g = random_aig( small, derive_seed( s, 0 ) );
    aig q;
    if ( s % 2 == 0 && g.size() >= 2 )
      q = sample_with_retry( g, s ).circuit;
    else
      q = random_aig( small, derive_seed( s, 1 ) );
    INFO( "seed " << s );
    auto const m = find_embedding( q, g );
    CHECK( m.has_value() == oracle::embeds( q, g ) );
    if ( m )
      CHECK( verify_embedding( q, g, *m ) );
    CHECK( is_isomorphic( q, g ) == oracle::isomorphic( q, g ) );
  }
}
