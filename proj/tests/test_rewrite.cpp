#include <doctest.h>

#include <funsub/error.hpp>
#include <funsub/iso_match.hpp>
#include <funsub/random_aig.hpp>
#include <funsub/rewrite.hpp>
#include <funsub/simulate.hpp>
#include <funsub/validate.hpp>

#include "oracles.hpp"

using namespace funsub;

namespace
{

constexpr pass_kind all_passes[] = { pass_kind::strash, pass_kind::balance, pass_kind::factor,
                                     pass_kind::unfactor, pass_kind::demorgan_push, pass_kind::reassociate };

} // namespace

TEST_CASE( "pass names round trip" )
{
  for ( auto k : all_passes )
    CHECK( parse_pass_kind( to_string( k ) ) == k );
  CHECK_FALSE( parse_pass_kind( "bogus" ) );
}

TEST_CASE( "every pass preserves function and invariants" )
{
  for ( std::uint64_t s = 0; s < 60; ++s )
  {
    auto const g = random_aig( {}, s );
    auto const want = oracle::table( g );
    for ( auto k : all_passes )
    {
      for ( double fraction : { 0.1, 1.0 } )
      {
        INFO( "seed " << s << " pass " << to_string( k ) );
        auto const r = apply_pass( g, { k, fraction }, s );
        REQUIRE( validate( r ).empty() );
        CHECK( r.num_pis() == g.num_pis() );
        CHECK( oracle::table( r ) == want );
      }
    }
  }
}

TEST_CASE( "rewrites produce the documented shapes" )
{
  SUBCASE( "unfactor" )
  {
    aig g;
    auto a = g.add_pi();
    auto b = g.add_pi();
    auto c = g.add_pi();
    g.set_output( g.add_and( a, g.add_not( g.add_and( b, c ) ) ) );
    CHECK( count_sites( g, pass_kind::unfactor ) == 1 );
    auto const r = apply_pass( g, { pass_kind::unfactor, 1.0 }, 0 );
    CHECK( oracle::table( r ) == oracle::table( g ) );
    CHECK_FALSE( is_isomorphic( r, g ) );
  }
  SUBCASE( "factor" )
  {
    aig g;
    auto a = g.add_pi();
    auto b = g.add_pi();
    auto c = g.add_pi();
    auto ab = g.add_and( a, b );
    auto ac = g.add_and( a, c );
    g.set_output( g.add_not( g.add_and( g.add_not( ab ), g.add_not( ac ) ) ) );
    CHECK( count_sites( g, pass_kind::factor ) == 1 );
    auto const r = apply_pass( g, { pass_kind::factor, 1.0 }, 0 );
    CHECK( oracle::table( r ) == oracle::table( g ) );
    CHECK( r.count( node_kind::and_gate ) < g.count( node_kind::and_gate ) );
  }
  SUBCASE( "balance" )
  {
    aig g;
    auto acc = g.add_pi();
    for ( int i = 0; i < 7; ++i )
      acc = g.add_and( acc, g.add_pi() );
    g.set_output( acc );
    auto const r = apply_pass( g, { pass_kind::balance, 1.0 }, 0 );
    CHECK( depth( r ) == 3 );
    CHECK( oracle::table( r ) == oracle::table( g ) );
  }
}

TEST_CASE( "named flows" )
{
  CHECK( flow_names().size() == 5 );
  CHECK_THROWS_AS( named_flow( "nope", 0 ), error );
  for ( std::uint64_t s = 0; s < 20; ++s )
  {
    auto const g = random_aig( {}, s );
    for ( auto name : flow_names() )
    {
      auto const r = apply_flow( g, named_flow( name, s ) );
      CHECK( validate( r ).empty() );
      CHECK( oracle::table( r ) == oracle::table( g ) );
      CHECK_FALSE( is_isomorphic( r, g ) );
      CHECK( apply_flow( g, named_flow( name, s ) ) == r );
    }
  }
}

TEST_CASE( "a circuit with nothing to rewrite cannot be restructured" )
{
  aig g;
  g.set_output( g.add_pi() );
  CHECK_THROWS_WITH_AS( apply_flow( g, named_flow( "src_rw", 1 ) ), doctest::Contains( "cannot restructure" ),
                        restructure_error );
}
