#include <doctest.h>

#include <funsub/aig.hpp>
#include <funsub/error.hpp>
#include <funsub/random_aig.hpp>
#include <funsub/validate.hpp>

#include "oracles.hpp"

#include <algorithm>

using namespace funsub;

namespace
{

bool has_rule( std::vector<violation> const& report, std::string_view rule )
{
  return std::any_of( report.begin(), report.end(), [&]( auto const& v ) { return v.rule == rule; } );
}

} // namespace

TEST_CASE( "single PI as output is valid" )
{
  aig g;
  g.set_output( g.add_pi() );
  CHECK( validate( g ).empty() );
  CHECK( depth( g ) == 0 );
}

TEST_CASE( "NOT feeding NOT is reported" )
{
  aig g;
  auto a = g.add_pi();
  auto n1 = g.add_not( a );
  auto n2 = g.add_not( n1 );
  g.set_output( n2 );
  auto const report = validate( g );
  REQUIRE( has_rule( report, rules::not_not ) );
  auto it = std::find_if( report.begin(), report.end(), []( auto const& v ) { return v.rule == rules::not_not; } );
  CHECK( it->node == n2 );
}

TEST_CASE( "unreachable AND is dead logic" )
{
  aig g;
  auto a = g.add_pi();
  auto b = g.add_pi();
  auto x = g.add_and( a, b );
  g.add_and( a, x );
  g.set_output( x );
  CHECK( has_rule( validate( g ), rules::dead_logic ) );
}

TEST_CASE( "structural violations" )
{
  aig none;
  CHECK( has_rule( validate( none ), rules::empty ) );

  aig no_out;
  no_out.add_pi();
  CHECK( has_rule( validate( no_out ), rules::no_output ) );

  aig range;
  auto a = range.add_pi();
  range.set_output( range.add_and( a, 7 ) );
  CHECK( has_rule( validate( range ), rules::bad_fanin ) );

  aig arity;
  auto p = arity.add_pi();
  arity.set_output( arity.add_node( node_kind::and_gate, { p } ) );
  CHECK( has_rule( validate( arity ), rules::arity ) );
}

TEST_CASE( "validate is idempotent" )
{
  aig g;
  auto a = g.add_pi();
  auto n1 = g.add_not( a );
  g.add_not( n1 );
  g.set_output( n1 );
  CHECK( validate( g ) == validate( g ) );
}

TEST_CASE( "topological order" )
{
  SUBCASE( "PI then NOT" )
  {
    aig g;
    auto a = g.add_pi();
    auto n = g.add_not( a );
    g.set_output( n );
    CHECK( topo_order( g ) == std::vector<node_id>{ a, n } );
  }
  SUBCASE( "fanins precede gates in a relabeled graph" )
  {
    aig g;
    auto a = g.add_pi();
    auto b = g.add_pi();
    g.set_output( g.add_and( a, b ) );
    auto const p = permute_ids( g, { 2, 1, 0 } );
    auto const order = topo_order( p );
    REQUIRE( order.size() == 3 );
    CHECK( order.back() == 0 );
  }
  SUBCASE( "a 2-cycle is rejected" )
  {
    aig g;
    auto a = g.add_pi();
    g.add_node( node_kind::and_gate, { a, 2 } );
    g.add_node( node_kind::and_gate, { a, 1 } );
    g.set_output( 2 );
    CHECK_THROWS_WITH_AS( topo_order( g ), doctest::Contains( "not a DAG" ), error );
    CHECK( has_rule( validate( g ), rules::cycle ) );
  }
}

TEST_CASE( "depth" )
{
  aig chain;
  auto a = chain.add_pi();
  auto b = chain.add_pi();
  auto c = chain.add_pi();
  chain.set_output( chain.add_and( chain.add_and( a, b ), c ) );
  CHECK( depth( chain ) == 2 );

  aig tree;
  std::vector<node_id> pis;
  for ( int i = 0; i < 4; ++i )
    pis.push_back( tree.add_pi() );
  tree.set_output( tree.add_and( tree.add_and( pis[0], pis[1] ), tree.add_and( pis[2], pis[3] ) ) );
  CHECK( depth( tree ) == 2 );
}

TEST_CASE( "random circuits satisfy every invariant" )
{
  for ( std::uint64_t seed = 0; seed < 200; ++seed )
  {
    auto const g = random_aig( {}, seed );
    INFO( "seed " << seed );
    REQUIRE( validate( g ).empty() );
    CHECK( g.num_pis() >= 6 );
    CHECK( g.num_pis() <= 12 );
    CHECK( g.size() >= 30 );
    CHECK( g.size() <= 200 );
    CHECK( depth( g ) < g.size() );
    CHECK_FALSE( oracle::has_not_not( g ) );
    CHECK( oracle::dead_count( g ) == 0 );

    std::size_t sinks = 0;
    auto const fanouts = g.fanouts();
    for ( node_id v = 0; v < g.size(); ++v )
    {
      if ( fanouts[v].empty() )
      {
        ++sinks;
        CHECK( v == g.output() );
      }
    }
    CHECK( sinks == 1 );
  }
  CHECK( random_aig( {}, 42 ) == random_aig( {}, 42 ) );
}

TEST_CASE( "builder collapses double negation and merges duplicates" )
{
  aig_builder b( true );
  auto x = b.make_pi();
  auto y = b.make_pi();
  auto n = b.make_not( x );
  CHECK( b.make_not( n ) == x );
  auto g1 = b.make_and( x, y );
  CHECK( b.make_and( y, x ) == g1 );
  auto const g = b.finish( g1 );
  CHECK( g.size() == 3 );
  CHECK( validate( g ).empty() );
}

TEST_CASE( "remove_dead keeps inputs and renumbers densely" )
{
  aig g;
  auto a = g.add_pi();
  auto b = g.add_pi();
  auto dead = g.add_and( a, b );
  auto live = g.add_not( a );
  g.set_output( live );
  (void)dead;
  std::vector<std::optional<node_id>> remap;
  auto const r = remove_dead( g, &remap );
  CHECK( r.size() == 3 );
  CHECK( r.num_pis() == 2 );
  CHECK_FALSE( remap[2].has_value() );
  CHECK( remap[3] == node_id{ 2 } );
}
