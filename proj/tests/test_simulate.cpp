#include <doctest.h>

#include <funsub/cell_library.hpp>
#include <funsub/error.hpp>
#include <funsub/random_aig.hpp>
#include <funsub/rewrite.hpp>
#include <funsub/simulate.hpp>

#include "oracles.hpp"

using namespace funsub;

namespace
{

std::string oracle_bits( aig const& g )
{
  std::string s;
  for ( bool b : oracle::table( g ) )
    s += b ? '1' : '0';
  return s;
}

aig xor_circuit()
{
  aig g;
  auto a = g.add_pi();
  auto b = g.add_pi();
  auto t1 = g.add_and( a, g.add_not( b ) );
  auto t2 = g.add_and( g.add_not( a ), b );
  g.set_output( g.add_not( g.add_and( g.add_not( t1 ), g.add_not( t2 ) ) ) );
  return g;
}

aig wide_and( std::size_t n )
{
  aig g;
  auto acc = g.add_pi();
  for ( std::size_t i = 1; i < n; ++i )
    acc = g.add_and( acc, g.add_pi() );
  g.set_output( acc );
  return g;
}

} // namespace

TEST_CASE( "XOR table" )
{
  auto const g = xor_circuit();
  CHECK( compute_truth_table( g ).to_string() == "0110" );
  CHECK( oracle_bits( g ) == "0110" );
}

TEST_CASE( "truth tables agree with per-row evaluation" )
{
  for ( std::uint64_t s = 0; s < 100; ++s )
  {
    auto const g = random_aig( { 3, 8, 10, 60 }, s );
    CHECK( compute_truth_table( g ).to_string() == oracle_bits( g ) );
  }
}

TEST_CASE( "library tables agree with per-row evaluation" )
{
  for ( auto const& c : builtin_library().cells() )
  {
    INFO( c.name );
    CHECK( oracle_bits( c.tmpl ) == c.table );
  }
}

TEST_CASE( "exhaustive cap" )
{
  CHECK_NOTHROW( compute_truth_table( wide_and( 16 ) ) );
  CHECK_THROWS_WITH_AS( compute_truth_table( wide_and( 17 ) ), doctest::Contains( "use signature" ), error );
  auto const big = wide_and( 20 );
  auto const r = equiv( big, big, positional_alignment( big, big ) );
  CHECK( r.outcome == verdict::probably_equivalent );
}

TEST_CASE( "signatures are deterministic and need enough patterns" )
{
  auto const g = random_aig( {}, 3 );
  auto const s1 = random_signature( g, 99, 2048 );
  auto const s2 = random_signature( g, 99, 2048 );
  CHECK( s1.words == s2.words );
  CHECK_THROWS_AS( random_signature( g, 99, 100 ), error );
}

TEST_CASE( "equivalence is an equivalence relation on rewritten variants" )
{
  for ( std::uint64_t s = 0; s < 30; ++s )
  {
    auto const g = random_aig( {}, s );
    auto const a = apply_pass( g, { pass_kind::unfactor, 0.5 }, s );
    auto const b = apply_pass( a, { pass_kind::reassociate, 0.5 }, s + 1 );
    CHECK( equiv( g, g, positional_alignment( g, g ) ).outcome == verdict::equivalent );
    CHECK( equiv( g, a, positional_alignment( g, a ) ).outcome == verdict::equivalent );
    CHECK( equiv( a, g, positional_alignment( a, g ) ).outcome == verdict::equivalent );
    CHECK( equiv( a, b, positional_alignment( a, b ) ).outcome == verdict::equivalent );
    CHECK( equiv( g, b, positional_alignment( g, b ) ).outcome == verdict::equivalent );
  }
}

TEST_CASE( "non-equivalence witnesses distinguish the circuits" )
{
  for ( std::uint64_t s = 0; s < 50; ++s )
  {
    auto const g = random_aig( {}, s );
    auto h = g;
    h.set_output( h.add_and( h.output(), h.pis()[s % h.num_pis()] ) );
    for ( bool force : { false, true } )
    {
      equiv_options o;
      o.force_signature = force;
      auto const r = equiv( g, h, positional_alignment( g, h ), o );
      if ( r.outcome != verdict::not_equivalent )
        continue;
      CHECK( oracle::eval( g, r.witness ) != oracle::eval( h, r.witness ) );
    }
  }
}

TEST_CASE( "alignment must be a bijection" )
{
  auto const g = xor_circuit();
  CHECK_THROWS_AS( equiv( g, g, { { 0, 0 }, { 1, 0 } } ), error );
  CHECK_THROWS_AS( equiv( g, g, { { 0, 0 } } ), error );
}

TEST_CASE( "packed reference table agrees with per-row reference" )
{
  for ( std::uint64_t s = 0; s < 40; ++s )
  {
    auto const g = random_aig( { 3, 9, 10, 80 }, s );
    auto const rows = oracle::table( g );
    auto const packed = oracle::packed_table( g );
    for ( std::size_t r = 0; r < rows.size(); ++r )
      CHECK( ( ( packed[r / 64] >> ( r % 64 ) ) & 1 ) == rows[r] );
    CHECK( packed == compute_truth_table( g ).words );
  }
}
