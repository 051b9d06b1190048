#include <doctest.h>

#include <funsub/error.hpp>
#include <funsub/metrics.hpp>
#include <funsub/random.hpp>

#include <algorithm>

using namespace funsub;

TEST_CASE( "classification formulas" )
{
  auto const s = classification_metrics( { 3, 5, 1, 1 } );
  CHECK( s.accuracy == doctest::Approx( 0.8 ).epsilon( 1e-12 ) );
  CHECK( s.precision == doctest::Approx( 0.75 ).epsilon( 1e-12 ) );
  CHECK( s.recall == doctest::Approx( 0.75 ).epsilon( 1e-12 ) );
  CHECK( s.f1 == doctest::Approx( 0.75 ).epsilon( 1e-12 ) );

  auto const perfect = classification_metrics( { 4, 6, 0, 0 } );
  CHECK( perfect.accuracy == 1.0 );
  CHECK( perfect.precision == 1.0 );
  CHECK( perfect.recall == 1.0 );
  CHECK( perfect.f1 == 1.0 );
}

TEST_CASE( "zero denominators" )
{
  auto const s = classification_metrics( { 0, 2, 0, 2 } );
  CHECK( s.precision == 0.0 );
  CHECK( s.precision_degenerate );
  CHECK( s.recall == 0.0 );
  CHECK_FALSE( s.recall_degenerate );
  CHECK( s.f1 == 0.0 );
  CHECK_THROWS_AS( classification_metrics( {} ), error );
}

TEST_CASE( "counts are order independent" )
{
  std::vector<std::pair<bool, bool>> outcomes{ { true, true }, { true, false }, { false, false }, { false, true }, { true, true } };
  confusion_counts a;
  for ( auto [p, y] : outcomes )
    tally( a, p, y );
  std::reverse( outcomes.begin(), outcomes.end() );
  confusion_counts b;
  for ( auto [p, y] : outcomes )
    tally( b, p, y );
  CHECK( a == b );
  CHECK( a == confusion_counts{ 2, 1, 1, 1 } );
}

TEST_CASE( "segmentation formulas" )
{
  auto const same = segmentation_metrics( { 1, 2, 3 }, { 1, 2, 3 } );
  CHECK( same.iou == 1.0 );
  CHECK( same.dice == 1.0 );
  auto const disjoint = segmentation_metrics( { 1 }, { 2 } );
  CHECK( disjoint.iou == 0.0 );
  CHECK( disjoint.dice == 0.0 );
  auto const half = segmentation_metrics( { 1, 2 }, { 2, 3 } );
  CHECK( half.iou == doctest::Approx( 1.0 / 3.0 ).epsilon( 1e-12 ) );
  CHECK( half.dice == doctest::Approx( 0.5 ).epsilon( 1e-12 ) );
  CHECK_THROWS_WITH_AS( segmentation_metrics( {}, {} ), doctest::Contains( "undefined" ), error );
}

TEST_CASE( "dice is never below iou" )
{
  splitmix64 rng( 17 );
  for ( int t = 0; t < 2000; ++t )
  {
    std::set<std::uint32_t> p, g;
    for ( std::uint32_t i = 0; i < 20; ++i )
    {
      if ( rng.coin( 0.4 ) )
        p.insert( i );
      if ( rng.coin( 0.4 ) )
        g.insert( i );
    }
    if ( p.empty() && g.empty() )
      continue;
    auto const s = segmentation_metrics( p, g );
    CHECK( s.dice >= s.iou );
    std::vector<std::uint32_t> common;
    std::set_intersection( p.begin(), p.end(), g.begin(), g.end(), std::back_inserter( common ) );
    if ( p == g || common.empty() )
      CHECK( s.dice == s.iou );
    else
      CHECK( s.dice > s.iou );
  }
}

TEST_CASE( "predictions and reports" )
{
  CHECK( parse_predictions( "0.9\n0.1\n1\n" ) == std::vector<double>{ 0.9, 0.1, 1.0 } );
  CHECK( parse_predictions( "0.5" ) == std::vector<double>{ 0.5 } );
  CHECK_THROWS_AS( parse_predictions( "0.5\nabc\n" ), parse_error );
  CHECK_THROWS_AS( parse_predictions( "1.5\n" ), parse_error );

  auto const r = evaluate_stage1( { 0.9, 0.2, 0.7, 0.1 }, { 1, 0, 0, 1 }, 0.5 );
  CHECK( r.counts == confusion_counts{ 1, 1, 1, 1 } );
  CHECK_THROWS_WITH_AS( evaluate_stage1( { 0.9 }, { 1, 0 }, 0.5 ), doctest::Contains( "1 predictions for 2 records" ), error );
  CHECK( write_report( r ) == write_report( r ) );
  CHECK( write_report( r ).find( "\"accuracy\": 0.5" ) != std::string::npos );

  auto const s = evaluate_stage2( { 1, 0, 0, 1, 1 }, { { 1, 1, 0 }, { 0, 1 } }, 0.5 );
  CHECK( s.cells == 5 );
  CHECK( s.segmentation.iou == doctest::Approx( 0.5 ) );
  CHECK( s.segmentation.dice == doctest::Approx( 2.0 / 3.0 ) );
  CHECK_THROWS_AS( evaluate_stage2( { 1, 1 }, { { 1, 1, 0 } }, 0.5 ), error );
}
