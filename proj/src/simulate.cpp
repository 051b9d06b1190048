#include <funsub/simulate.hpp>

#include <funsub/error.hpp>
#include <funsub/random.hpp>
#include <funsub/validate.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <bit>

namespace funsub
{

namespace
{

constexpr std::uint64_t projections[6] = { 0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
                                           0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull };

void check_inputs( aig const& g, std::span<node_id const> input_order )
{
  std::vector<bool> seen( g.size(), false );
  for ( auto id : input_order )
  {
    if ( id >= g.size() || !g.is_pi( id ) )
      throw error( fmt::format( "input order names node {}, which is not a PI", id ) );
    if ( seen[id] )
      throw error( fmt::format( "input order repeats PI {}", id ) );
    seen[id] = true;
  }
  if ( input_order.size() != g.num_pis() )
    throw error( fmt::format( "input order lists {} of {} PIs", input_order.size(), g.num_pis() ) );
}

std::size_t popcount( std::vector<std::uint64_t> const& words )
{
  std::size_t ones = 0;
  for ( auto w : words )
    ones += std::popcount( w );
  return ones;
}

} // namespace

std::size_t truth_table::count_ones() const noexcept
{
  return popcount( words );
}

std::size_t signature::count_ones() const noexcept
{
  return popcount( words );
}

std::string truth_table::to_string() const
{
  std::string text( num_rows(), '0' );
  for ( std::size_t r = 0; r < num_rows(); ++r )
  {
    if ( bit( r ) )
      text[r] = '1';
  }
  return text;
}

std::vector<std::vector<std::uint64_t>> simulate( aig const& g, std::span<node_id const> input_order,
                                                  std::vector<std::vector<std::uint64_t>> const& pi_words )
{
  check_inputs( g, input_order );
  auto const width = pi_words.empty() ? std::size_t{ 1 } : pi_words.front().size();
  std::vector<std::vector<std::uint64_t>> value( g.size() );
  for ( std::size_t k = 0; k < input_order.size(); ++k )
  {
    if ( pi_words[k].size() != width )
      throw error( "stimulus vectors differ in length" );
    value[input_order[k]] = pi_words[k];
  }
  for ( auto v : topo_order( g ) )
  {
    auto const& nd = g.at( v );
    switch ( nd.kind )
    {
    case node_kind::pi:
      break;
    case node_kind::not_gate:
    {
      auto const& a = value[nd.fanins[0]];
      auto& out = value[v];
      out.resize( width );
      for ( std::size_t w = 0; w < width; ++w )
        out[w] = ~a[w];
      break;
    }
    case node_kind::and_gate:
    {
      auto const& a = value[nd.fanins[0]];
      auto const& b = value[nd.fanins[1]];
      auto& out = value[v];
      out.resize( width );
      for ( std::size_t w = 0; w < width; ++w )
        out[w] = a[w] & b[w];
      break;
    }
    }
  }
  return value;
}

truth_table compute_truth_table( aig const& g, std::span<node_id const> input_order )
{
  auto const n = input_order.size();
  if ( n > exhaustive_pi_cap )
    throw error( fmt::format( "{} inputs exceed the exhaustive cap of {}; use signature", n, exhaustive_pi_cap ) );

  auto const rows = std::size_t{ 1 } << n;
  auto const width = std::max<std::size_t>( 1, rows / 64 );
  std::vector<std::vector<std::uint64_t>> stimulus( n, std::vector<std::uint64_t>( width ) );
  for ( std::size_t k = 0; k < n; ++k )
  {
    for ( std::size_t w = 0; w < width; ++w )
      stimulus[k][w] = k < 6 ? projections[k] : ( ( w >> ( k - 6 ) ) & 1u ? ~std::uint64_t{ 0 } : 0 );
  }

  auto const values = simulate( g, input_order, stimulus );
  truth_table tt;
  tt.input_order.assign( input_order.begin(), input_order.end() );
  tt.words = values[g.output()];
  if ( rows < 64 )
    tt.words[0] &= ( std::uint64_t{ 1 } << rows ) - 1;
  return tt;
}

truth_table compute_truth_table( aig const& g )
{
  auto const order = g.pis();
  return compute_truth_table( g, order );
}

signature random_signature( aig const& g, std::span<node_id const> input_order, std::uint64_t seed,
                            std::size_t pattern_count )
{
  if ( pattern_count < min_signature_patterns )
    throw error( fmt::format( "signature needs at least {} patterns, got {}", min_signature_patterns, pattern_count ) );
  auto const width = ( pattern_count + 63 ) / 64;
  std::vector<std::vector<std::uint64_t>> stimulus( input_order.size(), std::vector<std::uint64_t>( width ) );
  splitmix64 rng( seed );
  for ( std::size_t w = 0; w < width; ++w )
  {
    for ( auto& pi : stimulus )
      pi[w] = rng();
  }
  auto const values = simulate( g, input_order, stimulus );

  signature sig;
  sig.input_order.assign( input_order.begin(), input_order.end() );
  sig.seed = seed;
  sig.pattern_count = pattern_count;
  sig.words = values[g.output()];
  if ( auto const tail = pattern_count % 64 )
    sig.words.back() &= ( std::uint64_t{ 1 } << tail ) - 1;
  return sig;
}

signature random_signature( aig const& g, std::uint64_t seed, std::size_t pattern_count )
{
  auto const order = g.pis();
  return random_signature( g, order, seed, pattern_count );
}

bool evaluate( aig const& g, std::span<node_id const> input_order, std::span<bool const> values )
{
  if ( values.size() != input_order.size() )
    throw error( "assignment length differs from input count" );
  std::vector<std::vector<std::uint64_t>> stimulus;
  stimulus.reserve( values.size() );
  for ( bool b : values )
    stimulus.push_back( { b ? ~std::uint64_t{ 0 } : 0 } );
  return simulate( g, input_order, stimulus )[g.output()][0] & 1u;
}

pi_alignment positional_alignment( aig const& a, aig const& b )
{
  auto const pa = a.pis();
  auto const pb = b.pis();
  if ( pa.size() != pb.size() )
    throw error( fmt::format( "PI counts differ: {} vs {}", pa.size(), pb.size() ) );
  pi_alignment alignment;
  for ( std::size_t k = 0; k < pa.size(); ++k )
    alignment.emplace_back( pa[k], pb[k] );
  return alignment;
}

equiv_result equiv( aig const& a, aig const& b, pi_alignment const& alignment, equiv_options const& options )
{
  std::vector<node_id> order_a, order_b;
  for ( auto [x, y] : alignment )
  {
    order_a.push_back( x );
    order_b.push_back( y );
  }
  auto const check_side = [&]( aig const& g, std::vector<node_id> const& order, char const* side ) {
    std::vector<bool> seen( g.size(), false );
    for ( auto id : order )
    {
      if ( id >= g.size() || !g.is_pi( id ) || seen[id] )
        throw error( fmt::format( "alignment is not a bijection: bad {}-side PI {}", side, id ) );
      seen[id] = true;
    }
    if ( order.size() != g.num_pis() )
      throw error( fmt::format( "alignment is not a bijection: covers {} of {} {}-side PIs", order.size(), g.num_pis(), side ) );
  };
  check_side( a, order_a, "a" );
  check_side( b, order_b, "b" );

  auto const n = alignment.size();
  if ( !options.force_signature && n <= exhaustive_pi_cap )
  {
    auto const ta = compute_truth_table( a, order_a );
    auto const tb = compute_truth_table( b, order_b );
    for ( std::size_t w = 0; w < ta.words.size(); ++w )
    {
      if ( auto const diff = ta.words[w] ^ tb.words[w] )
      {
        auto const row = w * 64 + std::countr_zero( diff );
        equiv_result r{ verdict::not_equivalent, {} };
        for ( std::size_t k = 0; k < n; ++k )
          r.witness.push_back( ( row >> k ) & 1u );
        return r;
      }
    }
    return { verdict::equivalent, {} };
  }

  auto const sa = random_signature( a, order_a, options.seed, options.patterns );
  auto const sb = random_signature( b, order_b, options.seed, options.patterns );
  for ( std::size_t w = 0; w < sa.words.size(); ++w )
  {
    if ( auto const diff = sa.words[w] ^ sb.words[w] )
    {
      // replay the generator to recover the differing pattern
      auto const pattern = w * 64 + std::countr_zero( diff );
      splitmix64 rng( options.seed );
      std::vector<std::uint64_t> word_values( n );
      for ( std::size_t i = 0; i <= w; ++i )
      {
        for ( auto& x : word_values )
          x = rng();
      }
      equiv_result r{ verdict::not_equivalent, {} };
      for ( std::size_t k = 0; k < n; ++k )
        r.witness.push_back( ( word_values[k] >> ( pattern & 63 ) ) & 1u );
      return r;
    }
  }
  return { verdict::probably_equivalent, {} };
}

bool functionally_equal( aig const& a, aig const& b )
{
  return equiv( a, b, positional_alignment( a, b ) ).outcome != verdict::not_equivalent;
}

std::string_view to_string( verdict v ) noexcept
{
  switch ( v )
  {
  case verdict::equivalent:
    return "equivalent";
  case verdict::not_equivalent:
    return "not equivalent";
  case verdict::probably_equivalent:
    return "probably equivalent";
  }
  return "?";
}

} // namespace funsub
