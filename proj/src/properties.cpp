#include <funsub/properties.hpp>

#include <funsub/cell_library.hpp>
#include <funsub/dataset.hpp>
#include <funsub/error.hpp>
#include <funsub/random.hpp>
#include <funsub/random_aig.hpp>
#include <funsub/rewrite.hpp>
#include <funsub/sampler.hpp>
#include <funsub/simulate.hpp>
#include <funsub/techmap.hpp>

#include "parallel.hpp"

#include <fmt/format.h>

#include <mutex>
#include <numeric>

namespace funsub
{

property_result check_reflexive_witness( aig const& g, embedding const& m )
{
  if ( verify_embedding( g, g, m ) )
    return { true, {} };
  return { false, "mapping of the circuit into itself is not an embedding" };
}

property_result check_reflexivity( aig const& g )
{
  auto const m = find_embedding( g, g );
  if ( !m )
    return { false, "no embedding of the circuit into itself" };
  return check_reflexive_witness( g, *m );
}

property_result check_preservation( aig const& sub, aig const& base, std::vector<aig> const& variants )
{
  if ( !find_embedding( sub, base ) )
    throw error( "precondition: subgraph does not embed into the base" );
  for ( std::size_t i = 0; i < variants.size(); ++i )
  {
    auto const& v = variants[i];
    if ( v.num_pis() != base.num_pis() ||
         equiv( base, v, positional_alignment( base, v ) ).outcome == verdict::not_equivalent )
      throw error( fmt::format( "precondition: variant {} is not equivalent to the base", i ) );
  }
  for ( std::size_t i = 0; i < variants.size(); ++i )
  {
    if ( !positive_witness( sub, base, variants[i] ) )
      return { false, fmt::format( "variant {} not labeled positive", i ) };
  }
  return { true, {} };
}

property_result check_nested_embedding( aig const& s2, aig const& g )
{
  if ( find_embedding( s2, g ) )
    return { true, {} };
  return { false, "nested sample does not embed into the circuit" };
}

property_result check_transitivity( aig const& g, std::uint64_t seed )
{
  auto const s1 = sample_with_retry( g, derive_seed( seed, 0 ) );
  auto const s2 = sample_with_retry( s1.circuit, derive_seed( seed, 1 ) );
  if ( !find_embedding( s1.circuit, g ) )
    return { false, "outer sample does not embed into the circuit" };
  if ( !find_embedding( s2.circuit, s1.circuit ) )
    return { false, "inner sample does not embed into the outer sample" };
  return check_nested_embedding( s2.circuit, g );
}

namespace
{

aig and_tree( std::size_t num_pis )
{
  aig t;
  std::vector<node_id> layer;
  for ( std::size_t i = 0; i < num_pis; ++i )
    layer.push_back( t.add_pi() );
  while ( layer.size() > 1 )
  {
    std::vector<node_id> next;
    for ( std::size_t i = 0; i + 1 < layer.size(); i += 2 )
      next.push_back( t.add_and( layer[i], layer[i + 1] ) );
    if ( layer.size() % 2 )
      next.push_back( layer.back() );
    layer = std::move( next );
  }
  t.set_output( layer.front() );
  return t;
}

aig complemented( aig const& g )
{
  aig c = g;
  if ( c.kind( c.output() ) == node_kind::not_gate )
  {
    c.set_output( c.fanins( c.output() )[0] );
    return remove_dead( c );
  }
  c.set_output( c.add_not( c.output() ) );
  return c;
}

struct instance_outcome
{
  bool reflexive = false;
  bool preserved = false;
  bool transitive = false;
  std::size_t controls_run = 0;
  std::size_t controls_rejected = 0;
  std::vector<std::string> failures;
};

instance_outcome run_instance( std::size_t index, std::uint64_t seed )
{
  instance_outcome out;
  auto const s = derive_seed( seed, index );
  auto fail = [&]( std::string const& what ) { out.failures.push_back( fmt::format( "instance {}: {}", index, what ) ); };

  auto const g = random_aig( {}, derive_seed( s, 0 ) );

  std::vector<node_id> perm( g.size() );
  std::iota( perm.begin(), perm.end(), node_id{ 0 } );
  splitmix64 rng( derive_seed( s, 1 ) );
  rng.shuffle( std::span<node_id>( perm ) );
  auto const r1 = check_reflexivity( g );
  auto const r2 = check_reflexivity( permute_ids( g, perm ) );
  out.reflexive = r1.pass && r2.pass;
  if ( !r1.pass )
    fail( "reflexivity: " + r1.detail );
  if ( !r2.pass )
    fail( "reflexivity (relabeled): " + r2.detail );

  auto const sub = sample_with_retry( g, derive_seed( s, 2 ) );
  std::vector<aig> variants{ g };
  auto const names = flow_names();
  auto const first = rng.below( names.size() );
  for ( std::size_t k = 0; k < names.size(); ++k )
  {
    try
    {
      variants.push_back( apply_flow( g, named_flow( names[( first + k ) % names.size()], derive_seed( s, 3 ) ) ) );
      break;
    }
    catch ( restructure_error const& )
    {
    }
  }
  if ( variants.size() == 1 )
    fail( "preservation: no flow restructured the circuit" );
  variants.push_back( expand( map_to_cells( g, builtin_library() ).pm, builtin_library() ).circuit );
  try
  {
    auto const p = check_preservation( sub.circuit, g, variants );
    out.preserved = p.pass && variants.size() == 3;
    if ( !p.pass )
      fail( "preservation: " + p.detail );
  }
  catch ( error const& e )
  {
    fail( std::string( "preservation: " ) + e.what() );
  }

  auto const t = check_transitivity( g, derive_seed( s, 4 ) );
  out.transitive = t.pass;
  if ( !t.pass )
    fail( "transitivity: " + t.detail );

  /* negative controls */
  ++out.controls_run;
  if ( auto m = find_embedding( g, g ) )
  {
    m->image[g.output()] = g.pis().front();
    if ( !check_reflexive_witness( g, *m ).pass )
      ++out.controls_rejected;
    else
      fail( "control: corrupted reflexive mapping accepted" );
  }

  ++out.controls_run;
  if ( !check_nested_embedding( and_tree( g.num_pis() + g.size() ), g ).pass )
    ++out.controls_rejected;
  else
    fail( "control: oversized stand-in embedded" );

  ++out.controls_run;
  try
  {
    check_preservation( sub.circuit, g, { complemented( g ) } );
    fail( "control: non-equivalent variant accepted" );
  }
  catch ( error const& )
  {
    ++out.controls_rejected;
  }
  return out;
}

} // namespace

selfcheck_report run_selfcheck( std::size_t n, std::uint64_t seed, unsigned jobs )
{
  std::vector<instance_outcome> outcomes( n );
  detail::parallel_for( n, jobs, [&]( std::size_t i ) { outcomes[i] = run_instance( i, seed ); } );

  selfcheck_report r;
  r.instances = n;
  for ( auto& o : outcomes )
  {
    r.reflexivity_passed += o.reflexive;
    r.preservation_passed += o.preserved;
    r.transitivity_passed += o.transitive;
    r.controls_run += o.controls_run;
    r.controls_rejected += o.controls_rejected;
    for ( auto& f : o.failures )
      r.failures.push_back( std::move( f ) );
  }
  return r;
}

} // namespace funsub
