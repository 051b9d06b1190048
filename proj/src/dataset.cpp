#include <funsub/dataset.hpp>

#include <funsub/error.hpp>
#include <funsub/iso_match.hpp>
#include <funsub/random.hpp>
#include <funsub/rewrite.hpp>
#include <funsub/simulate.hpp>
#include <funsub/techmap.hpp>
#include <funsub/text_io.hpp>

#include "parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>

namespace funsub
{

namespace
{

/* salts of the per-base seed stream */
constexpr std::uint64_t salt_sample = 1;
constexpr std::uint64_t salt_flow_choice = 2;
constexpr std::uint64_t salt_flow = 3;
constexpr std::uint64_t salt_negatives = 4;

using detail::parallel_for;

struct prepared_base
{
  std::size_t index = 0;
  std::uint64_t seed = 0;
  sampled_subgraph sub;
  aig syn;
  pm_netlist pm;
};

bool embeds( aig const& query, aig const& target, std::uint64_t budget )
{
  match_options options;
  options.max_steps = budget;
  return match( query, target, options ).status != match_status::none;
}

} // namespace

std::uint64_t base_seed( std::uint64_t seed, std::string_view canonical_text )
{
  return derive_seed( seed, fnv1a( canonical_text ) );
}

bool positive_witness( aig const& sub, aig const& base, aig const& candidate )
{
  if ( !find_embedding( sub, base ) )
    return false;
  if ( base.num_pis() != candidate.num_pis() )
    return false;
  return equiv( base, candidate, positional_alignment( base, candidate ) ).outcome != verdict::not_equivalent;
}

std::vector<stage1_record> gen_stage1( std::vector<base_circuit> const& bases, cell_library const& lib,
                                       std::uint64_t seed, gen_options const& options )
{
  options.sampling.check();
  if ( bases.size() < 2 )
    throw error( "cannot form negatives: fewer than 2 bases" );

  std::vector<std::optional<prepared_base>> prepared( bases.size() );
  parallel_for( bases.size(), options.jobs, [&]( std::size_t i ) {
    auto const& g = bases[i].circuit;
    prepared_base p;
    p.index = i;
    p.seed = base_seed( seed, write_aig( g ) );
    if ( g.is_pi( g.output() ) )
      return;
    try
    {
      p.sub = sample_with_retry( g, derive_seed( p.seed, salt_sample ), options.sampling );
    }
    catch ( degenerate_sample const& )
    {
      return;
    }

    splitmix64 choice( derive_seed( p.seed, salt_flow_choice ) );
    auto const names = flow_names();
    auto const f = named_flow( names[choice.below( names.size() )], derive_seed( p.seed, salt_flow ) );
    try
    {
      p.syn = apply_flow( g, f );
    }
    catch ( restructure_error const& )
    {
      return;
    }
    p.pm = map_to_cells( p.syn, lib ).pm;
    prepared[i] = std::move( p );
  } );

  std::vector<std::size_t> kept;
  for ( std::size_t i = 0; i < prepared.size(); ++i )
  {
    if ( prepared[i] )
      kept.push_back( i );
  }
  if ( kept.size() < 2 )
    throw error( fmt::format( "cannot form negatives: {} usable bases", kept.size() ) );

  std::vector<std::vector<stage1_record>> per_base( kept.size() );
  parallel_for( kept.size(), options.jobs, [&]( std::size_t slot ) {
    auto const& p = *prepared[kept[slot]];
    auto const& base = bases[p.index];
    auto& out = per_base[slot];

    stage1_record pos;
    pos.sub = p.sub.circuit;
    pos.aig_circuit = base.circuit;
    pos.syn = p.syn;
    pos.pm = p.pm;
    pos.label = 1;
    pos.pair_id = base.id + ":p";
    pos.base_circuit_id = base.id;
    pos.seed = p.seed;
    out.push_back( std::move( pos ) );

    auto const wanted = static_cast<std::size_t>( std::floor( ( slot + 1 ) * options.ratio ) ) -
                        static_cast<std::size_t>( std::floor( slot * options.ratio ) );
    splitmix64 rng( derive_seed( p.seed, salt_negatives ) );
    for ( std::size_t k = 0; k < wanted; ++k )
    {
      for ( int attempt = 0; attempt <= options.negative_attempts; ++attempt )
      {
        auto other = rng.below( kept.size() - 1 );
        if ( other >= slot )
          ++other;
        auto const& q = *prepared[kept[other]];
        auto const& cand = bases[q.index];
        if ( embeds( p.sub.circuit, cand.circuit, options.filter_steps ) ||
             embeds( p.sub.circuit, q.syn, options.filter_steps ) )
          continue;
        stage1_record neg;
        neg.sub = p.sub.circuit;
        neg.aig_circuit = cand.circuit;
        neg.syn = q.syn;
        neg.pm = q.pm;
        neg.label = 0;
        neg.pair_id = fmt::format( "{}:n{}", base.id, k );
        neg.base_circuit_id = cand.id;
        neg.seed = p.seed;
        out.push_back( std::move( neg ) );
        break;
      }
    }
  } );

  std::vector<stage1_record> records;
  for ( auto& group : per_base )
  {
    for ( auto& r : group )
      records.push_back( std::move( r ) );
  }
  return records;
}

std::vector<int> boundary_labels( sampled_subgraph const& sub, std::vector<std::pair<node_id, cell_id>> const& phi,
                                  std::size_t num_cells )
{
  std::vector<int> labels( num_cells, 0 );
  for ( std::size_t i = 0; i < sub.source.size(); ++i )
  {
    if ( sub.fresh[i] )
      continue;
    auto const v = sub.source[i];
    auto it = std::lower_bound( phi.begin(), phi.end(), std::pair<node_id, cell_id>{ v, 0 } );
    for ( ; it != phi.end() && it->first == v; ++it )
    {
      if ( it->second >= num_cells )
        throw error( fmt::format( "node map refers to cell {} of {}", it->second, num_cells ) );
      labels[it->second] = 1;
    }
  }
  return labels;
}

std::vector<stage2_record> gen_stage2( std::vector<named_netlist> const& pms, cell_library const& lib,
                                       std::uint64_t seed, gen_options const& options )
{
  options.sampling.check();
  std::vector<std::optional<stage2_record>> out( pms.size() );
  parallel_for( pms.size(), options.jobs, [&]( std::size_t i ) {
    auto const& pm = pms[i].pm;
    auto const s = base_seed( seed, write_pm( pm ) );
    auto const e = expand( pm, lib );
    if ( e.circuit.size() < 2 )
      return;

    constexpr int attempts = 16;
    for ( int attempt = 0; attempt < attempts; ++attempt )
    {
      sampled_subgraph sub;
      try
      {
        sub = sample_with_retry( e.circuit, derive_seed( s, salt_sample + attempt ), options.sampling );
      }
      catch ( degenerate_sample const& )
      {
        return;
      }
      auto labels = boundary_labels( sub, e.map.phi, pm.cells.size() );
      if ( std::find( labels.begin(), labels.end(), 1 ) == labels.end() )
        continue;
      stage2_record r;
      r.sub = sub.circuit;
      r.pm = pm;
      r.node_labels = std::move( labels );
      r.phi_digest = fmt::format( "{:016x}", fnv1a( write_node_map( e.map ) ) );
      r.pair_id = pms[i].id;
      r.seed = s;
      out[i] = std::move( r );
      return;
    }
  } );

  std::vector<stage2_record> records;
  for ( auto& r : out )
  {
    if ( r )
      records.push_back( std::move( *r ) );
  }
  return records;
}

std::vector<base_circuit> partition_bases( std::vector<base_circuit> const& circuits, sample_params const& params,
                                           std::uint64_t seed, std::size_t min_nodes )
{
  std::vector<base_circuit> bases;
  for ( auto const& c : circuits )
  {
    auto p = params;
    p.seed = derive_seed( seed, fnv1a( c.id ) );
    auto cones = partition_khop( c.circuit, p );
    for ( std::size_t k = 0; k < cones.size(); ++k )
    {
      if ( cones[k].size() >= min_nodes )
        bases.push_back( { fmt::format( "{}/{}", c.id, k ), std::move( cones[k] ) } );
    }
  }
  return bases;
}

} // namespace funsub
