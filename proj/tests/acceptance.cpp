// Acceptance battery: one PASS/FAIL line per criterion.

#include <funsub/cell_library.hpp>
#include <funsub/dataset.hpp>
#include <funsub/error.hpp>
#include <funsub/file_util.hpp>
#include <funsub/iso_match.hpp>
#include <funsub/metrics.hpp>
#include <funsub/properties.hpp>
#include <funsub/random.hpp>
#include <funsub/random_aig.hpp>
#include <funsub/records.hpp>
#include <funsub/rewrite.hpp>
#include <funsub/sampler.hpp>
#include <funsub/techmap.hpp>
#include <funsub/validate.hpp>

#include "oracles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unistd.h>
#include <vector>

using namespace funsub;

namespace
{

constexpr std::uint64_t master_seed = 20240601;
constexpr std::size_t corpus_size = 500;
constexpr double restructure_floor = 0.95;
constexpr double equivalence_budget_seconds = 120.0;
constexpr std::size_t iso_pairs = 200;
constexpr std::size_t iso_max_nodes = 8;
constexpr std::size_t property_instances = 100;
constexpr std::size_t set_pairs = 10000;
constexpr double exact = 1e-12;

int failures = 0;

void report( bool pass, std::string_view name, std::string const& detail )
{
  fmt::print( "{} {}: {}\n", pass ? "PASS" : "FAIL", name, detail );
  std::fflush( stdout );
  if ( !pass )
    ++failures;
}

std::vector<aig> corpus()
{
  std::vector<aig> gs;
  for ( std::size_t i = 0; i < corpus_size; ++i )
    gs.push_back( random_aig( {}, derive_seed( master_seed, i ) ) );
  return gs;
}

bool structurally_sound( aig const& g )
{
  return validate( g ).empty() && !oracle::has_not_not( g ) && oracle::dead_count( g ) == 0;
}

/* Degree profile; differing profiles prove non-isomorphism. */
std::vector<std::tuple<int, std::size_t, std::vector<int>>> profile( aig const& g )
{
  auto const fanouts = g.fanouts();
  std::vector<std::tuple<int, std::size_t, std::vector<int>>> p;
  for ( node_id v = 0; v < g.size(); ++v )
  {
    std::vector<int> kinds;
    for ( auto f : g.fanins( v ) )
      kinds.push_back( static_cast<int>( g.kind( f ) ) );
    std::sort( kinds.begin(), kinds.end() );
    p.emplace_back( static_cast<int>( g.kind( v ) ), fanouts[v].size(), kinds );
  }
  std::sort( p.begin(), p.end() );
  return p;
}

void equivalence_and_restructuring( std::vector<aig> const& gs )
{
  auto const start = std::chrono::steady_clock::now();
  std::size_t applications = 0, equal = 0, sound = 0, restructured = 0, verified_non_iso = 0, certified_non_iso = 0;
  std::size_t clean_failures = 0;
  std::size_t pass_runs = 0, pass_equal = 0;
  std::vector<std::string> problems;

  constexpr pass_kind passes[] = { pass_kind::strash, pass_kind::balance, pass_kind::factor,
                                   pass_kind::unfactor, pass_kind::demorgan_push, pass_kind::reassociate };
  for ( std::size_t i = 0; i < gs.size(); ++i )
  {
    auto const& g = gs[i];
    auto const want = oracle::packed_table( g );
    for ( auto k : passes )
    {
      auto const r = apply_pass( g, { k, 0.2 }, derive_seed( master_seed + 1, i ) );
      ++pass_runs;
      pass_equal += structurally_sound( r ) && oracle::packed_table( r ) == want;
    }
    for ( auto name : flow_names() )
    {
      ++applications;
      try
      {
        auto const r = apply_flow( g, named_flow( name, derive_seed( master_seed + 2, i ) ) );
        ++restructured;
        sound += structurally_sound( r ) && r.num_pis() == g.num_pis();
        if ( oracle::packed_table( r ) == want )
          ++equal;
        else
          problems.push_back( fmt::format( "circuit {} flow {}", i, name ) );
        if ( !is_isomorphic( r, g ) )
          ++verified_non_iso;
        if ( r.size() != g.size() || r.num_edges() != g.num_edges() || profile( r ) != profile( g ) )
          ++certified_non_iso;
      }
      catch ( restructure_error const& e )
      {
        clean_failures += std::string_view( e.what() ).find( "cannot restructure" ) != std::string_view::npos;
      }
    }
  }
  auto const seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();

  report( equal == restructured && sound == restructured && pass_equal == pass_runs && seconds < equivalence_budget_seconds,
          "equivalence preservation",
          fmt::format( "{} circuits x 5 flows: {}/{} results truth-table equal, {}/{} structurally sound; "
                       "single passes {}/{} equal; {:.1f} s (limit {:.0f} s){}",
                       gs.size(), equal, restructured, sound, restructured, pass_equal, pass_runs, seconds,
                       equivalence_budget_seconds, problems.empty() ? "" : "; first mismatch " + problems.front() ) );

  auto const rate = static_cast<double>( restructured ) / static_cast<double>( applications );
  auto const failed = applications - restructured;
  report( rate >= restructure_floor && verified_non_iso == restructured && clean_failures == failed,
          "restructuring contract",
          fmt::format( "{}/{} applications restructured ({:.2f}%, floor {:.0f}%), {} verified non-isomorphic "
                       "({} also by degree profile), {}/{} failures raised 'cannot restructure'",
                       restructured, applications, 100 * rate, 100 * restructure_floor, verified_non_iso,
                       certified_non_iso, clean_failures, failed ) );
}

void techmap_round_trip( std::vector<aig> const& gs )
{
  auto const& lib = builtin_library();
  std::size_t equal = 0, total_phi = 0, covering = 0, valid = 0;
  for ( auto const& g : gs )
  {
    auto const pm = map_to_cells( g, lib ).pm;
    auto const e = expand( pm, lib );
    valid += validate( pm, lib ).empty() && structurally_sound( e.circuit );
    equal += e.circuit.num_pis() == g.num_pis() && oracle::packed_table( e.circuit ) == oracle::packed_table( g );

    std::map<node_id, std::set<cell_id>> related;
    for ( auto const& [v, c] : e.map.phi )
      related[v].insert( c );
    bool total = true;
    for ( node_id v = 0; v < e.circuit.size(); ++v )
    {
      if ( !e.circuit.is_pi( v ) && related[v].empty() )
        total = false;
    }
    std::set<cell_id> cells;
    for ( auto const& [v, c] : e.map.phi )
      cells.insert( c );
    total_phi += total;
    covering += cells.size() == pm.cells.size() && ( cells.empty() || *cells.rbegin() < pm.cells.size() );
  }
  report( equal == gs.size() && total_phi == gs.size() && covering == gs.size() && valid == gs.size(),
          "techmap round trip",
          fmt::format( "{} circuits: expand(map(g)) equal {}/{}, phi total {}/{}, phi covers all cells {}/{}, valid {}/{}",
                       gs.size(), equal, gs.size(), total_phi, gs.size(), covering, gs.size(), valid, gs.size() ) );
}

void iso_oracle()
{
  random_aig_params small{ 2, 4, 3, iso_max_nodes, 0.3, 0.5 };
  std::size_t agree = 0, positives = 0, checked = 0;
  splitmix64 rng( master_seed + 3 );
  for ( std::size_t i = 0; i < iso_pairs; ++i )
  {
    auto const g = random_aig( small, derive_seed( master_seed + 4, i ) );
    aig q;
    switch ( i % 4 )
    {
    case 0:
      q = sample_with_retry( g, i ).circuit;
      break;
    case 1:
    {
      std::vector<node_id> perm( g.size() );
      std::iota( perm.begin(), perm.end(), node_id{ 0 } );
      rng.shuffle( std::span<node_id>( perm ) );
      q = permute_ids( g, perm );
      break;
    }
    default:
      q = random_aig( small, derive_seed( master_seed + 5, i ) );
    }
    auto const m = find_embedding( q, g );
    bool const want_embed = oracle::embeds( q, g );
    bool const want_iso = oracle::isomorphic( q, g );
    bool ok = m.has_value() == want_embed && is_isomorphic( q, g ) == want_iso;
    if ( m )
      ok = ok && verify_embedding( q, g, *m );
    agree += ok;
    positives += want_embed;
    ++checked;
  }
  report( agree == checked, "iso-match oracle equivalence",
          fmt::format( "{}/{} pairs with |g| <= {} agree with exhaustive enumeration ({} embeddable)", agree, checked,
                       iso_max_nodes, positives ) );
}

void property_suite()
{
  auto const r = run_selfcheck( property_instances, master_seed + 6, 4 );
  report( r.ok(), "property suite",
          fmt::format( "reflexivity {}/{}, preservation {}/{}, transitivity {}/{}, negative controls rejected {}/{}{}",
                       r.reflexivity_passed, r.instances, r.preservation_passed, r.instances, r.transitivity_passed,
                       r.instances, r.controls_rejected, r.controls_run,
                       r.failures.empty() ? "" : "; " + r.failures.front() ) );
}

void metric_identities()
{
  bool hand = true;
  auto close = [&]( double a, double b ) { hand = hand && std::abs( a - b ) <= exact; };
  auto const a = classification_metrics( { 3, 5, 1, 1 } );
  close( a.accuracy, 0.8 );
  close( a.precision, 0.75 );
  close( a.recall, 0.75 );
  close( a.f1, 0.75 );
  auto const b = classification_metrics( { 7, 9, 0, 0 } );
  close( b.accuracy, 1 );
  close( b.precision, 1 );
  close( b.recall, 1 );
  close( b.f1, 1 );
  auto const c = classification_metrics( { 0, 2, 0, 2 } );
  close( c.precision, 0 );
  close( c.recall, 0 );
  close( c.f1, 0 );
  hand = hand && c.precision_degenerate;
  auto const s1 = segmentation_metrics( { 1, 2 }, { 1, 2 } );
  close( s1.iou, 1 );
  close( s1.dice, 1 );
  auto const s2 = segmentation_metrics( { 1 }, { 2 } );
  close( s2.iou, 0 );
  close( s2.dice, 0 );
  auto const s3 = segmentation_metrics( { 1, 2 }, { 2, 3 } );
  close( s3.iou, 1.0 / 3.0 );
  close( s3.dice, 0.5 );

  splitmix64 rng( master_seed + 7 );
  std::size_t ordered = 0, pairs = 0;
  while ( pairs < set_pairs )
  {
    std::set<std::uint32_t> p, g;
    auto const universe = static_cast<std::uint32_t>( rng.between( 1, 64 ) );
    auto const density = rng.unit();
    for ( std::uint32_t i = 0; i < universe; ++i )
    {
      if ( rng.coin( density ) )
        p.insert( i );
      if ( rng.coin( density ) )
        g.insert( i );
    }
    if ( p.empty() && g.empty() )
      continue;
    auto const s = segmentation_metrics( p, g );
    ordered += s.dice >= s.iou;
    ++pairs;
  }
  report( hand && ordered == pairs, "metrics identities",
          fmt::format( "hand-computed cases {} (tolerance {:g}); dice >= iou on {}/{} random set pairs",
                       hand ? "exact" : "WRONG", exact, ordered, pairs ) );
}

struct generated
{
  std::string s1, s2;
  std::vector<stage1_record> records1;
  std::vector<stage2_record> records2;
};

generated generate( std::vector<base_circuit> const& bases, unsigned jobs, std::filesystem::path const& dir )
{
  gen_options o;
  o.jobs = jobs;
  generated out;
  out.records1 = gen_stage1( bases, builtin_library(), master_seed, o );
  std::vector<named_netlist> pms;
  for ( auto const& b : bases )
    pms.push_back( { b.id, map_to_cells( b.circuit, builtin_library() ).pm } );
  out.records2 = gen_stage2( pms, builtin_library(), master_seed, o );
  write_records( out.records1, dir / "data.s1.recs" );
  write_records( out.records2, dir / "data.s2.recs" );
  out.s1 = read_file( dir / "data.s1.recs" );
  out.s2 = read_file( dir / "data.s2.recs" );
  return out;
}

double mean( std::vector<double> const& v )
{
  return std::accumulate( v.begin(), v.end(), 0.0 ) / static_cast<double>( v.size() );
}

void pipeline_checks( std::vector<aig> const& gs )
{
  std::vector<base_circuit> bases;
  for ( std::size_t i = 0; i < 200; ++i )
    bases.push_back( { fmt::format( "r{}", i ), gs[i] } );

  auto const dir = std::filesystem::temp_directory_path() / fmt::format( "funsub_acceptance_{}", ::getpid() );
  std::filesystem::create_directories( dir );
  auto const a = generate( bases, 1, dir );
  auto const b = generate( bases, 1, dir );
  auto const c = generate( bases, 4, dir );
  auto const d = generate( bases, 7, dir );
  std::filesystem::remove_all( dir );

  bool const same = a.s1 == b.s1 && a.s2 == b.s2 && a.s1 == c.s1 && a.s2 == c.s2 && a.s1 == d.s1 && a.s2 == d.s2;
  report( same && !a.records1.empty() && !a.records2.empty(), "pipeline determinism",
          fmt::format( "{} stage 1 and {} stage 2 records ({} + {} bytes); identical across 2 runs and 1/4/7 workers: {}",
                       a.records1.size(), a.records2.size(), a.s1.size(), a.s2.size(), same ? "yes" : "no" ) );

  std::vector<double> ratios, sub_nodes, aig_nodes, syn_nodes, pm_nodes;
  for ( auto const& r : a.records1 )
  {
    if ( r.label != 1 )
      continue;
    ratios.push_back( static_cast<double>( r.sub.size() ) / static_cast<double>( r.aig_circuit.size() ) );
    sub_nodes.push_back( static_cast<double>( r.sub.size() ) );
    aig_nodes.push_back( static_cast<double>( r.aig_circuit.size() ) );
    syn_nodes.push_back( static_cast<double>( r.syn.size() ) );
    pm_nodes.push_back( static_cast<double>( r.pm.cells.size() + r.pm.num_inputs ) );
  }
  std::sort( ratios.begin(), ratios.end() );
  auto const median = ratios[ratios.size() / 2];
  bool const band = ratios.front() >= 0.4 && ratios.back() <= 1.0 && median >= 0.6 && median <= 0.95;

  /* reference node-count averages per dataset split (sub, aig, syn, pm) */
  constexpr double reference[6][4] = { { 248, 320, 315, 179 }, { 218, 282, 278, 157 }, { 155, 203, 198, 108 },
                                       { 100, 132, 128, 69 },  { 126, 161, 156, 88 },  { 127, 163, 159, 89 } };
  double const ours[4] = { mean( sub_nodes ), mean( aig_nodes ), mean( syn_nodes ), mean( pm_nodes ) };
  bool magnitude = true;
  std::string columns;
  char const* names[4] = { "sub", "aig", "syn", "pm" };
  for ( int k = 0; k < 4; ++k )
  {
    double ref = 0;
    for ( auto const& row : reference )
      ref += row[k] / 6.0;
    auto const q = ours[k] / ref;
    magnitude = magnitude && q >= 0.1 && q <= 10.0;
    columns += fmt::format( "{}{} {:.1f} (ref {:.0f})", columns.empty() ? "" : ", ", names[k], ours[k], ref );
  }
  report( band && magnitude, "dataset shape sanity",
          fmt::format( "{} positives: sub/aig ratio min {:.3f} median {:.3f} max {:.3f} (band [0.4, 1.0], median in "
                       "[0.6, 0.95]); mean nodes {} (within 10x)",
                       ratios.size(), ratios.front(), median, ratios.back(), columns ) );
}

} // namespace

int main()
{
  try
  {
    auto const gs = corpus();
    equivalence_and_restructuring( gs );
    techmap_round_trip( gs );
    iso_oracle();
    property_suite();
    metric_identities();
    pipeline_checks( gs );
  }
  catch ( std::exception const& e )
  {
    fmt::print( "FAIL acceptance battery aborted: {}\n", e.what() );
    return 1;
  }
  fmt::print( "{} failed\n", failures );
  return failures == 0 ? 0 : 1;
}
