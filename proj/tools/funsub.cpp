#include <funsub/cell_library.hpp>
#include <funsub/dataset.hpp>
#include <funsub/error.hpp>
#include <funsub/file_util.hpp>
#include <funsub/iso_match.hpp>
#include <funsub/metrics.hpp>
#include <funsub/properties.hpp>
#include <funsub/random_aig.hpp>
#include <funsub/records.hpp>
#include <funsub/rewrite.hpp>
#include <funsub/sampler.hpp>
#include <funsub/simulate.hpp>
#include <funsub/techmap.hpp>
#include <funsub/text_io.hpp>
#include <funsub/validate.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

using namespace funsub;
namespace fs = std::filesystem;

namespace
{

constexpr int exit_data = 1;
constexpr int exit_usage = 2;

struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

bool ends_with( std::string const& s, std::string_view suffix )
{
  return s.size() >= suffix.size() && s.compare( s.size() - suffix.size(), suffix.size(), suffix ) == 0;
}

/* errors raised while reading a file carry its name */
template<typename Fn>
auto with_file( fs::path const& path, Fn&& fn ) -> decltype( fn( std::string{} ) )
{
  auto const text = read_file( path );
  try
  {
    return fn( text );
  }
  catch ( error const& e )
  {
    throw error( fmt::format( "{}: {}", path.string(), e.what() ) );
  }
}

aig load_aig( fs::path const& path )
{
  return with_file( path, []( std::string const& t ) { return parse_aig( t ); } );
}

cell_library load_library( std::string const& flag )
{
  std::string path = flag;
  if ( path.empty() )
  {
    if ( auto const* env = std::getenv( "FUNSUB_LIB" ); env && *env )
      path = env;
  }
  if ( path.empty() )
    return builtin_library();
  return with_file( path, []( std::string const& t ) { return parse_library( t ); } );
}

pm_netlist load_pm( fs::path const& path, cell_library const& lib )
{
  return with_file( path, [&]( std::string const& t ) { return parse_pm( t, lib ); } );
}

std::pair<unsigned, unsigned> parse_uint_range( std::string const& text, std::string_view flag )
{
  auto const dots = text.find( ".." );
  try
  {
    if ( dots == std::string::npos )
    {
      auto const v = static_cast<unsigned>( std::stoul( text ) );
      return { v, v };
    }
    return { static_cast<unsigned>( std::stoul( text.substr( 0, dots ) ) ),
             static_cast<unsigned>( std::stoul( text.substr( dots + 2 ) ) ) };
  }
  catch ( std::exception const& )
  {
    throw usage_error( fmt::format( "{}: expected N or LO..HI, got '{}'", flag, text ) );
  }
}

std::pair<double, double> parse_real_range( std::string const& text, std::string_view flag )
{
  auto const dots = text.find( ".." );
  if ( dots == std::string::npos )
    throw usage_error( fmt::format( "{}: expected LO..HI, got '{}'", flag, text ) );
  try
  {
    return { std::stod( text.substr( 0, dots ) ), std::stod( text.substr( dots + 2 ) ) };
  }
  catch ( std::exception const& )
  {
    throw usage_error( fmt::format( "{}: expected LO..HI, got '{}'", flag, text ) );
  }
}

std::vector<fs::path> files_with_suffix( fs::path const& dir, std::string_view suffix )
{
  if ( !fs::is_directory( dir ) )
    throw error( fmt::format( "{}: not a directory", dir.string() ) );
  std::vector<fs::path> files;
  for ( auto const& entry : fs::directory_iterator( dir ) )
  {
    if ( entry.is_regular_file() && ends_with( entry.path().filename().string(), suffix ) )
      files.push_back( entry.path() );
  }
  std::sort( files.begin(), files.end() );
  return files;
}

std::string stem_of( fs::path const& p, std::string_view suffix )
{
  auto name = p.filename().string();
  return name.substr( 0, name.size() - suffix.size() );
}

void print_embedding( embedding const& m )
{
  for ( std::size_t q = 0; q < m.image.size(); ++q )
    fmt::print( "{} {}\n", q, m.image[q] );
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Functional subgraph matching toolkit" };
  app.require_subcommand( 1 );
  app.set_version_flag( "--version", "funsub 1.0" );

  std::string lib_path;
  auto add_lib = [&]( CLI::App* sub ) {
    sub->add_option( "--lib", lib_path, "Cell library (.lib.txt); defaults to $FUNSUB_LIB, then the built-in library" );
  };

  /* validate */
  auto* validate_cmd = app.add_subcommand( "validate", "Check a circuit, netlist, library or records file" );
  std::string validate_in;
  validate_cmd->add_option( "file", validate_in, "Input file (.aig.txt, .pm.txt, .lib.txt, .s1.recs, .s2.recs)" )->required();
  add_lib( validate_cmd );

  /* synth */
  auto* synth_cmd = app.add_subcommand( "synth", "Restructure a circuit with a named flow" );
  std::string synth_in, synth_out, synth_flow = "src_rw";
  std::uint64_t seed = 0;
  int retries = default_max_retries;
  synth_cmd->add_option( "--in", synth_in, "Input circuit" )->required();
  synth_cmd->add_option( "--out", synth_out, "Output circuit" )->required();
  synth_cmd->add_option( "--flow", synth_flow, "src_rw, src_rs, src_rws, resyn2rs or compress2rs" )->capture_default_str();
  synth_cmd->add_option( "--seed", seed, "Random seed" )->required();
  synth_cmd->add_option( "--retries", retries, "Attempts before giving up" )->capture_default_str();

  /* map */
  auto* map_cmd = app.add_subcommand( "map", "Map a circuit onto library cells" );
  std::string map_in, map_out;
  map_cmd->add_option( "--in", map_in, "Input circuit" )->required();
  map_cmd->add_option( "--out", map_out, "Output netlist (.pm.txt)" )->required();
  add_lib( map_cmd );

  /* expand */
  auto* expand_cmd = app.add_subcommand( "expand", "Expand a netlist back into a circuit" );
  std::string expand_in, expand_out, expand_phi;
  expand_cmd->add_option( "--in", expand_in, "Input netlist" )->required();
  expand_cmd->add_option( "--out", expand_out, "Output circuit" )->required();
  expand_cmd->add_option( "--phi", expand_phi, "Write the node map here" );
  add_lib( expand_cmd );

  /* sample */
  auto* sample_cmd = app.add_subcommand( "sample", "Sample a random subgraph" );
  std::string sample_in, sample_out, rho = "0.6..0.95";
  sample_cmd->add_option( "--in", sample_in, "Input circuit" )->required();
  sample_cmd->add_option( "--out", sample_out, "Output subgraph" )->required();
  sample_cmd->add_option( "--seed", seed, "Random seed" )->required();
  sample_cmd->add_option( "--rho", rho, "Target size fraction range" )->capture_default_str();

  /* gen */
  auto* gen_cmd = app.add_subcommand( "gen", "Generate a Stage 1 or Stage 2 dataset" );
  int stage = 1;
  std::string gen_in, gen_out, k_range = "8..12";
  double ratio = 1.0;
  unsigned jobs = 1;
  bool no_partition = false;
  gen_cmd->add_option( "--stage", stage, "1 or 2" )->required()->check( CLI::IsMember( { 1, 2 } ) );
  gen_cmd->add_option( "--in", gen_in, "Directory of .aig.txt (and, for stage 2, .pm.txt) files" )->required();
  gen_cmd->add_option( "--out", gen_out, "Output records file" )->required();
  gen_cmd->add_option( "--seed", seed, "Random seed" )->required();
  gen_cmd->add_option( "--ratio", ratio, "Negatives per positive (stage 1)" )->capture_default_str()->check( CLI::NonNegativeNumber );
  gen_cmd->add_option( "--k", k_range, "k-hop partition depth range" )->capture_default_str();
  gen_cmd->add_option( "--rho", rho, "Subgraph size fraction range" )->capture_default_str();
  gen_cmd->add_option( "--jobs", jobs, "Worker threads (output does not depend on it)" )->capture_default_str();
  gen_cmd->add_flag( "--no-partition", no_partition, "Use input circuits as bases without k-hop partitioning" );
  add_lib( gen_cmd );

  /* match */
  auto* match_cmd = app.add_subcommand( "match", "Find a structural embedding of a query into a target" );
  std::string query_in, target_in;
  bool iso = false;
  std::uint64_t max_steps = 0;
  match_cmd->add_option( "--query", query_in, "Query circuit" )->required();
  match_cmd->add_option( "--target", target_in, "Target circuit" )->required();
  match_cmd->add_flag( "--iso", iso, "Test isomorphism instead" );
  match_cmd->add_option( "--max-steps", max_steps, "Search budget (0 = unlimited)" )->capture_default_str();

  /* check-equiv */
  auto* equiv_cmd = app.add_subcommand( "check-equiv", "Check functional equivalence (PIs paired by position)" );
  std::string equiv_a, equiv_b;
  bool force_signature = false;
  std::size_t patterns = 4096;
  std::uint64_t sig_seed = equiv_options{}.seed;
  equiv_cmd->add_option( "a", equiv_a, "First circuit" )->required();
  equiv_cmd->add_option( "b", equiv_b, "Second circuit" )->required();
  equiv_cmd->add_flag( "--signature", force_signature, "Use random signatures even for small circuits" );
  equiv_cmd->add_option( "--patterns", patterns, "Signature pattern count" )->capture_default_str();
  equiv_cmd->add_option( "--seed", sig_seed, "Signature seed" );

  /* eval */
  auto* eval_cmd = app.add_subcommand( "eval", "Score predictions against a records file" );
  std::string pred_in, data_in, report_out;
  double threshold = 0.5;
  eval_cmd->add_option( "--stage", stage, "1 or 2" )->required()->check( CLI::IsMember( { 1, 2 } ) );
  eval_cmd->add_option( "--pred", pred_in, "Predictions, one probability per line" )->required();
  eval_cmd->add_option( "--data", data_in, "Records file" )->required();
  eval_cmd->add_option( "--report", report_out, "Report file (JSON); printed when omitted" );
  eval_cmd->add_option( "--threshold", threshold, "Decision threshold" )->capture_default_str();

  /* selfcheck */
  auto* self_cmd = app.add_subcommand( "selfcheck", "Run the property battery on generated circuits" );
  std::size_t instances = 100;
  self_cmd->add_option( "--n", instances, "Instance count" )->capture_default_str();
  self_cmd->add_option( "--seed", seed, "Random seed" )->required();
  self_cmd->add_option( "--jobs", jobs, "Worker threads" )->capture_default_str();

  /* random */
  auto* random_cmd = app.add_subcommand( "random", "Generate a random circuit" );
  std::string random_out, pis_range = "6..12", nodes_range = "30..200";
  random_cmd->add_option( "--out", random_out, "Output circuit" )->required();
  random_cmd->add_option( "--seed", seed, "Random seed" )->required();
  random_cmd->add_option( "--pis", pis_range, "PI count range" )->capture_default_str();
  random_cmd->add_option( "--nodes", nodes_range, "Node count range" )->capture_default_str();

  /* lib */
  auto* lib_cmd = app.add_subcommand( "lib", "Print the built-in cell library" );
  std::string lib_out;
  lib_cmd->add_option( "--out", lib_out, "Write to a file instead of stdout" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e );
    return code == 0 ? 0 : exit_usage;
  }

  try
  {
    if ( *validate_cmd )
    {
      std::string report;
      if ( ends_with( validate_in, ".s1.recs" ) )
        fmt::print( "{} stage 1 records\n", read_stage1_records( validate_in ).size() );
      else if ( ends_with( validate_in, ".s2.recs" ) )
        fmt::print( "{} stage 2 records\n", read_stage2_records( validate_in ).size() );
      else if ( ends_with( validate_in, ".lib.txt" ) )
        fmt::print( "{} cells\n", load_library( validate_in ).cells().size() );
      else if ( ends_with( validate_in, ".pm.txt" ) )
      {
        auto const lib = load_library( lib_path );
        auto const pm = with_file( validate_in, [&]( std::string const& t ) { return parse_pm( t, lib, false ); } );
        report = format_violations( validate( pm, lib ) );
      }
      else
      {
        auto const g = with_file( validate_in, []( std::string const& t ) { return parse_aig( t, false ); } );
        report = format_violations( validate( g ) );
      }
      if ( !report.empty() )
      {
        fmt::print( stderr, "{}: invalid\n{}", validate_in, report );
        return exit_data;
      }
      fmt::print( "ok\n" );
    }
    else if ( *synth_cmd )
    {
      auto const g = load_aig( synth_in );
      auto const result = apply_flow( g, named_flow( synth_flow, seed ), retries );
      write_file_atomic( synth_out, write_aig( result ) );
    }
    else if ( *map_cmd )
    {
      auto const lib = load_library( lib_path );
      write_file_atomic( map_out, write_pm( map_to_cells( load_aig( map_in ), lib ).pm ) );
    }
    else if ( *expand_cmd )
    {
      auto const lib = load_library( lib_path );
      auto const e = expand( load_pm( expand_in, lib ), lib );
      write_file_atomic( expand_out, write_aig( e.circuit ) );
      if ( !expand_phi.empty() )
        write_file_atomic( expand_phi, write_node_map( e.map ) );
    }
    else if ( *sample_cmd )
    {
      sample_params params;
      std::tie( params.rho_min, params.rho_max ) = parse_real_range( rho, "--rho" );
      write_file_atomic( sample_out, write_aig( sample_with_retry( load_aig( sample_in ), seed, params ).circuit ) );
    }
    else if ( *gen_cmd )
    {
      auto const lib = load_library( lib_path );
      gen_options options;
      std::tie( options.sampling.k_min, options.sampling.k_max ) = parse_uint_range( k_range, "--k" );
      std::tie( options.sampling.rho_min, options.sampling.rho_max ) = parse_real_range( rho, "--rho" );
      options.ratio = ratio;
      options.jobs = jobs == 0 ? std::max( 1u, std::thread::hardware_concurrency() ) : jobs;

      std::vector<base_circuit> circuits;
      for ( auto const& p : files_with_suffix( gen_in, ".aig.txt" ) )
        circuits.push_back( { stem_of( p, ".aig.txt" ), load_aig( p ) } );
      auto const bases = no_partition ? circuits : partition_bases( circuits, options.sampling, seed );

      if ( stage == 1 )
      {
        auto const records = gen_stage1( bases, lib, seed, options );
        write_records( records, gen_out );
        fmt::print( "{} records from {} bases\n", records.size(), bases.size() );
      }
      else
      {
        std::vector<named_netlist> pms;
        for ( auto const& p : files_with_suffix( gen_in, ".pm.txt" ) )
          pms.push_back( { stem_of( p, ".pm.txt" ), load_pm( p, lib ) } );
        for ( auto const& b : bases )
        {
          if ( !b.circuit.is_pi( b.circuit.output() ) )
            pms.push_back( { b.id, map_to_cells( b.circuit, lib ).pm } );
        }
        auto const records = gen_stage2( pms, lib, seed, options );
        write_records( records, gen_out );
        fmt::print( "{} records from {} netlists\n", records.size(), pms.size() );
      }
    }
    else if ( *match_cmd )
    {
      auto const q = load_aig( query_in );
      auto const g = load_aig( target_in );
      if ( iso )
      {
        fmt::print( "{}\n", is_isomorphic( q, g ) ? "isomorphic" : "not isomorphic" );
      }
      else
      {
        match_options options;
        options.max_steps = max_steps;
        auto const r = match( q, g, options );
        switch ( r.status )
        {
        case match_status::found:
          fmt::print( "found\n" );
          print_embedding( *r.mapping );
          break;
        case match_status::none:
          fmt::print( "none\n" );
          break;
        case match_status::aborted:
          fmt::print( "aborted after {} steps\n", r.steps );
          break;
        }
      }
    }
    else if ( *equiv_cmd )
    {
      auto const a = load_aig( equiv_a );
      auto const b = load_aig( equiv_b );
      if ( a.num_pis() != b.num_pis() )
        throw error( fmt::format( "PI counts differ ({} vs {})", a.num_pis(), b.num_pis() ) );
      equiv_options options;
      options.force_signature = force_signature;
      options.patterns = patterns;
      options.seed = sig_seed;
      auto const r = equiv( a, b, positional_alignment( a, b ), options );
      fmt::print( "{}\n", to_string( r.outcome ) );
      if ( r.outcome == verdict::not_equivalent )
      {
        std::string w;
        for ( bool bit : r.witness )
          w += bit ? '1' : '0';
        fmt::print( "witness {}\n", w );
        return exit_data;
      }
    }
    else if ( *eval_cmd )
    {
      auto const preds = with_file( pred_in, []( std::string const& t ) { return parse_predictions( t ); } );
      eval_report report;
      if ( stage == 1 )
      {
        std::vector<int> labels;
        for ( auto const& r : read_stage1_records( data_in ) )
          labels.push_back( r.label );
        report = evaluate_stage1( preds, labels, threshold );
      }
      else
      {
        std::vector<std::vector<int>> labels;
        for ( auto const& r : read_stage2_records( data_in ) )
          labels.push_back( r.node_labels );
        report = evaluate_stage2( preds, labels, threshold );
      }
      auto const text = write_report( report );
      if ( report_out.empty() )
        fmt::print( "{}", text );
      else
        write_file_atomic( report_out, text );
    }
    else if ( *self_cmd )
    {
      auto const r = run_selfcheck( instances, seed, jobs == 0 ? std::max( 1u, std::thread::hardware_concurrency() ) : jobs );
      fmt::print( "reflexivity  {}/{}\n", r.reflexivity_passed, r.instances );
      fmt::print( "preservation {}/{}\n", r.preservation_passed, r.instances );
      fmt::print( "transitivity {}/{}\n", r.transitivity_passed, r.instances );
      fmt::print( "controls     {}/{} rejected\n", r.controls_rejected, r.controls_run );
      for ( auto const& f : r.failures )
        fmt::print( stderr, "{}\n", f );
      return r.ok() ? 0 : exit_data;
    }
    else if ( *random_cmd )
    {
      random_aig_params params;
      std::tie( params.pis_min, params.pis_max ) = parse_uint_range( pis_range, "--pis" );
      std::tie( params.nodes_min, params.nodes_max ) = parse_uint_range( nodes_range, "--nodes" );
      write_file_atomic( random_out, write_aig( random_aig( params, seed ) ) );
    }
    else if ( *lib_cmd )
    {
      auto const text = write_library( builtin_library() );
      if ( lib_out.empty() )
        fmt::print( "{}", text );
      else
        write_file_atomic( lib_out, text );
    }
  }
  catch ( usage_error const& e )
  {
    fmt::print( stderr, "funsub: {}\n", e.what() );
    return exit_usage;
  }
  catch ( std::exception const& e )
  {
    fmt::print( stderr, "funsub: {}\n", e.what() );
    return exit_data;
  }
  return 0;
}
