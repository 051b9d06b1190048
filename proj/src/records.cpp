#include <funsub/records.hpp>

#include <funsub/error.hpp>
#include <funsub/file_util.hpp>
#include <funsub/validate.hpp>

#include <fmt/format.h>
#include <json.hpp>

namespace funsub
{

using json = nlohmann::ordered_json;

namespace
{

json aig_to_json( aig const& g )
{
  json nodes = json::array();
  for ( auto const& n : g.nodes() )
  {
    json entry = json::array( { std::string( to_string( n.kind ) ) } );
    for ( auto f : n.fanins )
      entry.push_back( f );
    nodes.push_back( std::move( entry ) );
  }
  return json{ { "nodes", std::move( nodes ) }, { "out", g.output() } };
}

aig aig_from_json( json const& j )
{
  aig g;
  for ( auto const& entry : j.at( "nodes" ) )
  {
    auto const kind = parse_node_kind( entry.at( 0 ).get<std::string>() );
    if ( !kind )
      throw error( "unknown node kind" );
    std::vector<node_id> fanins;
    for ( std::size_t k = 1; k < entry.size(); ++k )
      fanins.push_back( entry.at( k ).get<node_id>() );
    g.add_node( *kind, std::move( fanins ) );
  }
  g.set_output( j.at( "out" ).get<node_id>() );
  expect_valid( g );
  return g;
}

json pm_to_json( pm_netlist const& pm )
{
  json cells = json::array();
  for ( auto const& c : pm.cells )
  {
    json entry = json::array( { c.type } );
    for ( auto const& s : c.fanins )
      entry.push_back( s.is_input ? s.index : pm.num_inputs + s.index );
    cells.push_back( std::move( entry ) );
  }
  return json{ { "inputs", pm.num_inputs }, { "cells", std::move( cells ) }, { "out", pm.output } };
}

pm_netlist pm_from_json( json const& j )
{
  pm_netlist pm;
  pm.num_inputs = j.at( "inputs" ).get<std::uint32_t>();
  auto const& cells = j.at( "cells" );
  for ( auto const& entry : cells )
  {
    pm_cell c{ entry.at( 0 ).get<std::string>(), {} };
    for ( std::size_t k = 1; k < entry.size(); ++k )
    {
      auto const ref = entry.at( k ).get<std::uint32_t>();
      if ( ref < pm.num_inputs )
        c.fanins.push_back( pm_signal::input( ref ) );
      else if ( ref - pm.num_inputs < cells.size() )
        c.fanins.push_back( pm_signal::cell( ref - pm.num_inputs ) );
      else
        throw error( fmt::format( "fanin reference {} out of range", ref ) );
    }
    pm.cells.push_back( std::move( c ) );
  }
  pm.output = j.at( "out" ).get<cell_id>();
  if ( pm.output >= pm.cells.size() )
    throw error( "output cell out of range" );
  return pm;
}

json to_json( stage1_record const& r )
{
  return json{ { "pair_id", r.pair_id }, { "base_circuit_id", r.base_circuit_id }, { "seed", r.seed }, { "label", r.label },
               { "sub", aig_to_json( r.sub ) }, { "aig", aig_to_json( r.aig_circuit ) }, { "syn", aig_to_json( r.syn ) },
               { "pm", pm_to_json( r.pm ) } };
}

json to_json( stage2_record const& r )
{
  return json{ { "pair_id", r.pair_id }, { "seed", r.seed }, { "phi_digest", r.phi_digest }, { "sub", aig_to_json( r.sub ) },
               { "pm", pm_to_json( r.pm ) }, { "node_labels", r.node_labels } };
}

stage1_record stage1_from_json( json const& j )
{
  stage1_record r;
  r.pair_id = j.at( "pair_id" ).get<std::string>();
  r.base_circuit_id = j.at( "base_circuit_id" ).get<std::string>();
  r.seed = j.at( "seed" ).get<std::uint64_t>();
  r.label = j.at( "label" ).get<int>();
  if ( r.label != 0 && r.label != 1 )
    throw error( "label must be 0 or 1" );
  r.sub = aig_from_json( j.at( "sub" ) );
  r.aig_circuit = aig_from_json( j.at( "aig" ) );
  r.syn = aig_from_json( j.at( "syn" ) );
  r.pm = pm_from_json( j.at( "pm" ) );
  return r;
}

stage2_record stage2_from_json( json const& j )
{
  stage2_record r;
  r.pair_id = j.at( "pair_id" ).get<std::string>();
  r.seed = j.at( "seed" ).get<std::uint64_t>();
  r.phi_digest = j.at( "phi_digest" ).get<std::string>();
  r.sub = aig_from_json( j.at( "sub" ) );
  r.pm = pm_from_json( j.at( "pm" ) );
  r.node_labels = j.at( "node_labels" ).get<std::vector<int>>();
  if ( r.node_labels.size() != r.pm.cells.size() )
    throw error( fmt::format( "{} labels for {} cells", r.node_labels.size(), r.pm.cells.size() ) );
  return r;
}

template<typename Record>
std::string write_all( std::vector<Record> const& records, int stage )
{
  std::string out = records_header( stage ) + '\n';
  for ( auto const& r : records )
  {
    out += to_json( r ).dump();
    out += '\n';
  }
  return out;
}

template<typename Record, typename FromJson>
std::vector<Record> parse_all( std::string_view text, int stage, FromJson&& from_json )
{
  auto const declared = records_stage( text );
  if ( declared != stage )
    throw error( fmt::format( "expected stage {} records, file holds stage {}", stage, declared ) );

  std::vector<Record> records;
  auto pos = text.find( '\n' ) + 1;
  std::size_t index = 0;
  while ( pos < text.size() )
  {
    auto const end = text.find( '\n', pos );
    if ( end == std::string_view::npos )
      throw error( fmt::format( "record {} (line {}) is truncated", index, index + 2 ) );
    auto const line = text.substr( pos, end - pos );
    try
    {
      records.push_back( from_json( json::parse( line ) ) );
    }
    catch ( std::exception const& e )
    {
      throw error( fmt::format( "record {} (line {}) is malformed: {}", index, index + 2, e.what() ) );
    }
    pos = end + 1;
    ++index;
  }
  return records;
}

} // namespace

std::string records_header( int stage )
{
  return fmt::format( "funsub-recs v{} stage={}", records_version, stage );
}

int records_stage( std::string_view text )
{
  auto const end = text.find( '\n' );
  if ( end == std::string_view::npos )
    throw error( "records file has no header line" );
  auto const header = text.substr( 0, end );
  constexpr std::string_view magic = "funsub-recs v";
  if ( header.substr( 0, magic.size() ) != magic )
    throw error( fmt::format( "not a records file (header '{}')", header ) );
  auto const rest = header.substr( magic.size() );
  auto const space = rest.find( ' ' );
  auto const version = rest.substr( 0, space );
  if ( version != std::to_string( records_version ) )
    throw error( fmt::format( "records version mismatch: expected v{}, found v{}", records_version, version ) );
  if ( space == std::string_view::npos || ( rest.substr( space + 1 ) != "stage=1" && rest.substr( space + 1 ) != "stage=2" ) )
    throw error( fmt::format( "bad records header '{}'", header ) );
  return rest.back() - '0';
}

std::string write_records( std::vector<stage1_record> const& records )
{
  return write_all( records, 1 );
}

std::string write_records( std::vector<stage2_record> const& records )
{
  return write_all( records, 2 );
}

std::vector<stage1_record> parse_stage1_records( std::string_view text )
{
  return parse_all<stage1_record>( text, 1, stage1_from_json );
}

std::vector<stage2_record> parse_stage2_records( std::string_view text )
{
  return parse_all<stage2_record>( text, 2, stage2_from_json );
}

void write_records( std::vector<stage1_record> const& records, std::filesystem::path const& path )
{
  write_file_atomic( path, write_records( records ) );
}

void write_records( std::vector<stage2_record> const& records, std::filesystem::path const& path )
{
  write_file_atomic( path, write_records( records ) );
}

std::vector<stage1_record> read_stage1_records( std::filesystem::path const& path )
{
  try
  {
    return parse_stage1_records( read_file( path ) );
  }
  catch ( error const& e )
  {
    throw error( fmt::format( "{}: {}", path.string(), e.what() ) );
  }
}

std::vector<stage2_record> read_stage2_records( std::filesystem::path const& path )
{
  try
  {
    return parse_stage2_records( read_file( path ) );
  }
  catch ( error const& e )
  {
    throw error( fmt::format( "{}: {}", path.string(), e.what() ) );
  }
}

} // namespace funsub
