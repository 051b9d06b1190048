#include <funsub/text_io.hpp>

#include <funsub/error.hpp>
#include <funsub/validate.hpp>

#include <fmt/format.h>

#include <unordered_map>

namespace funsub
{

namespace
{

struct line
{
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> tokenize( std::string_view text )
{
  if ( auto const hash = text.find( '#' ); hash != std::string_view::npos )
    text = text.substr( 0, hash );
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while ( i < text.size() )
  {
    while ( i < text.size() && ( text[i] == ' ' || text[i] == '\t' || text[i] == '\r' ) )
      ++i;
    auto const start = i;
    while ( i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r' )
      ++i;
    if ( i > start )
      tokens.push_back( text.substr( start, i - start ) );
  }
  return tokens;
}

/// Non-empty statement lines, numbered from `first_line`.
std::vector<line> statements( std::string_view text, std::size_t first_line = 1 )
{
  std::vector<line> result;
  std::size_t number = first_line;
  std::size_t pos = 0;
  while ( pos <= text.size() )
  {
    auto const end = text.find( '\n', pos );
    auto const raw = text.substr( pos, end == std::string_view::npos ? std::string_view::npos : end - pos );
    if ( auto tokens = tokenize( raw ); !tokens.empty() )
      result.push_back( { number, std::move( tokens ) } );
    if ( end == std::string_view::npos )
      break;
    pos = end + 1;
    ++number;
  }
  return result;
}

aig build_aig( std::vector<line> const& lines, bool check )
{
  std::unordered_map<std::string_view, node_id> ids;
  std::size_t count = 0;
  for ( auto const& l : lines )
  {
    auto const& t = l.tokens;
    if ( t[0] == "out" )
      continue;
    auto const kind = parse_node_kind( t[0] );
    if ( !kind )
      throw parse_error( fmt::format( "unknown statement '{}'", t[0] ), l.number );
    if ( t.size() != 2 + arity( *kind ) )
      throw parse_error( fmt::format( "'{}' takes {} operands, got {}", t[0], 1 + arity( *kind ), t.size() - 1 ), l.number );
    if ( !ids.emplace( t[1], static_cast<node_id>( count ) ).second )
      throw parse_error( fmt::format( "name '{}' defined twice", t[1] ), l.number );
    ++count;
  }

  auto const resolve = [&]( std::string_view name, std::size_t number ) {
    auto it = ids.find( name );
    if ( it == ids.end() )
      throw parse_error( fmt::format( "undefined name '{}'", name ), number );
    return it->second;
  };

  aig g;
  bool have_output = false;
  for ( auto const& l : lines )
  {
    auto const& t = l.tokens;
    if ( t[0] == "out" )
    {
      if ( t.size() != 2 )
        throw parse_error( "'out' takes 1 operand", l.number );
      if ( have_output )
        throw parse_error( "second 'out' statement; circuits have a single output", l.number );
      g.set_output( resolve( t[1], l.number ) );
      have_output = true;
      continue;
    }
    std::vector<node_id> fanins;
    for ( std::size_t k = 2; k < t.size(); ++k )
      fanins.push_back( resolve( t[k], l.number ) );
    g.add_node( *parse_node_kind( t[0] ), std::move( fanins ) );
  }
  if ( !have_output )
    throw parse_error( "missing 'out' statement" );
  if ( check )
  {
    if ( auto const report = validate( g ); !report.empty() )
      throw parse_error( "invalid circuit:\n" + format_violations( report ) );
  }
  return g;
}

void append_aig( std::string& out, aig const& g, std::string_view indent )
{
  for ( node_id i = 0; i < g.size(); ++i )
  {
    out += indent;
    out += to_string( g.kind( i ) );
    out += fmt::format( " n{}", i );
    for ( auto f : g.fanins( i ) )
      out += fmt::format( " n{}", f );
    out += '\n';
  }
  if ( g.has_output() )
    out += fmt::format( "{}out n{}\n", indent, g.output() );
}

} // namespace

aig parse_aig( std::string_view text, bool check )
{
  return build_aig( statements( text ), check );
}

std::string write_aig( aig const& g )
{
  std::string out;
  append_aig( out, g, "" );
  return out;
}

cell_library parse_library( std::string_view text )
{
  std::vector<cell_type> cells;
  auto const lines = statements( text );
  for ( std::size_t i = 0; i < lines.size(); )
  {
    auto const& head = lines[i];
    if ( head.tokens[0] != "cell" || head.tokens.size() != 4 )
      throw parse_error( "expected 'cell <NAME> <arity> <table>'", head.number );
    cell_type cell;
    cell.name = std::string( head.tokens[1] );
    try
    {
      cell.arity = static_cast<unsigned>( std::stoul( std::string( head.tokens[2] ) ) );
    }
    catch ( std::exception const& )
    {
      throw parse_error( fmt::format( "bad arity '{}'", head.tokens[2] ), head.number );
    }
    cell.table = std::string( head.tokens[3] );
    if ( cell.table.find_first_not_of( "01" ) != std::string::npos )
      throw parse_error( fmt::format( "table '{}' is not a bit string", cell.table ), head.number );

    std::vector<line> body;
    ++i;
    while ( i < lines.size() && lines[i].tokens[0] != "end" )
    {
      if ( lines[i].tokens[0] == "cell" )
        throw parse_error( fmt::format( "cell {} is missing 'end'", cell.name ), lines[i].number );
      body.push_back( lines[i++] );
    }
    if ( i == lines.size() )
      throw parse_error( fmt::format( "cell {} is missing 'end'", cell.name ), head.number );
    ++i;
    try
    {
      cell.tmpl = build_aig( body, false );
    }
    catch ( parse_error const& e )
    {
      throw parse_error( fmt::format( "library corrupt: {}: {}", cell.name, e.what() ) );
    }
    cells.push_back( std::move( cell ) );
  }
  return cell_library( std::move( cells ) );
}

std::string write_library( cell_library const& lib )
{
  std::string out;
  for ( auto const& c : lib.cells() )
  {
    out += fmt::format( "cell {} {} {}\n", c.name, c.arity, c.table );
    append_aig( out, c.tmpl, "  " );
    out += "end\n";
  }
  return out;
}

pm_netlist parse_pm( std::string_view text, cell_library const& lib, bool check )
{
  std::unordered_map<std::string_view, pm_signal> names;
  auto const lines = statements( text );
  pm_netlist pm;
  for ( auto const& l : lines )
  {
    auto const& t = l.tokens;
    if ( t[0] == "input" )
    {
      if ( t.size() != 2 )
        throw parse_error( "'input' takes 1 operand", l.number );
      if ( !names.emplace( t[1], pm_signal::input( pm.num_inputs++ ) ).second )
        throw parse_error( fmt::format( "name '{}' defined twice", t[1] ), l.number );
    }
    else if ( t[0] == "cell" )
    {
      if ( t.size() < 3 )
        throw parse_error( "'cell' needs a name and a type", l.number );
      if ( !names.emplace( t[1], pm_signal::cell( static_cast<cell_id>( pm.cells.size() ) ) ).second )
        throw parse_error( fmt::format( "name '{}' defined twice", t[1] ), l.number );
      pm.cells.push_back( { std::string( t[2] ), {} } );
    }
    else if ( t[0] != "out" )
      throw parse_error( fmt::format( "unknown statement '{}'", t[0] ), l.number );
  }

  auto const resolve = [&]( std::string_view name, std::size_t number ) {
    auto it = names.find( name );
    if ( it == names.end() )
      throw parse_error( fmt::format( "undefined name '{}'", name ), number );
    return it->second;
  };

  bool have_output = false;
  cell_id next = 0;
  for ( auto const& l : lines )
  {
    auto const& t = l.tokens;
    if ( t[0] == "cell" )
    {
      auto& cell = pm.cells[next++];
      auto const* type = lib.find( cell.type );
      if ( !type )
        throw parse_error( fmt::format( "unknown cell type '{}'", cell.type ), l.number );
      if ( t.size() - 3 != type->arity )
        throw parse_error( fmt::format( "{} takes {} fanins, got {}", cell.type, type->arity, t.size() - 3 ), l.number );
      for ( std::size_t k = 3; k < t.size(); ++k )
        cell.fanins.push_back( resolve( t[k], l.number ) );
    }
    else if ( t[0] == "out" )
    {
      if ( t.size() != 2 )
        throw parse_error( "'out' takes 1 operand", l.number );
      if ( have_output )
        throw parse_error( "second 'out' statement; netlists have a single output", l.number );
      auto const s = resolve( t[1], l.number );
      if ( s.is_input )
        throw parse_error( "the output must be a cell", l.number );
      pm.output = s.index;
      have_output = true;
    }
  }
  if ( !have_output )
    throw parse_error( "missing 'out' statement" );
  if ( check )
  {
    if ( auto const report = validate( pm, lib ); !report.empty() )
      throw parse_error( "invalid netlist:\n" + format_violations( report ) );
  }
  return pm;
}

std::string write_pm( pm_netlist const& pm )
{
  std::string out;
  for ( std::uint32_t i = 0; i < pm.num_inputs; ++i )
    out += fmt::format( "input i{}\n", i );
  for ( cell_id c = 0; c < pm.cells.size(); ++c )
  {
    out += fmt::format( "cell c{} {}", c, pm.cells[c].type );
    for ( auto const& s : pm.cells[c].fanins )
      out += fmt::format( " {}{}", s.is_input ? 'i' : 'c', s.index );
    out += '\n';
  }
  out += fmt::format( "out c{}\n", pm.output );
  return out;
}

} // namespace funsub
