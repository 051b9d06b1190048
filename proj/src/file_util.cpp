#include <funsub/file_util.hpp>

#include <funsub/error.hpp>

#include <fmt/format.h>

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace funsub
{

std::string read_file( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw error( fmt::format( "{}: cannot open for reading", path.string() ) );
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic( std::filesystem::path const& path, std::string_view contents )
{
  auto tmp = path;
  tmp += fmt::format( ".tmp{}", ::getpid() );
  {
    std::ofstream out( tmp, std::ios::binary | std::ios::trunc );
    if ( !out )
      throw error( fmt::format( "{}: cannot open for writing", tmp.string() ) );
    out.write( contents.data(), static_cast<std::streamsize>( contents.size() ) );
    out.flush();
    if ( !out )
      throw error( fmt::format( "{}: write failed", tmp.string() ) );
  }
  std::error_code ec;
  std::filesystem::rename( tmp, path, ec );
  if ( ec )
  {
    std::filesystem::remove( tmp );
    throw error( fmt::format( "{}: cannot rename into place: {}", path.string(), ec.message() ) );
  }
}

} // namespace funsub
