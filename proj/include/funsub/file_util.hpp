#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace funsub
{

std::string read_file( std::filesystem::path const& path );

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic( std::filesystem::path const& path, std::string_view contents );

} // namespace funsub
