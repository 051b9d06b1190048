#pragma once

#include <funsub/aig.hpp>
#include <funsub/pm_netlist.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace funsub
{

inline constexpr unsigned records_version = 1;

/// Query subgraph paired with a candidate circuit in all three forms.
struct stage1_record
{
  aig sub;
  aig aig_circuit;
  aig syn;
  pm_netlist pm;
  int label = 0;
  std::string pair_id;
  std::string base_circuit_id;
  std::uint64_t seed = 0;

  friend bool operator==( stage1_record const&, stage1_record const& ) = default;
};

/// Query subgraph with per-cell boundary labels on a mapped netlist.
struct stage2_record
{
  aig sub;
  pm_netlist pm;
  std::vector<int> node_labels;
  std::string phi_digest;
  std::string pair_id;
  std::uint64_t seed = 0;

  friend bool operator==( stage2_record const&, stage2_record const& ) = default;
};

/// `funsub-recs v1 stage=<1|2>`
std::string records_header( int stage );

/*! Line-delimited records. Each line after the header is one compact JSON
  object with a fixed key order; see docs/formats.md for the schema. */
std::string write_records( std::vector<stage1_record> const& records );
std::string write_records( std::vector<stage2_record> const& records );

std::vector<stage1_record> parse_stage1_records( std::string_view text );
std::vector<stage2_record> parse_stage2_records( std::string_view text );

/// Stage number declared by a header line; throws on a foreign or
/// version-mismatched header.
int records_stage( std::string_view text );

void write_records( std::vector<stage1_record> const& records, std::filesystem::path const& path );
void write_records( std::vector<stage2_record> const& records, std::filesystem::path const& path );
std::vector<stage1_record> read_stage1_records( std::filesystem::path const& path );
std::vector<stage2_record> read_stage2_records( std::filesystem::path const& path );

} // namespace funsub
