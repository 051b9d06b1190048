#pragma once

#include <funsub/aig.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace funsub
{

/// Largest PI count handled by exhaustive simulation (2^16 rows).
inline constexpr std::size_t exhaustive_pi_cap = 16;
/// Smallest pattern count accepted for random signatures.
inline constexpr std::size_t min_signature_patterns = 1024;

/*! \brief Exhaustive output table of a circuit.

  Row r assigns bit k of r to `input_order[k]` (the first input is the least
  significant). Bits are packed 64 rows per word, row 0 in bit 0 of word 0.
*/
struct truth_table
{
  std::vector<node_id> input_order;
  std::vector<std::uint64_t> words;

  std::size_t num_vars() const noexcept { return input_order.size(); }
  std::size_t num_rows() const noexcept { return std::size_t{ 1 } << input_order.size(); }
  bool bit( std::size_t row ) const noexcept { return ( words[row >> 6] >> ( row & 63 ) ) & 1u; }
  std::size_t count_ones() const noexcept;

  /// '0'/'1' characters, row 0 first.
  std::string to_string() const;

  /// Compares output bits only, not input ids.
  bool same_function( truth_table const& other ) const noexcept { return words == other.words; }
};

/// One output bit per random pattern.
struct signature
{
  std::vector<node_id> input_order;
  std::uint64_t seed = 0;
  std::size_t pattern_count = 0;
  std::vector<std::uint64_t> words;

  bool bit( std::size_t pattern ) const noexcept { return ( words[pattern >> 6] >> ( pattern & 63 ) ) & 1u; }
  std::size_t count_ones() const noexcept;
};

/*! \brief Bit-parallel simulation.

  `pi_words[k]` holds the stimulus for `input_order[k]`; all stimulus vectors
  must have the same length. Returns one word vector per node id.
*/
std::vector<std::vector<std::uint64_t>> simulate( aig const& g, std::span<node_id const> input_order,
                                                  std::vector<std::vector<std::uint64_t>> const& pi_words );

/// Throws `error("use signature")` beyond `exhaustive_pi_cap` inputs.
truth_table compute_truth_table( aig const& g, std::span<node_id const> input_order );
truth_table compute_truth_table( aig const& g );

/*! \brief Random-pattern fingerprint.

  Stimulus words are drawn from `splitmix64(seed)` in word-major order: for
  each 64-pattern word w, one draw per input in `input_order` order. Bits past
  `pattern_count` in the final word are cleared. The default input order is
  ascending PI id.
*/
signature random_signature( aig const& g, std::uint64_t seed, std::size_t pattern_count );
signature random_signature( aig const& g, std::span<node_id const> input_order, std::uint64_t seed,
                            std::size_t pattern_count );

/// Evaluates the output under one assignment (`values[k]` for `input_order[k]`).
bool evaluate( aig const& g, std::span<node_id const> input_order, std::span<bool const> values );

/// PI correspondence (a-side PI, b-side PI).
using pi_alignment = std::vector<std::pair<node_id, node_id>>;

/// Pairs the k-th PI of `a` with the k-th PI of `b` (ascending ids).
pi_alignment positional_alignment( aig const& a, aig const& b );

enum class verdict
{
  equivalent,
  not_equivalent,
  probably_equivalent
};

struct equiv_result
{
  verdict outcome = verdict::equivalent;
  /// For not_equivalent: value of each aligned PI pair, in alignment order.
  std::vector<bool> witness;
};

struct equiv_options
{
  bool force_signature = false;
  std::uint64_t seed = 0x5eed5eed5eed5eedull;
  std::size_t patterns = 4096;
};

/*! \brief Functional equivalence under an explicit PI correspondence.

  Up to `exhaustive_pi_cap` inputs the answer is definitive. Beyond it (or
  when forced) random signatures are compared and the answer is either
  not_equivalent with a witness or probably_equivalent. Throws `error` if the
  alignment is not a bijection between the PI sets.
*/
equiv_result equiv( aig const& a, aig const& b, pi_alignment const& alignment, equiv_options const& options = {} );

/// Convenience: positional alignment, true unless a witness was found.
bool functionally_equal( aig const& a, aig const& b );

std::string_view to_string( verdict v ) noexcept;

} // namespace funsub
