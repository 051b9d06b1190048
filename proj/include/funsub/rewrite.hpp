#pragma once

#include <funsub/aig.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace funsub
{

enum class pass_kind
{
  strash,        ///< merge structurally identical nodes
  balance,       ///< rebuild AND supergates as minimum-depth trees
  factor,        ///< (a & b) | (a & c)  ->  a & (b | c)
  unfactor,      ///< a & (b | c)  ->  (a & b) | (a & c)
  demorgan_push, ///< !(p1 & p2) & !(q1 & q2)  ->  OR of the four products of complemented literals
  reassociate    ///< (x1 & x2) & y  ->  x1 & (x2 & y)  or  x2 & (x1 & y)
};

std::string_view to_string( pass_kind kind ) noexcept;
std::optional<pass_kind> parse_pass_kind( std::string_view name ) noexcept;

struct rewrite_pass
{
  pass_kind kind = pass_kind::strash;
  /// Fraction of the applicable sites rewritten per application (at least
  /// one). Ignored by strash and balance, which rewrite every site.
  double site_fraction = 0.1;
};

/*! \brief Applies one function-preserving pass.

  Sites are drawn uniformly from the applicable ones using `seed`. The result
  keeps the PI set (in order, as ids 0..n-1), has no NOT->NOT edge and no
  dead logic. A pass with no applicable site returns an equal-shaped copy.
*/
aig apply_pass( aig const& g, rewrite_pass const& pass, std::uint64_t seed );

/// Number of sites the pass could rewrite in `g`.
std::size_t count_sites( aig const& g, pass_kind kind );

struct flow
{
  std::string name;
  std::vector<rewrite_pass> passes;
  std::uint64_t seed = 0;
};

inline constexpr int default_max_retries = 10;

/// The five named flows: src_rw, src_rs, src_rws, resyn2rs, compress2rs.
std::span<std::string_view const> flow_names() noexcept;
/// Throws `error` for an unknown name.
flow named_flow( std::string_view name, std::uint64_t seed );

/*! \brief Runs the flow until the result is not isomorphic to `g`.

  Attempt i runs every pass with seeds derived from (flow.seed, i). Throws
  `restructure_error("cannot restructure")` after `max_retries` attempts.
*/
aig apply_flow( aig const& g, flow const& f, int max_retries = default_max_retries );

} // namespace funsub
