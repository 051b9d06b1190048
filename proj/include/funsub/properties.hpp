#pragma once

#include <funsub/aig.hpp>
#include <funsub/iso_match.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace funsub
{

struct property_result
{
  bool pass = false;
  std::string detail;
};

/// g embeds into itself and the found mapping passes the independent verifier.
property_result check_reflexivity( aig const& g );

/// Runs the embedding verifier on a supplied mapping of g into itself.
property_result check_reflexive_witness( aig const& g, embedding const& m );

/*! \brief Preservation under equivalent variants.
  Requires sub to embed into base and every variant to be equivalent to base
  (throws `error` otherwise); passes iff the positive-labeling rule labels
  (sub, variant) positive for every variant.
*/
property_result check_preservation( aig const& sub, aig const& base, std::vector<aig> const& variants );

/// Nested samples s1 of g and s2 of s1; passes iff s2 embeds into g.
property_result check_transitivity( aig const& g, std::uint64_t seed );

/// The outer step of the transitivity check with a supplied inner sample.
property_result check_nested_embedding( aig const& s2, aig const& g );

struct selfcheck_report
{
  std::size_t instances = 0;
  std::size_t reflexivity_passed = 0;
  std::size_t preservation_passed = 0;
  std::size_t transitivity_passed = 0;
  /// Negative controls that failed as they should.
  std::size_t controls_rejected = 0;
  std::size_t controls_run = 0;
  std::vector<std::string> failures;

  bool ok() const noexcept
  {
    return failures.empty() && reflexivity_passed == instances && preservation_passed == instances &&
           transitivity_passed == instances && controls_rejected == controls_run;
  }
};

/*! \brief Property battery over `n` generated circuits.
  Each instance checks reflexivity (on the circuit and on a relabeled copy),
  preservation against a restructured and a mapped-then-expanded variant,
  and transitivity, together with three negative controls: a corrupted
  reflexive mapping, a nested-sample stand-in with more PIs than the
  circuit, and a non-equivalent variant.
*/
selfcheck_report run_selfcheck( std::size_t n, std::uint64_t seed, unsigned jobs = 1 );

} // namespace funsub
