#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace funsub
{

using node_id = std::uint32_t;

enum class node_kind : std::uint8_t
{
  pi,
  and_gate,
  not_gate
};

std::string_view to_string( node_kind kind ) noexcept;
std::optional<node_kind> parse_node_kind( std::string_view keyword ) noexcept;

/// Number of fanins a well-formed node of this kind carries.
constexpr std::size_t arity( node_kind kind ) noexcept
{
  switch ( kind )
  {
  case node_kind::pi:
    return 0;
  case node_kind::not_gate:
    return 1;
  case node_kind::and_gate:
    return 2;
  }
  return 0;
}

struct node
{
  node_kind kind = node_kind::pi;
  std::vector<node_id> fanins;

  friend bool operator==( node const&, node const& ) = default;
};

/*! \brief Single-output and-inverter graph with explicit NOT nodes.

  Node ids are dense and follow insertion order. The container itself does
  not enforce the structural invariants (arity, acyclicity, no NOT->NOT edge,
  no dead logic); use `validate` to check them. Graphs produced by the
  toolkit's own passes are always valid and topologically ordered by id.
*/
class aig
{
public:
  node_id add_pi();
  node_id add_and( node_id a, node_id b );
  node_id add_not( node_id a );
  /// Appends a node without any checks (used by parsers and tests).
  node_id add_node( node_kind kind, std::vector<node_id> fanins );

  void set_output( node_id id ) { output_ = id; }
  bool has_output() const noexcept { return output_.has_value(); }
  node_id output() const { return output_.value(); }

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  node const& at( node_id id ) const { return nodes_[id]; }
  node_kind kind( node_id id ) const { return nodes_[id].kind; }
  std::vector<node_id> const& fanins( node_id id ) const { return nodes_[id].fanins; }
  std::vector<node> const& nodes() const noexcept { return nodes_; }

  bool is_pi( node_id id ) const { return nodes_[id].kind == node_kind::pi; }

  /// PI ids in ascending order.
  std::vector<node_id> pis() const;
  std::size_t num_pis() const;
  std::size_t num_edges() const;
  std::size_t count( node_kind kind ) const;

  /// fanouts()[v] lists, in ascending order, every node that has v as a fanin
  /// (once per fanin slot).
  std::vector<std::vector<node_id>> fanouts() const;

  friend bool operator==( aig const&, aig const& ) = default;

private:
  std::vector<node> nodes_;
  std::optional<node_id> output_;
};

/*! \brief Incremental construction helper used by every rewriting step.

  `make_not` collapses double negation (NOT of a NOT returns the inner
  fanin). With structural hashing enabled, `make_and` and `make_not` return
  an existing node when an identical one was already built; AND fanins are
  hashed as an unordered pair.
*/
class aig_builder
{
public:
  explicit aig_builder( bool strash = false ) : strash_( strash ) {}

  node_id make_pi() { return g_.add_pi(); }
  node_id make_and( node_id a, node_id b );
  node_id make_not( node_id a );

  aig const& graph() const noexcept { return g_; }
  node_kind kind( node_id id ) const { return g_.kind( id ); }
  std::vector<node_id> const& fanins( node_id id ) const { return g_.fanins( id ); }

  /// Finishes the graph: sets the output and removes nodes that do not reach
  /// it, keeping all PIs. `remap` (optional) receives, for every built node,
  /// its id in the result or nullopt if it was removed.
  aig finish( node_id output, std::vector<std::optional<node_id>>* remap = nullptr ) const;

private:
  aig g_;
  bool strash_;
  std::vector<std::pair<std::uint64_t, node_id>> table_; // sorted hash -> node
  std::optional<node_id> lookup( std::uint64_t key ) const;
  void remember( std::uint64_t key, node_id id );
};

/*! \brief Removes every non-PI node that does not reach the output and
  renumbers the rest densely, preserving relative id order. PIs are kept
  (in order) unless `keep_pis` is false.
*/
aig remove_dead( aig const& g, std::vector<std::optional<node_id>>* remap = nullptr, bool keep_pis = true );

/// Relabels node ids by a permutation (new_id = perm[old_id]); node list is
/// re-sorted by new id. Intended for tests of id-independence.
aig permute_ids( aig const& g, std::vector<node_id> const& perm );

} // namespace funsub
