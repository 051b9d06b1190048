#include <funsub/iso_match.hpp>

#include <algorithm>
#include <array>
#include <limits>

namespace funsub
{

namespace
{

constexpr node_id unmapped = std::numeric_limits<node_id>::max();

struct abort_search
{
};

class matcher
{
public:
  matcher( aig const& q, aig const& t, match_options const& opts )
      : q_( q ), t_( t ), opts_( opts ), q_fanouts_( q.fanouts() ), image_( q.size(), unmapped ), used_( t.size(), false )
  {
    plan_order();
  }

  match_outcome run()
  {
    match_outcome out;
    if ( q_.size() > t_.size() || q_.empty() )
      return out;
    try
    {
      if ( extend( 0 ) )
      {
        out.status = match_status::found;
        out.mapping = embedding{ image_ };
      }
    }
    catch ( abort_search const& )
    {
      out.status = match_status::aborted;
    }
    out.steps = steps_;
    return out;
  }

private:
  /// Breadth-first from the output along fanins; each node remembers the
  /// already-ordered fanout that discovered it.
  void plan_order()
  {
    std::vector<bool> queued( q_.size(), false );
    parent_.assign( q_.size(), unmapped );
    auto const visit_from = [&]( node_id root ) {
      std::size_t head = order_.size();
      order_.push_back( root );
      queued[root] = true;
      while ( head < order_.size() )
      {
        auto const v = order_[head++];
        for ( auto f : q_.fanins( v ) )
        {
          if ( !queued[f] )
          {
            queued[f] = true;
            parent_[f] = v;
            order_.push_back( f );
          }
        }
      }
    };
    if ( q_.has_output() && q_.output() < q_.size() )
      visit_from( q_.output() );
    for ( node_id v = static_cast<node_id>( q_.size() ); v-- > 0; )
    {
      if ( !queued[v] )
        visit_from( v );
    }
  }

  bool compatible( node_id u, node_id c ) const
  {
    if ( q_.is_pi( u ) )
      return !opts_.pis_to_pis || t_.is_pi( c );
    if ( q_.kind( u ) != t_.kind( c ) || q_.fanins( u ).size() != t_.fanins( c ).size() )
      return false;
    // every non-PI query fanin needs a same-kind target fanin
    for ( auto f : q_.fanins( u ) )
    {
      if ( q_.is_pi( f ) && !opts_.pis_to_pis )
        continue;
      auto const& tf = t_.fanins( c );
      if ( std::none_of( tf.begin(), tf.end(), [&]( node_id x ) { return t_.kind( x ) == q_.kind( f ); } ) )
        return false;
    }
    return true;
  }

  /// Mapped fanin images of `p` must form a sub-multiset of the fanins of m(p).
  bool consistent( node_id p ) const
  {
    if ( image_[p] == unmapped || q_.is_pi( p ) )
      return true;
    auto const& tf = t_.fanins( image_[p] );
    std::array<bool, 2> taken{ false, false };
    for ( auto f : q_.fanins( p ) )
    {
      if ( image_[f] == unmapped )
        continue;
      bool matched = false;
      for ( std::size_t k = 0; k < tf.size() && k < 2; ++k )
      {
        if ( !taken[k] && tf[k] == image_[f] )
        {
          taken[k] = matched = true;
          break;
        }
      }
      if ( !matched )
        return false;
    }
    return true;
  }

  std::vector<node_id> candidates( node_id u ) const
  {
    std::vector<node_id> result;
    if ( parent_[u] != unmapped )
    {
      result = t_.fanins( image_[parent_[u]] );
    }
    else if ( opts_.output_to_output && u == q_.output() )
    {
      if ( t_.has_output() )
        result.push_back( t_.output() );
    }
    else
    {
      result.resize( t_.size() );
      for ( node_id i = 0; i < t_.size(); ++i )
        result[i] = i;
    }
    std::sort( result.begin(), result.end(), [this]( node_id a, node_id b ) {
      auto const ka = std::tuple( static_cast<int>( t_.kind( a ) ), t_.fanins( a ).size(), a );
      auto const kb = std::tuple( static_cast<int>( t_.kind( b ) ), t_.fanins( b ).size(), b );
      return ka < kb;
    } );
    result.erase( std::unique( result.begin(), result.end() ), result.end() );
    return result;
  }

  bool extend( std::size_t depth )
  {
    if ( depth == order_.size() )
      return true;
    auto const u = order_[depth];
    for ( auto c : candidates( u ) )
    {
      if ( used_[c] || !compatible( u, c ) )
        continue;
      if ( opts_.max_steps && ++steps_ > opts_.max_steps )
        throw abort_search{};
      else if ( !opts_.max_steps )
        ++steps_;
      image_[u] = c;
      used_[c] = true;
      bool ok = consistent( u );
      for ( auto p : q_fanouts_[u] )
        ok = ok && consistent( p );
      if ( ok && extend( depth + 1 ) )
        return true;
      image_[u] = unmapped;
      used_[c] = false;
    }
    return false;
  }

  aig const& q_;
  aig const& t_;
  match_options opts_;
  std::vector<std::vector<node_id>> q_fanouts_;
  std::vector<node_id> order_;
  std::vector<node_id> parent_;
  std::vector<node_id> image_;
  std::vector<bool> used_;
  std::uint64_t steps_ = 0;
};

} // namespace

match_outcome match( aig const& query, aig const& target, match_options const& options )
{
  return matcher( query, target, options ).run();
}

std::optional<embedding> find_embedding( aig const& query, aig const& target )
{
  return match( query, target ).mapping;
}

bool verify_embedding( aig const& query, aig const& target, embedding const& m )
{
  if ( m.image.size() != query.size() )
    return false;
  std::vector<bool> hit( target.size(), false );
  for ( auto t : m.image )
  {
    if ( t >= target.size() || hit[t] )
      return false;
    hit[t] = true;
  }
  for ( node_id v = 0; v < query.size(); ++v )
  {
    if ( query.is_pi( v ) )
      continue;
    auto const tv = m.image[v];
    if ( target.kind( tv ) != query.kind( v ) )
      return false;
    std::vector<node_id> want;
    for ( auto f : query.fanins( v ) )
      want.push_back( m.image[f] );
    auto have = target.fanins( tv );
    std::sort( want.begin(), want.end() );
    std::sort( have.begin(), have.end() );
    if ( want != have )
      return false;
  }
  return true;
}

bool is_isomorphic( aig const& a, aig const& b )
{
  if ( a.size() != b.size() || a.num_edges() != b.num_edges() )
    return false;
  for ( auto k : { node_kind::pi, node_kind::and_gate, node_kind::not_gate } )
  {
    if ( a.count( k ) != b.count( k ) )
      return false;
  }
  match_options opts;
  opts.pis_to_pis = true;
  opts.output_to_output = true;
  return match( a, b, opts ).status == match_status::found;
}

} // namespace funsub
