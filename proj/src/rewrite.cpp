#include <funsub/rewrite.hpp>

#include <funsub/error.hpp>
#include <funsub/iso_match.hpp>
#include <funsub/random.hpp>
#include <funsub/validate.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace funsub
{

std::string_view to_string( pass_kind kind ) noexcept
{
  switch ( kind )
  {
  case pass_kind::strash:
    return "strash";
  case pass_kind::balance:
    return "balance";
  case pass_kind::factor:
    return "factor";
  case pass_kind::unfactor:
    return "unfactor";
  case pass_kind::demorgan_push:
    return "demorgan_push";
  case pass_kind::reassociate:
    return "reassociate";
  }
  return "?";
}

std::optional<pass_kind> parse_pass_kind( std::string_view name ) noexcept
{
  for ( auto k : { pass_kind::strash, pass_kind::balance, pass_kind::factor, pass_kind::unfactor, pass_kind::demorgan_push,
                   pass_kind::reassociate } )
  {
    if ( to_string( k ) == name )
      return k;
  }
  return std::nullopt;
}

namespace
{

/// A rewrite site: the root to replace plus the old-graph leaves the
/// replacement is built from. `variant` selects among alternative forms.
struct site
{
  node_id root;
  std::vector<node_id> leaves;
  unsigned variant = 0;
};

using replacement_fn = std::function<std::optional<node_id>( site const&, std::vector<node_id> const& leaf_images, aig_builder& )>;

/// Rebuilds `g` with PIs first, replacing the chosen site roots.
aig rebuild( aig const& g, bool strash, std::vector<site> const& sites, replacement_fn const& replace )
{
  std::vector<site const*> site_at( g.size(), nullptr );
  for ( auto const& s : sites )
    site_at[s.root] = &s;

  aig_builder b( strash );
  std::vector<node_id> img( g.size(), std::numeric_limits<node_id>::max() );
  for ( auto p : g.pis() )
    img[p] = b.make_pi();
  for ( auto v : topo_order( g ) )
  {
    if ( g.is_pi( v ) )
      continue;
    if ( auto const* s = site_at[v] )
    {
      std::vector<node_id> leaf_images;
      for ( auto l : s->leaves )
        leaf_images.push_back( img[l] );
      if ( auto r = replace( *s, leaf_images, b ) )
      {
        img[v] = *r;
        continue;
      }
    }
    auto const& f = g.fanins( v );
    img[v] = g.kind( v ) == node_kind::not_gate ? b.make_not( img[f[0]] ) : b.make_and( img[f[0]], img[f[1]] );
  }
  return b.finish( img[g.output()] );
}

bool is_and( aig const& g, node_id v )
{
  return g.kind( v ) == node_kind::and_gate;
}

bool is_not( aig const& g, node_id v )
{
  return g.kind( v ) == node_kind::not_gate;
}

/// NOT node whose fanin is an AND: returns the AND.
std::optional<node_id> negated_and( aig const& g, node_id v )
{
  if ( is_not( g, v ) && is_and( g, g.fanins( v )[0] ) )
    return g.fanins( v )[0];
  return std::nullopt;
}

// --- site discovery -------------------------------------------------------

std::vector<site> factor_sites( aig const& g )
{
  std::vector<site> sites;
  for ( node_id n = 0; n < g.size(); ++n )
  {
    if ( !is_and( g, n ) )
      continue;
    auto const x = negated_and( g, g.fanins( n )[0] );
    auto const y = negated_and( g, g.fanins( n )[1] );
    if ( !x || !y || *x == *y )
      continue;
    auto const& fx = g.fanins( *x );
    auto const& fy = g.fanins( *y );
    bool found = false;
    for ( unsigned i = 0; i < 2 && !found; ++i )
    {
      for ( unsigned j = 0; j < 2 && !found; ++j )
      {
        auto const a = fx[i], b = fx[1 - i], c = fy[1 - j];
        if ( fx[i] == fy[j] && b != c && a != b && a != c )
        {
          sites.push_back( { n, { a, b, c } } );
          found = true;
        }
      }
    }
  }
  return sites;
}

std::vector<site> unfactor_sites( aig const& g )
{
  std::vector<site> sites;
  for ( node_id m = 0; m < g.size(); ++m )
  {
    if ( !is_and( g, m ) )
      continue;
    for ( unsigned side = 0; side < 2; ++side )
    {
      auto const z = negated_and( g, g.fanins( m )[side] );
      if ( !z )
        continue;
      auto const a = g.fanins( m )[1 - side];
      auto const u = g.fanins( *z )[0], v = g.fanins( *z )[1];
      if ( u == v || a == u || a == v )
        continue;
      sites.push_back( { m, { a, u, v } } );
      break;
    }
  }
  return sites;
}

std::vector<site> demorgan_sites( aig const& g )
{
  std::vector<site> sites;
  for ( node_id n = 0; n < g.size(); ++n )
  {
    if ( !is_and( g, n ) )
      continue;
    auto const p = negated_and( g, g.fanins( n )[0] );
    auto const q = negated_and( g, g.fanins( n )[1] );
    if ( !p || !q || *p == *q )
      continue;
    auto const& fp = g.fanins( *p );
    auto const& fq = g.fanins( *q );
    if ( fp[0] == fp[1] || fq[0] == fq[1] )
      continue;
    if ( std::find( fq.begin(), fq.end(), fp[0] ) != fq.end() || std::find( fq.begin(), fq.end(), fp[1] ) != fq.end() )
      continue;
    sites.push_back( { n, { fp[0], fp[1], fq[0], fq[1] } } );
  }
  return sites;
}

std::vector<site> reassociate_sites( aig const& g )
{
  std::vector<site> sites;
  for ( node_id n = 0; n < g.size(); ++n )
  {
    if ( !is_and( g, n ) )
      continue;
    for ( unsigned side = 0; side < 2; ++side )
    {
      auto const x = g.fanins( n )[side];
      auto const y = g.fanins( n )[1 - side];
      if ( !is_and( g, x ) )
        continue;
      auto const x1 = g.fanins( x )[0], x2 = g.fanins( x )[1];
      if ( x1 == x2 || y == x1 || y == x2 )
        continue;
      sites.push_back( { n, { x1, x2, y } } );
      break;
    }
  }
  return sites;
}

/// AND roots of supergates with at least three leaves. An AND with a single
/// fanout into another AND is absorbed into that AND's supergate.
std::vector<site> balance_sites( aig const& g )
{
  auto const fanouts = g.fanouts();
  auto const absorbed = [&]( node_id v ) {
    return is_and( g, v ) && fanouts[v].size() == 1 && is_and( g, fanouts[v][0] ) && v != g.output();
  };
  std::vector<site> sites;
  for ( node_id r = 0; r < g.size(); ++r )
  {
    if ( !is_and( g, r ) || absorbed( r ) )
      continue;
    std::vector<node_id> leaves;
    std::vector<node_id> stack{ g.fanins( r )[1], g.fanins( r )[0] };
    while ( !stack.empty() )
    {
      auto const v = stack.back();
      stack.pop_back();
      if ( absorbed( v ) )
      {
        stack.push_back( g.fanins( v )[1] );
        stack.push_back( g.fanins( v )[0] );
      }
      else
        leaves.push_back( v );
    }
    if ( leaves.size() >= 3 )
      sites.push_back( { r, std::move( leaves ) } );
  }
  return sites;
}

std::vector<site> find_sites( aig const& g, pass_kind kind )
{
  switch ( kind )
  {
  case pass_kind::strash:
    return {};
  case pass_kind::balance:
    return balance_sites( g );
  case pass_kind::factor:
    return factor_sites( g );
  case pass_kind::unfactor:
    return unfactor_sites( g );
  case pass_kind::demorgan_push:
    return demorgan_sites( g );
  case pass_kind::reassociate:
    return reassociate_sites( g );
  }
  return {};
}

// --- replacements ---------------------------------------------------------

node_id make_or( aig_builder& b, node_id x, node_id y )
{
  return b.make_not( b.make_and( b.make_not( x ), b.make_not( y ) ) );
}

std::optional<node_id> replace_factor( site const&, std::vector<node_id> const& l, aig_builder& b )
{
  // !((a & b) | (a & c)) = !(a & (b | c))
  auto const a = l[0], x = l[1], y = l[2];
  if ( a == x || a == y || x == y )
    return std::nullopt;
  return b.make_not( b.make_and( a, make_or( b, x, y ) ) );
}

std::optional<node_id> replace_unfactor( site const&, std::vector<node_id> const& l, aig_builder& b )
{
  // a & !(u & v) = (a & !u) | (a & !v)
  auto const a = l[0];
  auto const nu = b.make_not( l[1] );
  auto const nv = b.make_not( l[2] );
  if ( a == nu || a == nv || nu == nv || a == l[1] || a == l[2] )
    return std::nullopt;
  return make_or( b, b.make_and( a, nu ), b.make_and( a, nv ) );
}

std::optional<node_id> replace_demorgan( site const&, std::vector<node_id> const& l, aig_builder& b )
{
  // !(p1 & p2) & !(q1 & q2) = (!p1 | !p2) & (!q1 | !q2) = OR over i,j of (!pi & !qj)
  std::array<node_id, 2> const np{ b.make_not( l[0] ), b.make_not( l[1] ) };
  std::array<node_id, 2> const nq{ b.make_not( l[2] ), b.make_not( l[3] ) };
  if ( np[0] == np[1] || nq[0] == nq[1] )
    return std::nullopt;
  for ( auto p : np )
  {
    for ( auto q : nq )
    {
      if ( p == q )
        return std::nullopt;
    }
  }
  std::array<node_id, 4> terms{};
  for ( unsigned i = 0; i < 4; ++i )
    terms[i] = b.make_and( np[i / 2], nq[i % 2] );
  auto const left = b.make_and( b.make_not( terms[0] ), b.make_not( terms[1] ) );
  auto const right = b.make_and( b.make_not( terms[2] ), b.make_not( terms[3] ) );
  return b.make_not( b.make_and( left, right ) );
}

std::optional<node_id> replace_reassociate( site const& s, std::vector<node_id> const& l, aig_builder& b )
{
  auto const keep = s.variant == 0 ? l[0] : l[1];
  auto const move = s.variant == 0 ? l[1] : l[0];
  auto const y = l[2];
  if ( keep == move || move == y || keep == y )
    return std::nullopt;
  return b.make_and( keep, b.make_and( move, y ) );
}

std::vector<std::uint32_t> builder_levels( aig const& g )
{
  std::vector<std::uint32_t> level( g.size(), 0 );
  for ( node_id v = 0; v < g.size(); ++v )
  {
    for ( auto f : g.fanins( v ) )
      level[v] = std::max( level[v], level[f] + 1 );
  }
  return level;
}

std::optional<node_id> replace_balance( site const&, std::vector<node_id> const& l, aig_builder& b )
{
  std::vector<node_id> leaves;
  for ( auto x : l )
  {
    if ( std::find( leaves.begin(), leaves.end(), x ) == leaves.end() )
      leaves.push_back( x );
  }
  if ( leaves.size() < 2 )
    return std::nullopt;

  // builder ids are topological, so levels of existing nodes are stable
  auto level = builder_levels( b.graph() );
  struct item
  {
    std::uint32_t level;
    std::size_t order;
    node_id id;
  };
  std::vector<item> pool;
  for ( std::size_t i = 0; i < leaves.size(); ++i )
    pool.push_back( { level[leaves[i]], i, leaves[i] } );
  auto next_order = pool.size();
  auto const cmp = []( item const& x, item const& y ) { return std::tie( x.level, x.order ) < std::tie( y.level, y.order ); };
  while ( pool.size() > 1 )
  {
    std::sort( pool.begin(), pool.end(), cmp );
    auto const x = pool[0], y = pool[1];
    pool.erase( pool.begin(), pool.begin() + 2 );
    auto const id = b.make_and( x.id, y.id );
    pool.push_back( { std::max( x.level, y.level ) + 1, next_order++, id } );
  }
  return pool.front().id;
}

replacement_fn replacement_for( pass_kind kind )
{
  switch ( kind )
  {
  case pass_kind::strash:
    return []( site const&, std::vector<node_id> const&, aig_builder& ) { return std::optional<node_id>{}; };
  case pass_kind::balance:
    return replace_balance;
  case pass_kind::factor:
    return replace_factor;
  case pass_kind::unfactor:
    return replace_unfactor;
  case pass_kind::demorgan_push:
    return replace_demorgan;
  case pass_kind::reassociate:
    return replace_reassociate;
  }
  return {};
}

} // namespace

std::size_t count_sites( aig const& g, pass_kind kind )
{
  return find_sites( g, kind ).size();
}

aig apply_pass( aig const& g, rewrite_pass const& pass, std::uint64_t seed )
{
  auto sites = find_sites( g, pass.kind );
  if ( pass.kind != pass_kind::strash && pass.kind != pass_kind::balance && !sites.empty() )
  {
    splitmix64 rng( seed );
    rng.shuffle( std::span<site>( sites ) );
    auto const wanted = std::max<std::size_t>( 1, static_cast<std::size_t>( std::ceil( pass.site_fraction * sites.size() ) ) );
    sites.resize( std::min( wanted, sites.size() ) );
    for ( auto& s : sites )
      s.variant = static_cast<unsigned>( rng.below( 2 ) );
  }
  return rebuild( g, pass.kind == pass_kind::strash, sites, replacement_for( pass.kind ) );
}

namespace
{

std::array<std::string_view, 5> constexpr names{ "src_rw", "src_rs", "src_rws", "resyn2rs", "compress2rs" };

} // namespace

std::span<std::string_view const> flow_names() noexcept
{
  return names;
}

flow named_flow( std::string_view name, std::uint64_t seed )
{
  using enum pass_kind;
  std::vector<pass_kind> kinds;
  if ( name == "src_rw" )
    kinds = { strash, unfactor, reassociate };
  else if ( name == "src_rs" )
    kinds = { strash, reassociate, factor };
  else if ( name == "src_rws" )
    kinds = { strash, unfactor, reassociate, factor, strash };
  else if ( name == "resyn2rs" )
    kinds = { balance, unfactor, reassociate, balance, demorgan_push, strash };
  else if ( name == "compress2rs" )
    kinds = { balance, factor, strash, demorgan_push, reassociate };
  else
    throw error( fmt::format( "unknown flow '{}'", name ) );

  flow f{ std::string( name ), {}, seed };
  for ( auto k : kinds )
    f.passes.push_back( { k } );
  return f;
}

aig apply_flow( aig const& g, flow const& f, int max_retries )
{
  if ( f.passes.empty() )
    throw error( fmt::format( "flow '{}' has no passes", f.name ) );
  for ( int attempt = 0; attempt < max_retries; ++attempt )
  {
    auto const attempt_seed = derive_seed( f.seed, static_cast<std::uint64_t>( attempt ) );
    aig current = g;
    for ( std::size_t i = 0; i < f.passes.size(); ++i )
      current = apply_pass( current, f.passes[i], derive_seed( attempt_seed, i ) );
    if ( !is_isomorphic( current, g ) )
      return current;
  }
  throw restructure_error( fmt::format( "cannot restructure: flow '{}' left the circuit isomorphic after {} attempts", f.name, max_retries ) );
}

} // namespace funsub
