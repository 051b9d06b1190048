#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace funsub
{

/*! \brief 64-bit splitmix generator.

  Every random decision in the toolkit is drawn from this generator so that
  datasets are bit-reproducible across standard libraries (the distributions
  in <random> are implementation-defined).

  Update:  state += 0x9E3779B97F4A7C15
  Output:  z = state
           z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
           z ^ (z >> 31)
*/
class splitmix64
{
public:
  using result_type = std::uint64_t;

  explicit splitmix64( std::uint64_t seed ) noexcept : state_( seed ) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{ 0 }; }

  result_type operator()() noexcept
  {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix( state_ );
  }

  static constexpr std::uint64_t mix( std::uint64_t z ) noexcept
  {
    z = ( z ^ ( z >> 30 ) ) * 0xBF58476D1CE4E5B9ull;
    z = ( z ^ ( z >> 27 ) ) * 0x94D049BB133111EBull;
    return z ^ ( z >> 31 );
  }

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t below( std::uint64_t bound ) noexcept
  {
    // rejection sampling on the top of the range keeps the result unbiased
    std::uint64_t const limit = max() - max() % bound;
    std::uint64_t x;
    do
    {
      x = ( *this )();
    } while ( x >= limit );
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t between( std::uint64_t lo, std::uint64_t hi ) noexcept { return lo + below( hi - lo + 1 ); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit() noexcept { return static_cast<double>( ( *this )() >> 11 ) * 0x1.0p-53; }

  double uniform( double lo, double hi ) noexcept { return lo + ( hi - lo ) * unit(); }

  bool coin( double p = 0.5 ) noexcept { return unit() < p; }

  template<typename T>
  void shuffle( std::span<T> items ) noexcept
  {
    for ( auto i = items.size(); i > 1; --i )
    {
      auto const j = below( i );
      std::swap( items[i - 1], items[j] );
    }
  }

private:
  std::uint64_t state_;
};

/// Derives an independent child seed from a parent seed and a salt.
constexpr std::uint64_t derive_seed( std::uint64_t seed, std::uint64_t salt ) noexcept
{
  return splitmix64::mix( seed ^ splitmix64::mix( salt + 0x9E3779B97F4A7C15ull ) );
}

/// 64-bit FNV-1a; used for stable circuit and string hashes.
constexpr std::uint64_t fnv1a( std::string_view text ) noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( unsigned char c : text )
  {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

} // namespace funsub
