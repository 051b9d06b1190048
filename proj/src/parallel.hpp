#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace funsub::detail
{

/// Calls fn(i) for i in [0, n) on up to `jobs` threads; rethrows the
/// exception of the lowest failing index.
template<typename Fn>
void parallel_for( std::size_t n, unsigned jobs, Fn&& fn )
{
  jobs = std::max( 1u, std::min<unsigned>( jobs, static_cast<unsigned>( std::max<std::size_t>( n, 1 ) ) ) );
  std::vector<std::exception_ptr> errors( n );
  std::atomic<std::size_t> next{ 0 };
  auto worker = [&]() {
    for ( auto i = next++; i < n; i = next++ )
    {
      try
      {
        fn( i );
      }
      catch ( ... )
      {
        errors[i] = std::current_exception();
      }
    }
  };
  if ( jobs == 1 )
    worker();
  else
  {
    std::vector<std::thread> pool;
    for ( unsigned t = 0; t < jobs; ++t )
      pool.emplace_back( worker );
    for ( auto& t : pool )
      t.join();
  }
  for ( auto const& e : errors )
  {
    if ( e )
      std::rethrow_exception( e );
  }
}

} // namespace funsub::detail
