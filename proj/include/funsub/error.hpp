#pragma once

#include <stdexcept>
#include <string>

namespace funsub
{

/// Base class for all data and validation errors raised by the toolkit.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line` is 1-based; 0 when not tied to a line.
class parse_error : public error
{
public:
  parse_error( std::string const& what, std::size_t line = 0 )
      : error( line ? "line " + std::to_string( line ) + ": " + what : what ), line_( line )
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A restructuring flow could not produce a non-isomorphic equivalent circuit.
class restructure_error : public error
{
public:
  using error::error;
};

/// A subgraph sample collapsed to fewer than two nodes.
class degenerate_sample : public error
{
public:
  using error::error;
};

} // namespace funsub
