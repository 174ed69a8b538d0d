#pragma once

#include <stdexcept>

namespace hsr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes do not match the algebra they are used with.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// A homogeneous structure violates a construction-time invariant.
class StructureError : public Error
{
public:
  using Error::Error;
};

/// An operation's hypotheses are not met by its input.
class HypothesisError : public Error
{
public:
  using Error::Error;
};

}  // namespace hsr
