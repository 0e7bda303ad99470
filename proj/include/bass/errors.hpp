#pragma once

#include <stdexcept>
#include <string>

namespace bass {

// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Operands live in different ambient variable counts, or an index is out of range.
class DimensionError : public Error
{
public:
  using Error::Error;
};

// A 64-bit coefficient computation would have wrapped.
class CoefficientOverflow : public Error
{
public:
  using Error::Error;
};

// An elementary map was requested with a non-indicator h, or with h depending on the mapped variable.
class InvalidGenerator : public Error
{
public:
  using Error::Error;
};

class InvalidPermutation : public Error
{
public:
  using Error::Error;
};

// The indicator sampler ran out of variables or retries.
class SamplingError : public Error
{
public:
  using Error::Error;
};

// Exhaustive enumeration refused because the cube is too large.
class CapacityError : public Error
{
public:
  using Error::Error;
};

class InvalidParams : public Error
{
public:
  using Error::Error;
};

// Text input (polynomial, automorphism, key or signature file) could not be parsed.
class ParseError : public Error
{
public:
  using Error::Error;
};

class MalformedSignature : public Error
{
public:
  using Error::Error;
};

} // namespace bass
