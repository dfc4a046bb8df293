#pragma once

#include <stdexcept>
#include <string>

namespace lsnw {

//! Invalid arguments: violated preconditions, malformed files, bad flags.
class InputError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Base for structured estimation failures. `name()` is the stable
//! identifier reported by the CLI.
class ComputationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;

  virtual const char* name() const noexcept = 0;

  //! Rethrows an error of the same dynamic type with `context` prepended.
  [[noreturn]] virtual void rethrow_with(const std::string& context) const = 0;
};

namespace detail {

template<class Derived>
class NamedError : public ComputationError
{
public:
  using ComputationError::ComputationError;

  [[noreturn]] void rethrow_with(const std::string& context) const override
  {
    throw Derived(context + ": " + what());
  }
};

} // namespace detail

//! The kernel window around the query holds no data (zero denominator).
class EmptyNeighborhood : public detail::NamedError<EmptyNeighborhood>
{
public:
  using NamedError::NamedError;
  const char* name() const noexcept override { return "EmptyNeighborhood"; }
};

//! The query time lies outside the region [C1 h, 1 - C1 h].
class BoundaryRegion : public detail::NamedError<BoundaryRegion>
{
public:
  using NamedError::NamedError;
  const char* name() const noexcept override { return "BoundaryRegion"; }
};

//! A kernel produced negative weights and signed weights are not allowed.
class SignedWeights : public detail::NamedError<SignedWeights>
{
public:
  using NamedError::NamedError;
  const char* name() const noexcept override { return "SignedWeights"; }
};

} // namespace lsnw
