// SPDX-License-Identifier: Apache-2.0

#ifndef MPT_ERRORS_HPP
#define MPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mpt
{

// Bad user input: invalid parameters, malformed files, inconsistent configuration.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Mesh input that parses but violates a mesh invariant (inverted tet, unknown tag, ...).
class MeshError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A linear or eigenvalue solve that did not reach its tolerance.
class SolverError : public std::runtime_error
{
public:
  SolverError(const std::string &what, double residual)
    : std::runtime_error(what), achieved_residual(residual)
  {
  }
  double achieved_residual;
};

// The stability constant is not positive, so no valid output bound exists.
class CertificateError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpt

#endif  // MPT_ERRORS_HPP
