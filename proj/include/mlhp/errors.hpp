#ifndef MLHP_ERRORS_HPP
#define MLHP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlhp {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input: bad spin quantum number, non-Hermitian operator,
/// unnormalized state, unknown mode label.
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

/// The reference state is an eigenstate of the operator, so the collective
/// operator has no linear term and cannot be assigned a single quadrature.
class EigenstateError : public Error
{
public:
    using Error::Error;
};

/// An oscillator decomposition is undefined for the given reference state.
class DegenerateGeometry : public Error
{
public:
    using Error::Error;
};

/// Integrator non-convergence, singular conditioning, failed cross-checks.
class NumericError : public Error
{
public:
    using Error::Error;
};

/// Symmetric-subspace dimension above the configured cap.
class CapExceeded : public Error
{
public:
    using Error::Error;
};

} // namespace mlhp

#endif
