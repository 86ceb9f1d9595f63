#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lofem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration (bad dims, lengths, material, flags).
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// Vector/matrix sizes or layouts that do not fit together.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// Index space too large for the 4-byte node indices.
class OverflowError : public Error
{
public:
  using Error::Error;
};

/// Non-positive Jacobian determinant at a quadrature point.
class GeometryError : public Error
{
public:
  GeometryError( std::size_t element, double det )
  : Error( "element " + std::to_string( element ) +
           " has non-positive Jacobian determinant " + std::to_string( det ) ),
    m_element( element ),
    m_det( det )
  {}

  std::size_t element() const noexcept { return m_element; }
  double det() const noexcept { return m_det; }

private:
  std::size_t m_element;
  double m_det;
};

/// CG produced a non-finite step length or direction update.
class DivergenceError : public Error
{
public:
  DivergenceError( std::size_t iteration, std::string const & what )
  : Error( "CG diverged at iteration " + std::to_string( iteration ) + ": " + what ),
    m_iteration( iteration )
  {}

  std::size_t iteration() const noexcept { return m_iteration; }

private:
  std::size_t m_iteration;
};

} // namespace lofem
