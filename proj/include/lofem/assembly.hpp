#pragma once

#include "lofem/kinds.hpp"
#include "lofem/linalg.hpp"
#include "lofem/mesh.hpp"
#include "lofem/operators.hpp"
#include "lofem/reference_element.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace lofem {

/// Dense (8c) x (8c) element matrix, row-major. Row/column of node i, component k is c*i + k.
class LocalMatrix
{
public:
  explicit LocalMatrix( int components )
  : m_size( 8 * components ), m_values( static_cast< std::size_t >( m_size * m_size ), 0.0 )
  {}

  int size() const { return m_size; }
  double & operator()( int r, int c ) { return m_values[static_cast< std::size_t >( r * m_size + c )]; }
  double operator()( int r, int c ) const { return m_values[static_cast< std::size_t >( r * m_size + c )]; }

private:
  int m_size;
  std::vector< double > m_values;
};

/**
 * Quadrature sum of the element matrix:
 *   scalar Laplace  A_ij         = sum_q (J^-T g_i).(J^-T g_j) w_q detJ
 *   vector Laplace  A_(ik),(jl)  = delta_kl * scalar A_ij
 *   elasticity      A_(ik),(jl)  = sum_q (e_k (x) grad phi_i) : sigma(e_l (x) grad phi_j) w_q detJ
 * Throws GeometryError (element id 0) on non-positive detJ, ValidationError when an
 * elasticity material is missing or invalid.
 */
LocalMatrix local_matrix( OperatorKind kind, std::array< Vec3, 8 > const & coords, ReferenceElement const & ref,
                          std::optional< IsotropicElasticity > const & material = std::nullopt );

/// Exact non-zero count of the 27-point stencil pattern: c^2 prod_d (3 n_d + 1).
std::size_t stencil_nnz( BoxDims const & dims, int components );

/// Sparsity pattern from the structured-grid 27-point stencil, values zeroed.
CsrMatrix build_sparsity( Mesh const & mesh, int components );

/**
 * Global CSR operator. With a boundary set, constrained rows and columns are zeroed and
 * the diagonal set to 1 (pattern kept, so dof numbering matches the matrix-free path).
 */
CsrMatrix assemble( OperatorKind kind, Mesh const & mesh, ReferenceElement const & ref,
                    std::optional< IsotropicElasticity > const & material = std::nullopt,
                    std::optional< std::span< NodeIndex const > > constrained_nodes = std::nullopt );

/// Matrix Market coordinate/real/general export, 1-based indices.
void write_matrix_market( std::ostream & os, CsrMatrix const & matrix );

} // namespace lofem
