#include "lofem/assembly.hpp"

#include "lofem/errors.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

namespace lofem {

LocalMatrix local_matrix( OperatorKind kind, std::array< Vec3, 8 > const & coords, ReferenceElement const & ref,
                          std::optional< IsotropicElasticity > const & material )
{
  if( kind == OperatorKind::elasticity )
  {
    if( !material )
      throw ValidationError( "elasticity local matrix requires a material" );
    material->validate();
  }

  int const c = components_of( kind );
  LocalMatrix A( c );

  for( int q = 0; q < ReferenceElement::num_qpts; ++q )
  {
    ElementGeometry const geo = element_geometry( coords, ref.basis_grads[q], 0 );
    double const scale = ref.qpt_weights[q] * geo.det;

    // Physical gradients J^-T g_j.
    std::array< Vec3, 8 > grad{};
    for( int j = 0; j < 8; ++j )
      for( int a = 0; a < 3; ++a )
        for( int b = 0; b < 3; ++b )
          grad[j][a] += geo.inv_jacobian[b][a] * ref.basis_grads[q][j][b];

    for( int i = 0; i < 8; ++i )
      for( int j = 0; j < 8; ++j )
      {
        double const gg = dot3( grad[i], grad[j] );
        if( kind != OperatorKind::elasticity )
        {
          for( int k = 0; k < c; ++k )
            A( c * i + k, c * j + k ) += scale * gg;
          continue;
        }
        // (e_k (x) g_i) : sigma(e_l (x) g_j)
        //   = lambda g_j[l] g_i[k] + mu ( delta_kl g_i.g_j + g_j[k] g_i[l] )
        double const lambda = material->lambda;
        double const mu = material->mu;
        for( int k = 0; k < 3; ++k )
          for( int l = 0; l < 3; ++l )
          {
            double value = lambda * grad[j][l] * grad[i][k] + mu * grad[j][k] * grad[i][l];
            if( k == l )
              value += mu * gg;
            A( 3 * i + k, 3 * j + l ) += scale * value;
          }
      }
  }
  return A;
}

std::size_t stencil_nnz( BoxDims const & dims, int components )
{
  std::size_t const c = static_cast< std::size_t >( components );
  return c * c * ( 3 * dims.nx + 1 ) * ( 3 * dims.ny + 1 ) * ( 3 * dims.nz + 1 );
}

CsrMatrix build_sparsity( Mesh const & mesh, int components )
{
  BoxDims const & d = mesh.dims();
  std::size_t const c = static_cast< std::size_t >( components );
  std::size_t const rows = mesh.num_nodes() * c;
  if( rows > std::numeric_limits< std::uint32_t >::max() )
    throw OverflowError( "dof count exceeds 32-bit column indices" );

  CsrMatrix A;
  A.num_rows = rows;
  A.num_cols = rows;
  A.row_offsets.reserve( rows + 1 );
  A.row_offsets.push_back( 0 );
  A.col_indices.reserve( stencil_nnz( d, components ) );

  auto range = []( std::size_t i, std::size_t n ) {
    return std::pair{ i == 0 ? i : i - 1, std::min( i + 1, n ) };
  };

  for( std::size_t k = 0; k <= d.nz; ++k )
    for( std::size_t j = 0; j <= d.ny; ++j )
      for( std::size_t i = 0; i <= d.nx; ++i )
      {
        auto const [k0, k1] = range( k, d.nz );
        auto const [j0, j1] = range( j, d.ny );
        auto const [i0, i1] = range( i, d.nx );
        for( std::size_t comp = 0; comp < c; ++comp )
        {
          // Neighbour nodes in increasing index order, then components within a node.
          for( std::size_t kk = k0; kk <= k1; ++kk )
            for( std::size_t jj = j0; jj <= j1; ++jj )
              for( std::size_t ii = i0; ii <= i1; ++ii )
              {
                std::size_t const col_node = mesh.node_index( ii, jj, kk );
                for( std::size_t l = 0; l < c; ++l )
                  A.col_indices.push_back( static_cast< std::uint32_t >( c * col_node + l ) );
              }
          A.row_offsets.push_back( A.col_indices.size() );
        }
      }
  A.values.assign( A.col_indices.size(), 0.0 );
  return A;
}

CsrMatrix assemble( OperatorKind kind, Mesh const & mesh, ReferenceElement const & ref,
                    std::optional< IsotropicElasticity > const & material,
                    std::optional< std::span< NodeIndex const > > constrained_nodes )
{
  int const c = components_of( kind );
  CsrMatrix A = build_sparsity( mesh, c );

  auto locate = [&A]( std::size_t row, std::uint32_t col ) {
    auto const first = A.col_indices.begin() + static_cast< std::ptrdiff_t >( A.row_offsets[row] );
    auto const last = A.col_indices.begin() + static_cast< std::ptrdiff_t >( A.row_offsets[row + 1] );
    auto const it = std::lower_bound( first, last, col );
    return static_cast< std::size_t >( it - A.col_indices.begin() );
  };

  for( std::size_t e = 0; e < mesh.num_elements(); ++e )
  {
    LocalMatrix Ae = [&] {
      try
      {
        return local_matrix( kind, mesh.element_coords( e ), ref, material );
      }
      catch( GeometryError const & err )
      {
        throw GeometryError( e, err.det() );
      }
    }();
    auto const nodes = mesh.element_nodes( e );
    for( int a = 0; a < 8; ++a )
      for( int k = 0; k < c; ++k )
      {
        std::size_t const row = static_cast< std::size_t >( c ) * nodes[a] + k;
        for( int b = 0; b < 8; ++b )
          for( int l = 0; l < c; ++l )
          {
            auto const col = static_cast< std::uint32_t >( c * nodes[b] + l );
            A.values[locate( row, col )] += Ae( c * a + k, c * b + l );
          }
      }
  }

  if( constrained_nodes )
  {
    std::vector< char > fixed( A.num_rows, 0 );
    for( NodeIndex n : *constrained_nodes )
    {
      if( n >= mesh.num_nodes() )
        throw DimensionError( "constrained node " + std::to_string( n ) + " is not a mesh node" );
      for( int l = 0; l < c; ++l )
        fixed[static_cast< std::size_t >( c ) * n + l] = 1;
    }
    for( std::size_t r = 0; r < A.num_rows; ++r )
      for( std::uint64_t p = A.row_offsets[r]; p < A.row_offsets[r + 1]; ++p )
      {
        std::size_t const col = A.col_indices[p];
        if( fixed[r] || fixed[col] )
          A.values[p] = ( r == col ) ? 1.0 : 0.0;
      }
  }
  return A;
}

void write_matrix_market( std::ostream & os, CsrMatrix const & matrix )
{
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << matrix.num_rows << ' ' << matrix.num_cols << ' ' << matrix.nnz() << '\n';
  auto const old_precision = os.precision( 17 );
  for( std::size_t r = 0; r < matrix.num_rows; ++r )
    for( std::uint64_t p = matrix.row_offsets[r]; p < matrix.row_offsets[r + 1]; ++p )
      os << r + 1 << ' ' << matrix.col_indices[p] + 1 << ' ' << matrix.values[p] << '\n';
  os.precision( old_precision );
}

} // namespace lofem
