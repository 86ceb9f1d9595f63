#include "lofem/mesh.hpp"

#include "lofem/errors.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace lofem {

namespace {

// (di,dj,dk) offsets of the reference corners.
constexpr int corner_offset[8][3] = {
  { 0, 0, 0 }, { 1, 0, 0 }, { 1, 1, 0 }, { 0, 1, 0 },
  { 0, 0, 1 }, { 1, 0, 1 }, { 1, 1, 1 }, { 0, 1, 1 } };

void validate( BoxDims const & dims, Vec3 const & lengths )
{
  if( dims.nx == 0 || dims.ny == 0 || dims.nz == 0 )
    throw ValidationError( "mesh dims must all be >= 1" );
  for( double l : lengths )
    if( !( l > 0.0 ) || !std::isfinite( l ) )
      throw ValidationError( "mesh lengths must be finite and > 0" );

  constexpr std::uint64_t limit = std::numeric_limits< NodeIndex >::max();
  bool overflow = dims.nx >= limit || dims.ny >= limit || dims.nz >= limit;
  if( !overflow )
  {
    std::uint64_t const px = dims.nx + 1, py = dims.ny + 1, pz = dims.nz + 1;
    overflow = px > limit / py || px * py > limit / pz;
  }
  if( overflow )
    throw OverflowError( "node count exceeds 32-bit node indices" );
}

} // namespace

std::array< std::size_t, 3 > Mesh::lattice( std::size_t node ) const
{
  std::size_t const px = m_dims.nx + 1;
  std::size_t const py = m_dims.ny + 1;
  return { node % px, ( node / px ) % py, node / ( px * py ) };
}

std::array< Vec3, 8 > Mesh::element_coords( std::size_t e ) const
{
  std::array< Vec3, 8 > x;
  auto const nodes = element_nodes( e );
  for( int a = 0; a < 8; ++a )
    x[a] = node_coords( nodes[a] );
  return x;
}

Mesh build_box_mesh( BoxDims const & dims, Vec3 const & lengths )
{
  validate( dims, lengths );

  Mesh mesh;
  mesh.m_dims = dims;
  mesh.m_lengths = lengths;

  std::size_t const px = dims.nx + 1;
  std::size_t const py = dims.ny + 1;
  std::size_t const pz = dims.nz + 1;
  double const h[3] = { lengths[0] / static_cast< double >( dims.nx ),
                        lengths[1] / static_cast< double >( dims.ny ),
                        lengths[2] / static_cast< double >( dims.nz ) };

  mesh.m_coords.resize( 3 * px * py * pz );
  for( std::size_t k = 0, n = 0; k < pz; ++k )
    for( std::size_t j = 0; j < py; ++j )
      for( std::size_t i = 0; i < px; ++i, ++n )
      {
        // Last lattice plane lands exactly on the box length.
        mesh.m_coords[3 * n] = i == dims.nx ? lengths[0] : static_cast< double >( i ) * h[0];
        mesh.m_coords[3 * n + 1] = j == dims.ny ? lengths[1] : static_cast< double >( j ) * h[1];
        mesh.m_coords[3 * n + 2] = k == dims.nz ? lengths[2] : static_cast< double >( k ) * h[2];
      }

  mesh.m_node_map.resize( 8 * dims.num_elements() );
  for( std::size_t ez = 0, e = 0; ez < dims.nz; ++ez )
    for( std::size_t ey = 0; ey < dims.ny; ++ey )
      for( std::size_t ex = 0; ex < dims.nx; ++ex, ++e )
      {
        for( int a = 0; a < 8; ++a )
          mesh.m_node_map[8 * e + a] = mesh.node_index( ex + corner_offset[a][0],
                                                        ey + corner_offset[a][1],
                                                        ez + corner_offset[a][2] );
        int const color = static_cast< int >( ( ex & 1 ) | ( ( ey & 1 ) << 1 ) | ( ( ez & 1 ) << 2 ) );
        mesh.m_colors[color].push_back( e );
      }

  mesh.m_boundary = boundary_node_set( mesh );
  return mesh;
}

Mesh map_coordinates( Mesh const & mesh, std::function< Vec3( Vec3 const & ) > const & map )
{
  Mesh out = mesh;
  for( std::size_t n = 0; n < out.num_nodes(); ++n )
  {
    Vec3 const x = map( mesh.node_coords( n ) );
    out.m_coords[3 * n] = x[0];
    out.m_coords[3 * n + 1] = x[1];
    out.m_coords[3 * n + 2] = x[2];
  }
  return out;
}

std::vector< NodeIndex > boundary_node_set( Mesh const & mesh )
{
  BoxDims const & d = mesh.dims();
  std::vector< NodeIndex > nodes;
  for( std::size_t k = 0; k <= d.nz; ++k )
    for( std::size_t j = 0; j <= d.ny; ++j )
      for( std::size_t i = 0; i <= d.nx; ++i )
        if( i == 0 || j == 0 || k == 0 || i == d.nx || j == d.ny || k == d.nz )
          nodes.push_back( mesh.node_index( i, j, k ) );
  return nodes;
}

void write_mesh_csv( std::ostream & os, Mesh const & mesh )
{
  os << "nodes," << mesh.num_nodes() << ",elements," << mesh.num_elements() << '\n';
  auto const old_precision = os.precision( 17 );
  for( std::size_t n = 0; n < mesh.num_nodes(); ++n )
  {
    Vec3 const x = mesh.node_coords( n );
    os << n << ',' << x[0] << ',' << x[1] << ',' << x[2] << '\n';
  }
  os.precision( old_precision );
  for( std::size_t e = 0; e < mesh.num_elements(); ++e )
  {
    os << e;
    for( NodeIndex n : mesh.element_nodes( e ) )
      os << ',' << n;
    os << '\n';
  }
}

} // namespace lofem
