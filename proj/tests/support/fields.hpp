#pragma once

#include "lofem/linalg.hpp"
#include "lofem/mesh.hpp"

#include <cmath>
#include <vector>

namespace oracle {

/// Three rigid translations followed by three infinitesimal rotations e_k x (x - x0).
inline std::vector< lofem::FieldVector > rigid_modes( lofem::Mesh const & mesh )
{
  std::vector< lofem::FieldVector > modes;
  for( int k = 0; k < 3; ++k )
  {
    lofem::FieldVector t( mesh.num_nodes(), 3 );
    for( std::size_t n = 0; n < mesh.num_nodes(); ++n )
      t.at( n, k ) = 1.0;
    modes.push_back( std::move( t ) );
  }
  lofem::Vec3 const x0{ 0.3, -0.1, 0.7 };
  for( int k = 0; k < 3; ++k )
  {
    lofem::FieldVector r( mesh.num_nodes(), 3 );
    int const a = ( k + 1 ) % 3, b = ( k + 2 ) % 3;
    for( std::size_t n = 0; n < mesh.num_nodes(); ++n )
    {
      lofem::Vec3 const x = mesh.node_coords( n );
      r.at( n, a ) = -( x[b] - x0[b] );
      r.at( n, b ) = x[a] - x0[a];
    }
    modes.push_back( std::move( r ) );
  }
  return modes;
}

/// Smooth, orientation-preserving distortion of the unit box.
inline lofem::Vec3 wobble( lofem::Vec3 const & p )
{
  double const x = p[0], y = p[1], z = p[2];
  return { x + 0.08 * std::sin( M_PI * y ) * std::sin( M_PI * z ),
           y + 0.06 * std::sin( M_PI * x ) * std::cos( M_PI * z ),
           z + 0.05 * std::sin( 2.0 * M_PI * x * y ) + 0.3 * z * x };
}

} // namespace oracle
