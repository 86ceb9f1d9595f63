#pragma once

#include <array>

namespace lofem {

using Vec3 = std::array< double, 3 >;
using Mat3 = std::array< Vec3, 3 >;

/// Row-major C x 3 block, row a holds the reference or physical gradient of component a.
template< int C >
using Grad = std::array< Vec3, C >;

inline double det( Mat3 const & a )
{
  return a[0][0] * ( a[1][1] * a[2][2] - a[1][2] * a[2][1] )
       - a[0][1] * ( a[1][0] * a[2][2] - a[1][2] * a[2][0] )
       + a[0][2] * ( a[1][0] * a[2][1] - a[1][1] * a[2][0] );
}

/// Inverse via the adjugate. Returns the determinant; `inv` is unspecified when it is zero.
inline double invert( Mat3 const & a, Mat3 & inv )
{
  double const d = det( a );
  double const s = 1.0 / d;
  inv[0][0] = ( a[1][1] * a[2][2] - a[1][2] * a[2][1] ) * s;
  inv[0][1] = ( a[0][2] * a[2][1] - a[0][1] * a[2][2] ) * s;
  inv[0][2] = ( a[0][1] * a[1][2] - a[0][2] * a[1][1] ) * s;
  inv[1][0] = ( a[1][2] * a[2][0] - a[1][0] * a[2][2] ) * s;
  inv[1][1] = ( a[0][0] * a[2][2] - a[0][2] * a[2][0] ) * s;
  inv[1][2] = ( a[0][2] * a[1][0] - a[0][0] * a[1][2] ) * s;
  inv[2][0] = ( a[1][0] * a[2][1] - a[1][1] * a[2][0] ) * s;
  inv[2][1] = ( a[0][1] * a[2][0] - a[0][0] * a[2][1] ) * s;
  inv[2][2] = ( a[0][0] * a[1][1] - a[0][1] * a[1][0] ) * s;
  return d;
}

inline Mat3 multiply( Mat3 const & a, Mat3 const & b )
{
  Mat3 c{};
  for( int i = 0; i < 3; ++i )
    for( int j = 0; j < 3; ++j )
      for( int k = 0; k < 3; ++k )
        c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat3 transpose( Mat3 const & a )
{
  Mat3 t{};
  for( int i = 0; i < 3; ++i )
    for( int j = 0; j < 3; ++j )
      t[i][j] = a[j][i];
  return t;
}

inline double dot3( Vec3 const & a, Vec3 const & b )
{
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

} // namespace lofem
