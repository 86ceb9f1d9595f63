#include "lofem/reference_element.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lofem;

namespace {

double const s3 = 1.0 / std::sqrt( 3.0 );

double exact_monomial_integral( int a )
{
  return a % 2 ? 0.0 : 2.0 / ( a + 1 );
}

} // namespace

TEST( ReferenceElement, FirstQuadraturePoint )
{
  ReferenceElement const & ref = q1_reference();
  for( int d = 0; d < 3; ++d )
  {
    EXPECT_DOUBLE_EQ( ref.qpt_coords[0][d], -s3 );
    EXPECT_DOUBLE_EQ( ref.qpt_coords[7][d], s3 );
  }
  EXPECT_EQ( ref.qpt_weights[0], 1.0 );
}

TEST( ReferenceElement, QuadraturePointsAreLexicographicXiFastest )
{
  ReferenceElement const & ref = q1_reference();
  for( int q = 0; q < 8; ++q )
  {
    EXPECT_DOUBLE_EQ( ref.qpt_coords[q][0], ( q & 1 ) ? s3 : -s3 );
    EXPECT_DOUBLE_EQ( ref.qpt_coords[q][1], ( q & 2 ) ? s3 : -s3 );
    EXPECT_DOUBLE_EQ( ref.qpt_coords[q][2], ( q & 4 ) ? s3 : -s3 );
  }
}

TEST( ReferenceElement, WeightsPositiveAndSumToEight )
{
  double sum = 0.0;
  for( double w : q1_reference().qpt_weights )
  {
    EXPECT_GT( w, 0.0 );
    sum += w;
  }
  EXPECT_DOUBLE_EQ( sum, 8.0 );
}

TEST( ReferenceElement, PartitionOfUnityAtQuadraturePoints )
{
  ReferenceElement const & ref = q1_reference();
  for( int q = 0; q < 8; ++q )
  {
    double sum = 0.0;
    Vec3 gsum{};
    for( int j = 0; j < 8; ++j )
    {
      sum += ref.basis_vals[q][j];
      for( int d = 0; d < 3; ++d )
        gsum[d] += ref.basis_grads[q][j][d];
    }
    EXPECT_NEAR( sum, 1.0, 1e-15 );
    for( int d = 0; d < 3; ++d )
      EXPECT_NEAR( gsum[d], 0.0, 1e-15 );
  }
}

TEST( ReferenceElement, KroneckerPropertyAtNodes )
{
  for( int k = 0; k < 8; ++k )
  {
    auto const vals = eval_basis_values( reference_node_coords[k] );
    for( int i = 0; i < 8; ++i )
      EXPECT_EQ( vals[i], i == k ? 1.0 : 0.0 ) << "basis " << i << " at node " << k;
  }
}

TEST( ReferenceElement, GradientOfOriginCornerAtCentre )
{
  auto const g = eval_basis_gradients( { 0.0, 0.0, 0.0 } );
  for( int d = 0; d < 3; ++d )
    EXPECT_DOUBLE_EQ( g[0][d], -0.125 );
}

TEST( ReferenceElement, GradientRowSumVanishesAnywhere )
{
  for( Vec3 const & xi : { Vec3{ 0.3, -0.7, 0.1 }, Vec3{ 1.5, 2.0, -3.0 }, Vec3{ -1.0, 1.0, 0.25 } } )
  {
    auto const g = eval_basis_gradients( xi );
    for( int d = 0; d < 3; ++d )
    {
      double sum = 0.0;
      for( int j = 0; j < 8; ++j )
        sum += g[j][d];
      EXPECT_NEAR( sum, 0.0, 1e-15 );
    }
  }
}

TEST( ReferenceElement, EvaluatorsMatchTabulatedData )
{
  ReferenceElement const & ref = q1_reference();
  for( int q = 0; q < 8; ++q )
  {
    auto const g = eval_basis_gradients( ref.qpt_coords[q] );
    auto const v = eval_basis_values( ref.qpt_coords[q] );
    for( int j = 0; j < 8; ++j )
    {
      EXPECT_DOUBLE_EQ( v[j], ref.basis_vals[q][j] );
      for( int d = 0; d < 3; ++d )
        EXPECT_DOUBLE_EQ( g[j][d], ref.basis_grads[q][j][d] );
    }
  }
}

TEST( ReferenceElement, GradientsMatchFiniteDifferences )
{
  double const h = 1e-6;
  for( Vec3 const & xi : { Vec3{ 0.2, -0.4, 0.9 }, Vec3{ -s3, s3, -s3 }, Vec3{ 0.0, 0.0, 0.0 } } )
  {
    auto const g = eval_basis_gradients( xi );
    for( int d = 0; d < 3; ++d )
    {
      Vec3 xp = xi, xm = xi;
      xp[d] += h;
      xm[d] -= h;
      auto const vp = eval_basis_values( xp );
      auto const vm = eval_basis_values( xm );
      for( int j = 0; j < 8; ++j )
        EXPECT_NEAR( ( vp[j] - vm[j] ) / ( 2 * h ), g[j][d], 1e-8 );
    }
  }
}

TEST( ReferenceElement, IntegratesCubicMonomialsExactly )
{
  ReferenceElement const & ref = q1_reference();
  for( int a = 0; a <= 3; ++a )
    for( int b = 0; b <= 3; ++b )
      for( int c = 0; c <= 3; ++c )
      {
        double sum = 0.0;
        for( int q = 0; q < 8; ++q )
        {
          Vec3 const & x = ref.qpt_coords[q];
          sum += ref.qpt_weights[q] * std::pow( x[0], a ) * std::pow( x[1], b ) * std::pow( x[2], c );
        }
        double const exact = exact_monomial_integral( a ) * exact_monomial_integral( b ) * exact_monomial_integral( c );
        EXPECT_NEAR( sum, exact, 1e-14 * std::max( 1.0, std::abs( exact ) ) ) << a << b << c;
      }
}

TEST( ReferenceElement, ReproducesTrilinearFields )
{
  auto field = []( Vec3 const & x ) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2] + 0.25 * x[0] * x[1] * x[2]; };
  Vec3 const xi{ 0.35, -0.6, 0.8 };
  auto const v = eval_basis_values( xi );
  double interp = 0.0;
  for( int j = 0; j < 8; ++j )
    interp += v[j] * field( reference_node_coords[j] );
  EXPECT_NEAR( interp, field( xi ), 1e-14 );
}

TEST( ReferenceElement, SharedInstanceIsStable )
{
  EXPECT_EQ( &q1_reference(), &q1_reference() );
  ReferenceElement const fresh = build_reference_element();
  EXPECT_EQ( fresh.qpt_coords, q1_reference().qpt_coords );
}
