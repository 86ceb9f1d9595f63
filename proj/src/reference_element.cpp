#include "lofem/reference_element.hpp"

#include <cmath>

namespace lofem {

std::array< double, 8 > eval_basis_values( Vec3 const & xi )
{
  std::array< double, 8 > phi{};
  for( int j = 0; j < 8; ++j )
  {
    Vec3 const & n = reference_node_coords[j];
    phi[j] = 0.125 * ( 1.0 + n[0] * xi[0] ) * ( 1.0 + n[1] * xi[1] ) * ( 1.0 + n[2] * xi[2] );
  }
  return phi;
}

std::array< Vec3, 8 > eval_basis_gradients( Vec3 const & xi )
{
  std::array< Vec3, 8 > grad{};
  for( int j = 0; j < 8; ++j )
  {
    Vec3 const & n = reference_node_coords[j];
    double const a = 1.0 + n[0] * xi[0];
    double const b = 1.0 + n[1] * xi[1];
    double const c = 1.0 + n[2] * xi[2];
    grad[j] = { 0.125 * n[0] * b * c,
                0.125 * a * n[1] * c,
                0.125 * a * b * n[2] };
  }
  return grad;
}

ReferenceElement build_reference_element()
{
  ReferenceElement ref;
  double const g = 1.0 / std::sqrt( 3.0 );
  double const pts[2] = { -g, g };

  for( int q = 0; q < ReferenceElement::num_qpts; ++q )
  {
    Vec3 const xi{ pts[q & 1], pts[( q >> 1 ) & 1], pts[( q >> 2 ) & 1] };
    ref.qpt_coords[q] = xi;
    ref.qpt_weights[q] = 1.0;
    ref.basis_vals[q] = eval_basis_values( xi );
    ref.basis_grads[q] = eval_basis_gradients( xi );
  }
  return ref;
}

ReferenceElement const & q1_reference()
{
  static ReferenceElement const ref = build_reference_element();
  return ref;
}

} // namespace lofem
