#pragma once

#include "lofem/tensor.hpp"

#include <array>

namespace lofem {

/**
 * Trilinear (Q1) reference hexahedron on [-1,1]^3 with the 2x2x2 Gauss-Legendre rule.
 *
 * Node ordering follows the VTK/CEED hexahedron convention: bottom face (xi2 = -1)
 * counterclockwise starting at the origin corner, then the top face in the same order.
 *
 *          7 o-----------o 6
 *           /|          /|            Node   xi0  xi1  xi2
 *          / |         / |             0     -1   -1   -1
 *       4 o-----------o 5|             1      1   -1   -1
 *         |  |        |  |             2      1    1   -1
 *         |3 o--------|--o 2           3     -1    1   -1
 *         | /         | /              4     -1   -1    1
 *         |/          |/               5      1   -1    1
 *         o-----------o                6      1    1    1
 *        0             1               7     -1    1    1
 *
 * Quadrature points are numbered lexicographically with xi0 fastest, so point 0 sits at
 * (-1/sqrt3, -1/sqrt3, -1/sqrt3) and point 7 at (1/sqrt3, 1/sqrt3, 1/sqrt3).
 * Every other module uses this node ordering.
 */
struct ReferenceElement
{
  static constexpr int num_nodes = 8;
  static constexpr int num_qpts = 8;

  std::array< Vec3, num_qpts > qpt_coords{};
  std::array< double, num_qpts > qpt_weights{};
  /// basis_grads[q][j] = reference gradient of basis function j at quadrature point q.
  std::array< std::array< Vec3, num_nodes >, num_qpts > basis_grads{};
  /// basis_vals[q][j] = value of basis function j at quadrature point q.
  std::array< std::array< double, num_nodes >, num_qpts > basis_vals{};
};

/// Reference coordinates of the eight corner nodes.
inline constexpr std::array< Vec3, 8 > reference_node_coords{ {
  { -1.0, -1.0, -1.0 },
  {  1.0, -1.0, -1.0 },
  {  1.0,  1.0, -1.0 },
  { -1.0,  1.0, -1.0 },
  { -1.0, -1.0,  1.0 },
  {  1.0, -1.0,  1.0 },
  {  1.0,  1.0,  1.0 },
  { -1.0,  1.0,  1.0 } } };

ReferenceElement build_reference_element();

/// Process-wide immutable instance.
ReferenceElement const & q1_reference();

/// Basis values at an arbitrary reference point. Points outside the cube extrapolate.
std::array< double, 8 > eval_basis_values( Vec3 const & xi );

/// Basis reference gradients at an arbitrary reference point. Points outside the cube extrapolate.
std::array< Vec3, 8 > eval_basis_gradients( Vec3 const & xi );

} // namespace lofem
