#pragma once

#include "lofem/tensor.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace lofem {

using NodeIndex = std::uint32_t;

/// Elements per direction of a structured box.
struct BoxDims
{
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::size_t nz = 1;

  std::size_t num_elements() const { return nx * ny * nz; }
  std::size_t num_nodes() const { return ( nx + 1 ) * ( ny + 1 ) * ( nz + 1 ); }

  friend bool operator==( BoxDims const &, BoxDims const & ) = default;
};

/**
 * Structured hexahedral mesh of a box.
 *
 * Nodes are numbered lexicographically with x fastest: node(i,j,k) = i + (nx+1)*(j + (ny+1)*k).
 * Elements are numbered the same way over (ex,ey,ez), and every node_map row lists the
 * element corners in reference_element node order. Coordinates are stored node-major
 * (x,y,z contiguous per node).
 *
 * Elements are partitioned into 8 colors by the parity of (ex,ey,ez); two elements of the
 * same color never share a node.
 */
class Mesh
{
public:
  BoxDims const & dims() const { return m_dims; }
  Vec3 const & lengths() const { return m_lengths; }

  std::size_t num_nodes() const { return m_coords.size() / 3; }
  std::size_t num_elements() const { return m_node_map.size() / 8; }

  std::span< double const > coords() const { return m_coords; }
  Vec3 node_coords( std::size_t node ) const
  {
    return { m_coords[3 * node], m_coords[3 * node + 1], m_coords[3 * node + 2] };
  }

  std::span< NodeIndex const > node_map() const { return m_node_map; }
  std::span< NodeIndex const, 8 > element_nodes( std::size_t e ) const
  {
    return std::span< NodeIndex const, 8 >( m_node_map.data() + 8 * e, 8 );
  }

  /// Sorted indices of all nodes on the box surface.
  std::span< NodeIndex const > boundary_nodes() const { return m_boundary; }

  std::span< std::size_t const > color_elements( int color ) const { return m_colors[color]; }

  NodeIndex node_index( std::size_t i, std::size_t j, std::size_t k ) const
  {
    return static_cast< NodeIndex >( i + ( m_dims.nx + 1 ) * ( j + ( m_dims.ny + 1 ) * k ) );
  }

  /// Lattice position (i,j,k) of a node.
  std::array< std::size_t, 3 > lattice( std::size_t node ) const;

  /// Gathers the 8 corner coordinates of an element.
  std::array< Vec3, 8 > element_coords( std::size_t e ) const;

  friend Mesh build_box_mesh( BoxDims const & dims, Vec3 const & lengths );
  friend Mesh map_coordinates( Mesh const & mesh, std::function< Vec3( Vec3 const & ) > const & map );

private:
  Mesh() = default;

  BoxDims m_dims;
  Vec3 m_lengths{};
  std::vector< double > m_coords;
  std::vector< NodeIndex > m_node_map;
  std::vector< NodeIndex > m_boundary;
  std::array< std::vector< std::size_t >, 8 > m_colors;
};

/**
 * Builds the box [0,Lx]x[0,Ly]x[0,Lz] with the given element counts.
 * Throws ValidationError for zero dims or non-positive lengths and OverflowError
 * when the node count does not fit in 32-bit indices.
 */
Mesh build_box_mesh( BoxDims const & dims, Vec3 const & lengths = { 1.0, 1.0, 1.0 } );

/// Same topology with every node moved through `map`. Used for distorted-geometry tests.
Mesh map_coordinates( Mesh const & mesh, std::function< Vec3( Vec3 const & ) > const & map );

/// Nodes with any lattice index at 0 or at its maximum, sorted.
std::vector< NodeIndex > boundary_node_set( Mesh const & mesh );

/**
 * Debug dump. Format:
 *   line 1: "nodes,<N>,elements,<E>"
 *   N lines: "<node>,<x>,<y>,<z>"
 *   E lines: "<element>,<n0>,...,<n7>"
 */
void write_mesh_csv( std::ostream & os, Mesh const & mesh );

} // namespace lofem
