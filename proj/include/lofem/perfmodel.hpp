#pragma once

#include "lofem/kinds.hpp"
#include "lofem/mesh.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lofem {

/// A device characterised only by its peak memory bandwidth.
struct HardwareSpec
{
  std::string name;
  double bandwidth = 0.0; ///< bytes per second
};

/// V100 900 GB/s, A100 1935 GB/s, MI250X 1638 GB/s.
std::vector< HardwareSpec > default_hardware_presets();

/**
 * Reads "<name> <GB/s>" lines; blank lines and '#' comments are skipped.
 * Throws ValidationError on malformed lines or non-positive bandwidth.
 */
std::vector< HardwareSpec > parse_hardware_presets( std::istream & is );
std::vector< HardwareSpec > load_hardware_presets( std::filesystem::path const & path );

HardwareSpec const & find_hardware( std::span< HardwareSpec const > presets, std::string_view name );

/// (perfect-cache, no-cache) pair. For SpMV both ends coincide.
struct Range
{
  double best = 0.0;
  double worst = 0.0;
};

struct TrafficComponent
{
  std::string name;
  Range bytes;
  bool in_total = true;
};

/**
 * Bytes moved by one operator application.
 *
 * Component names: "matrix", "row_offsets", "node_map", "cell_constants",
 * "quadrature_storage", "nodal_positions", "vectors". A component with in_total == false
 * is reported but not summed (the elasticity cell constants under partial assembly).
 */
struct TrafficEstimate
{
  OperatorKind kind = OperatorKind::scalar_laplace;
  Strategy strategy = Strategy::matrix_free;
  std::size_t num_elements = 0;
  std::size_t num_nodes = 0;
  std::size_t ndof = 0;
  std::size_t nnz_per_row = 0; ///< SpMV only
  int values_per_qpt = 0;      ///< stored quadrature data, 0 for matrix-free and SpMV
  std::vector< TrafficComponent > components;

  Range total() const;
  /// Throws ValidationError for an unknown component name.
  TrafficComponent const & component( std::string_view name ) const;
};

/// Cube dims for a perfect-cube element count; throws ValidationError otherwise.
BoxDims cube_dims( std::size_t num_elements );

/**
 * SpMV: matrix = rows * nnz_per_row * 12 B (27 or 81 per row; fewer
 * when a direction has a single element), row offsets (rows+1) * 8 B,
 * vectors = input + output = 2 * ndof * 8 B. The row-offset line is part of the total.
 */
TrafficEstimate spmv_traffic( OperatorKind kind, BoxDims const & dims );
TrafficEstimate spmv_traffic( OperatorKind kind, std::size_t num_elements );

/**
 * Matrix-free: node map 32 B/element, cell constants 2 doubles/element (elasticity), nodal
 * positions nodes*24 B best / elements*8*24 B worst, vectors = input read + output read +
 * output write, counted over nodes (best) or element-corner incidences (worst).
 */
TrafficEstimate matrix_free_traffic( OperatorKind kind, BoxDims const & dims );
TrafficEstimate matrix_free_traffic( OperatorKind kind, std::size_t num_elements );

/**
 * Partial assembly: node map, quadrature storage elements*8*(6 or 21)*8 B, vectors as for
 * matrix-free; no nodal positions. Elasticity cell constants are listed but excluded.
 */
TrafficEstimate partial_assembly_traffic( OperatorKind kind, BoxDims const & dims );
TrafficEstimate partial_assembly_traffic( OperatorKind kind, std::size_t num_elements );

TrafficEstimate traffic( Strategy strategy, OperatorKind kind, BoxDims const & dims );

struct SpeedOfLight
{
  Range bytes;
  Range seconds;
  Range dofs_per_second;
};

/// time = bytes / bandwidth per scenario, throughput = ndof / time.
SpeedOfLight speed_of_light( TrafficEstimate const & traffic, HardwareSpec const & hw, std::size_t ndof );

} // namespace lofem
