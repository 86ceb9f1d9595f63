#include "lofem/perfmodel.hpp"

#include "lofem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace lofem {

namespace {

constexpr double real_bytes = 8.0;
constexpr double index_bytes = 4.0;
constexpr double corners = 8.0;
constexpr double qpts = 8.0;

struct Counts
{
  double elements;
  double nodes;
  double c;
};

Counts counts( OperatorKind kind, BoxDims const & dims )
{
  if( dims.nx == 0 || dims.ny == 0 || dims.nz == 0 )
    throw ValidationError( "traffic model needs at least one element per direction" );
  return { static_cast< double >( dims.num_elements() ), static_cast< double >( dims.num_nodes() ),
           static_cast< double >( components_of( kind ) ) };
}

TrafficEstimate make_estimate( OperatorKind kind, Strategy strategy, BoxDims const & dims )
{
  TrafficEstimate t;
  t.kind = kind;
  t.strategy = strategy;
  t.num_elements = dims.num_elements();
  t.num_nodes = dims.num_nodes();
  t.ndof = t.num_nodes * static_cast< std::size_t >( components_of( kind ) );
  return t;
}

Range vectors_three_streams( Counts const & n )
{
  return { 3.0 * n.nodes * n.c * real_bytes, 3.0 * n.elements * corners * n.c * real_bytes };
}

double cell_constant_bytes( OperatorKind kind, Counts const & n )
{
  return kind == OperatorKind::elasticity ? n.elements * 2.0 * real_bytes : 0.0;
}

} // namespace

std::vector< HardwareSpec > default_hardware_presets()
{
  return { { "V100", 900e9 }, { "A100", 1935e9 }, { "MI250X", 1638e9 } };
}

std::vector< HardwareSpec > parse_hardware_presets( std::istream & is )
{
  std::vector< HardwareSpec > presets;
  std::string line;
  int line_no = 0;
  while( std::getline( is, line ) )
  {
    ++line_no;
    if( auto const hash = line.find( '#' ); hash != std::string::npos )
      line.erase( hash );
    std::istringstream fields( line );
    std::string name;
    if( !( fields >> name ) )
      continue;
    double gbs = 0.0;
    std::string extra;
    if( !( fields >> gbs ) || ( fields >> extra ) || !( gbs > 0.0 ) || !std::isfinite( gbs ) )
      throw ValidationError( "hardware presets line " + std::to_string( line_no ) +
                             ": expected '<name> <GB/s>' with positive bandwidth" );
    presets.push_back( { name, gbs * 1e9 } );
  }
  return presets;
}

std::vector< HardwareSpec > load_hardware_presets( std::filesystem::path const & path )
{
  std::ifstream file( path );
  if( !file )
    throw ValidationError( "cannot open hardware presets file " + path.string() );
  return parse_hardware_presets( file );
}

HardwareSpec const & find_hardware( std::span< HardwareSpec const > presets, std::string_view name )
{
  for( auto const & hw : presets )
    if( hw.name == name )
      return hw;
  throw ValidationError( "unknown hardware '" + std::string( name ) + "'" );
}

Range TrafficEstimate::total() const
{
  Range sum;
  for( auto const & c : components )
    if( c.in_total )
    {
      sum.best += c.bytes.best;
      sum.worst += c.bytes.worst;
    }
  return sum;
}

TrafficComponent const & TrafficEstimate::component( std::string_view name ) const
{
  for( auto const & c : components )
    if( c.name == name )
      return c;
  throw ValidationError( "traffic estimate has no component '" + std::string( name ) + "'" );
}

BoxDims cube_dims( std::size_t num_elements )
{
  if( num_elements == 0 )
    throw ValidationError( "element count must be >= 1" );
  auto n = static_cast< std::size_t >( std::llround( std::cbrt( static_cast< double >( num_elements ) ) ) );
  while( n * n * n > num_elements )
    --n;
  while( ( n + 1 ) * ( n + 1 ) * ( n + 1 ) <= num_elements )
    ++n;
  if( n * n * n != num_elements )
    throw ValidationError( "element count " + std::to_string( num_elements ) +
                           " is not a perfect cube; pass explicit dims" );
  return { n, n, n };
}

TrafficEstimate spmv_traffic( OperatorKind kind, BoxDims const & dims )
{
  Counts const n = counts( kind, dims );
  TrafficEstimate t = make_estimate( kind, Strategy::spmv, dims );
  // Interior stencil width, capped by the lattice so tiny meshes are not over-counted.
  std::size_t stencil = 1;
  for( std::size_t extent : { dims.nx, dims.ny, dims.nz } )
    stencil *= std::min< std::size_t >( 3, extent + 1 );
  t.nnz_per_row = stencil * static_cast< std::size_t >( components_of( kind ) );

  double const rows = n.nodes * n.c;
  double const matrix = rows * static_cast< double >( t.nnz_per_row ) * ( real_bytes + index_bytes );
  double const offsets = ( rows + 1.0 ) * 8.0;
  double const vectors = 2.0 * rows * real_bytes;
  t.components = { { "matrix", { matrix, matrix } },
                   { "row_offsets", { offsets, offsets } },
                   { "vectors", { vectors, vectors } } };
  return t;
}

TrafficEstimate matrix_free_traffic( OperatorKind kind, BoxDims const & dims )
{
  Counts const n = counts( kind, dims );
  TrafficEstimate t = make_estimate( kind, Strategy::matrix_free, dims );

  double const node_map = n.elements * corners * index_bytes;
  double const cells = cell_constant_bytes( kind, n );
  Range const positions{ n.nodes * 3.0 * real_bytes, n.elements * corners * 3.0 * real_bytes };
  t.components = { { "node_map", { node_map, node_map } },
                   { "cell_constants", { cells, cells } },
                   { "quadrature_storage", { 0.0, 0.0 } },
                   { "nodal_positions", positions },
                   { "vectors", vectors_three_streams( n ) } };
  return t;
}

TrafficEstimate partial_assembly_traffic( OperatorKind kind, BoxDims const & dims )
{
  Counts const n = counts( kind, dims );
  TrafficEstimate t = make_estimate( kind, Strategy::partial_assembly, dims );
  t.values_per_qpt = kind == OperatorKind::elasticity ? 21 : 6;

  double const node_map = n.elements * corners * index_bytes;
  double const cells = cell_constant_bytes( kind, n );
  double const quadrature = n.elements * qpts * t.values_per_qpt * real_bytes;
  t.components = { { "node_map", { node_map, node_map } },
                   { "cell_constants", { cells, cells }, false },
                   { "quadrature_storage", { quadrature, quadrature } },
                   { "vectors", vectors_three_streams( n ) } };
  return t;
}

TrafficEstimate spmv_traffic( OperatorKind kind, std::size_t num_elements )
{
  return spmv_traffic( kind, cube_dims( num_elements ) );
}

TrafficEstimate matrix_free_traffic( OperatorKind kind, std::size_t num_elements )
{
  return matrix_free_traffic( kind, cube_dims( num_elements ) );
}

TrafficEstimate partial_assembly_traffic( OperatorKind kind, std::size_t num_elements )
{
  return partial_assembly_traffic( kind, cube_dims( num_elements ) );
}

TrafficEstimate traffic( Strategy strategy, OperatorKind kind, BoxDims const & dims )
{
  switch( strategy )
  {
    case Strategy::matrix_free: return matrix_free_traffic( kind, dims );
    case Strategy::partial_assembly: return partial_assembly_traffic( kind, dims );
    case Strategy::spmv: return spmv_traffic( kind, dims );
  }
  throw ValidationError( "unknown strategy" );
}

SpeedOfLight speed_of_light( TrafficEstimate const & traffic, HardwareSpec const & hw, std::size_t ndof )
{
  if( !( hw.bandwidth > 0.0 ) )
    throw ValidationError( "hardware bandwidth must be > 0" );
  SpeedOfLight sol;
  sol.bytes = traffic.total();
  sol.seconds = { sol.bytes.best / hw.bandwidth, sol.bytes.worst / hw.bandwidth };
  double const dofs = static_cast< double >( ndof );
  sol.dofs_per_second = { dofs / sol.seconds.best, dofs / sol.seconds.worst };
  return sol;
}

} // namespace lofem
