#include "lofem/linalg.hpp"

#include "lofem/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lofem {

FieldVector::FieldVector( std::size_t num_nodes, int components, double fill )
: m_num_nodes( num_nodes ),
  m_components( components ),
  m_values( num_nodes * static_cast< std::size_t >( components ), fill )
{
  if( components != 1 && components != 3 )
    throw ValidationError( "FieldVector supports 1 or 3 components per node" );
}

void FieldVector::fill( double value )
{
  std::fill( m_values.begin(), m_values.end(), value );
}

void CsrMatrix::validate() const
{
  if( row_offsets.size() != num_rows + 1 || row_offsets.front() != 0 ||
      row_offsets.back() != values.size() || col_indices.size() != values.size() )
    throw DimensionError( "CSR arrays have inconsistent sizes" );
  for( std::size_t r = 0; r < num_rows; ++r )
  {
    if( row_offsets[r + 1] < row_offsets[r] )
      throw DimensionError( "CSR row offsets decrease at row " + std::to_string( r ) );
    for( std::uint64_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k )
    {
      if( col_indices[k] >= num_cols )
        throw DimensionError( "CSR column out of range in row " + std::to_string( r ) );
      if( k > row_offsets[r] && col_indices[k] <= col_indices[k - 1] )
        throw DimensionError( "CSR columns not strictly increasing in row " + std::to_string( r ) );
    }
  }
}

std::string to_string( Reduction reduction )
{
  switch( reduction )
  {
    case Reduction::sequential: return "sequential";
    case Reduction::pairwise_tree: return "pairwise_tree";
    case Reduction::blocked_deterministic: return "blocked_deterministic";
    case Reduction::compensated: return "compensated";
  }
  return "unknown";
}

Reduction parse_reduction( std::string_view name )
{
  if( name == "sequential" ) return Reduction::sequential;
  if( name == "pairwise_tree" || name == "pairwise" ) return Reduction::pairwise_tree;
  if( name == "blocked_deterministic" || name == "blocked" ) return Reduction::blocked_deterministic;
  if( name == "compensated" || name == "kahan" ) return Reduction::compensated;
  throw ValidationError( "unknown reduction '" + std::string( name ) + "'" );
}

namespace {

double dot_sequential( double const * a, double const * b, std::size_t n )
{
  double s = 0.0;
  for( std::size_t i = 0; i < n; ++i )
    s += a[i] * b[i];
  return s;
}

double dot_pairwise( double const * a, double const * b, std::size_t n )
{
  constexpr std::size_t leaf = 32;
  if( n <= leaf )
    return dot_sequential( a, b, n );
  std::size_t const half = n / 2;
  return dot_pairwise( a, b, half ) + dot_pairwise( a + half, b + half, n - half );
}

// Neumaier's variant of Kahan summation.
double dot_compensated( double const * a, double const * b, std::size_t n )
{
  double s = 0.0;
  double c = 0.0;
  for( std::size_t i = 0; i < n; ++i )
  {
    double const x = a[i] * b[i];
    double const t = s + x;
    if( std::abs( s ) >= std::abs( x ) )
      c += ( s - t ) + x;
    else
      c += ( x - t ) + s;
    s = t;
  }
  return s + c;
}

double dot_blocked( double const * a, double const * b, std::size_t n, int workers )
{
  std::size_t const num_blocks = ( n + dot_block_size - 1 ) / dot_block_size;
  if( num_blocks == 0 )
    return 0.0;
  std::vector< double > partial( num_blocks );

  #pragma omp parallel for num_threads( workers ) schedule( static )
  for( std::size_t blk = 0; blk < num_blocks; ++blk )
  {
    std::size_t const begin = blk * dot_block_size;
    std::size_t const len = std::min( dot_block_size, n - begin );
    partial[blk] = dot_sequential( a + begin, b + begin, len );
  }

  // Fixed-shape pairwise combine of the block partials.
  for( std::size_t stride = 1; stride < num_blocks; stride *= 2 )
    for( std::size_t i = 0; i + stride < num_blocks; i += 2 * stride )
      partial[i] += partial[i + stride];
  return partial[0];
}

void check_workers( int workers )
{
  if( workers < 1 )
    throw ValidationError( "workers must be >= 1" );
}

} // namespace

double dot( std::span< double const > a, std::span< double const > b, Reduction strategy, int workers )
{
  if( a.size() != b.size() )
    throw DimensionError( "dot: length mismatch " + std::to_string( a.size() ) + " vs " +
                          std::to_string( b.size() ) );
  check_workers( workers );
  switch( strategy )
  {
    case Reduction::sequential: return dot_sequential( a.data(), b.data(), a.size() );
    case Reduction::pairwise_tree: return dot_pairwise( a.data(), b.data(), a.size() );
    case Reduction::blocked_deterministic: return dot_blocked( a.data(), b.data(), a.size(), workers );
    case Reduction::compensated: return dot_compensated( a.data(), b.data(), a.size() );
  }
  throw ValidationError( "dot: unknown reduction" );
}

double dot( FieldVector const & a, FieldVector const & b, Reduction strategy, int workers )
{
  if( !a.same_layout( b ) )
    throw DimensionError( "dot: vector layouts differ" );
  return dot( a.values(), b.values(), strategy, workers );
}

void axpy( FieldVector & y, double alpha, FieldVector const & x, int workers )
{
  if( !y.same_layout( x ) )
    throw DimensionError( "axpy: vector layouts differ" );
  check_workers( workers );
  double * yv = y.data();
  double const * xv = x.data();
  std::size_t const n = y.size();
  #pragma omp parallel for num_threads( workers ) schedule( static )
  for( std::size_t i = 0; i < n; ++i )
    yv[i] += alpha * xv[i];
}

void xpby( FieldVector const & x, double beta, FieldVector & y, int workers )
{
  if( !y.same_layout( x ) )
    throw DimensionError( "xpby: vector layouts differ" );
  check_workers( workers );
  double * yv = y.data();
  double const * xv = x.data();
  std::size_t const n = y.size();
  #pragma omp parallel for num_threads( workers ) schedule( static )
  for( std::size_t i = 0; i < n; ++i )
    yv[i] = xv[i] + beta * yv[i];
}

void spmv( CsrMatrix const & a, FieldVector const & x, FieldVector & y, int workers )
{
  if( a.num_cols != x.size() )
    throw DimensionError( "spmv: matrix has " + std::to_string( a.num_cols ) +
                          " columns, vector has " + std::to_string( x.size() ) + " entries" );
  if( a.num_rows != y.size() )
    throw DimensionError( "spmv: output length does not match matrix rows" );
  check_workers( workers );

  double const * xv = x.data();
  double * yv = y.data();
  std::uint64_t const * offsets = a.row_offsets.data();
  std::uint32_t const * cols = a.col_indices.data();
  double const * vals = a.values.data();
  std::size_t const rows = a.num_rows;

  #pragma omp parallel for num_threads( workers ) schedule( static )
  for( std::size_t r = 0; r < rows; ++r )
  {
    double s = 0.0;
    for( std::uint64_t k = offsets[r]; k < offsets[r + 1]; ++k )
      s += vals[k] * xv[cols[k]];
    yv[r] = s;
  }
}

FieldVector spmv( CsrMatrix const & a, FieldVector const & x, int workers )
{
  int const c = x.components();
  if( a.num_rows % static_cast< std::size_t >( c ) != 0 )
    throw DimensionError( "spmv: row count not divisible by components per node" );
  FieldVector y( a.num_rows / static_cast< std::size_t >( c ), c );
  spmv( a, x, y, workers );
  return y;
}

} // namespace lofem
