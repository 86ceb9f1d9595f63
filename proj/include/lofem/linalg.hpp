#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lofem {

/**
 * Nodal dof vector, node-major blocked: the dof of node j (0-based), component l sits at
 * index components*j + l.
 */
class FieldVector
{
public:
  FieldVector() = default;
  FieldVector( std::size_t num_nodes, int components, double fill = 0.0 );

  std::size_t num_nodes() const { return m_num_nodes; }
  int components() const { return m_components; }
  std::size_t size() const { return m_values.size(); }

  std::span< double > values() { return m_values; }
  std::span< double const > values() const { return m_values; }
  double * data() { return m_values.data(); }
  double const * data() const { return m_values.data(); }

  double & operator[]( std::size_t i ) { return m_values[i]; }
  double operator[]( std::size_t i ) const { return m_values[i]; }

  double & at( std::size_t node, int component ) { return m_values[m_components * node + component]; }
  double at( std::size_t node, int component ) const { return m_values[m_components * node + component]; }

  void fill( double value );

  bool same_layout( FieldVector const & other ) const
  {
    return m_num_nodes == other.m_num_nodes && m_components == other.m_components;
  }

  friend bool operator==( FieldVector const &, FieldVector const & ) = default;

private:
  std::size_t m_num_nodes = 0;
  int m_components = 1;
  std::vector< double > m_values;
};

/// Compressed sparse rows with 8-byte row offsets, 4-byte columns and 8-byte values.
struct CsrMatrix
{
  std::size_t num_rows = 0;
  std::size_t num_cols = 0;
  std::vector< std::uint64_t > row_offsets;
  std::vector< std::uint32_t > col_indices;
  std::vector< double > values;

  std::size_t nnz() const { return values.size(); }
  std::size_t row_nnz( std::size_t row ) const { return row_offsets[row + 1] - row_offsets[row]; }

  /// Bytes of values plus column indices: 12 per non-zero.
  std::size_t entry_bytes() const
  {
    return values.size() * sizeof( double ) + col_indices.size() * sizeof( std::uint32_t );
  }
  std::size_t row_offset_bytes() const { return row_offsets.size() * sizeof( std::uint64_t ); }

  /// Throws DimensionError if offsets, sorting or column bounds are broken.
  void validate() const;
};

enum class Reduction
{
  sequential,
  pairwise_tree,
  blocked_deterministic,
  compensated
};

std::string to_string( Reduction reduction );
Reduction parse_reduction( std::string_view name );

/// Block length of the blocked_deterministic reduction. Results depend on it, never on workers.
inline constexpr std::size_t dot_block_size = 2048;

double dot( std::span< double const > a, std::span< double const > b,
            Reduction strategy = Reduction::blocked_deterministic, int workers = 1 );

/// Throws DimensionError on layout mismatch.
double dot( FieldVector const & a, FieldVector const & b,
            Reduction strategy = Reduction::blocked_deterministic, int workers = 1 );

/// y <- y + alpha x
void axpy( FieldVector & y, double alpha, FieldVector const & x, int workers = 1 );

/// y <- x + beta y
void xpby( FieldVector const & x, double beta, FieldVector & y, int workers = 1 );

/// y <- A x. `y` must already have A.num_rows entries.
void spmv( CsrMatrix const & a, FieldVector const & x, FieldVector & y, int workers = 1 );

/// Allocating form; y takes x's components and A.num_rows / components nodes.
FieldVector spmv( CsrMatrix const & a, FieldVector const & x, int workers = 1 );

} // namespace lofem
