#pragma once

#include "lofem/kinds.hpp"
#include "lofem/linalg.hpp"
#include "lofem/mesh.hpp"
#include "lofem/reference_element.hpp"
#include "lofem/tensor.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lofem {

/// sigma = lambda tr(eps) I + 2 mu eps, eps = sym(grad u).
struct IsotropicElasticity
{
  double lambda = 1.0;
  double mu = 1.0;

  /// Requires mu > 0 and a non-negative bulk modulus lambda + 2mu/3.
  void validate() const;
};

/**
 * Output accumulation across elements.
 * colored: 8 node-disjoint element colors processed one after another; bitwise
 *          reproducible for any worker count.
 * atomic:  all elements in parallel with atomic adds into the output.
 */
enum class ScatterMode
{
  colored,
  atomic
};

std::string to_string( ScatterMode mode );
/// Throws ValidationError for anything but "colored" or "atomic".
ScatterMode parse_scatter_mode( std::string_view name );

struct ExecutionPolicy
{
  int workers = 1;
  ScatterMode scatter = ScatterMode::colored;
};

/// Jacobian data at one quadrature point of one element.
struct ElementGeometry
{
  Mat3 jacobian{};
  Mat3 inv_jacobian{};
  double det = 0.0;
};

/// J = sum_j x_j (x) grad_ref phi_j. Throws GeometryError(element) if det J <= 0.
ElementGeometry element_geometry( std::array< Vec3, 8 > const & x,
                                  std::array< Vec3, 8 > const & ref_grads,
                                  std::size_t element );

// Matrix-free actions v = A u of the unconstrained operators. Geometry is recomputed from
// the nodal coordinates at every quadrature point; nothing is cached between calls.

void apply_scalar_laplace( Mesh const & mesh, ReferenceElement const & ref,
                           FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy = {} );
FieldVector apply_scalar_laplace( Mesh const & mesh, ReferenceElement const & ref,
                                  FieldVector const & u, ExecutionPolicy const & policy = {} );

void apply_vector_laplace( Mesh const & mesh, ReferenceElement const & ref,
                           FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy = {} );
FieldVector apply_vector_laplace( Mesh const & mesh, ReferenceElement const & ref,
                                  FieldVector const & u, ExecutionPolicy const & policy = {} );

void apply_elasticity( Mesh const & mesh, ReferenceElement const & ref, IsotropicElasticity const & material,
                       FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy = {} );
FieldVector apply_elasticity( Mesh const & mesh, ReferenceElement const & ref,
                              IsotropicElasticity const & material, FieldVector const & u,
                              ExecutionPolicy const & policy = {} );

/**
 * Quadrature-point factors precomputed once so that the apply reads no coordinates.
 *
 * Laplace kinds, 6 values per point: the upper triangle of w_q detJ J^-1 J^-T in the
 * order (00, 11, 22, 12, 02, 01).
 *
 * Elasticity, 30 values per point: the 21-entry upper triangle (row-major) of the Voigt
 * stiffness w_q detJ C, followed by the 9 entries of J^-1 (row-major). Voigt strain order
 * is (xx, yy, zz, yz, xz, xy) with engineering shears.
 */
class PartialAssemblyData
{
public:
  static constexpr int laplace_values_per_qpt = 6;
  static constexpr int elasticity_values_per_qpt = 30;

  static constexpr int values_per_qpt_for( OperatorKind kind )
  {
    return kind == OperatorKind::elasticity ? elasticity_values_per_qpt : laplace_values_per_qpt;
  }

  OperatorKind kind() const { return m_kind; }
  std::size_t num_elements() const { return m_num_elements; }
  int values_per_qpt() const { return values_per_qpt_for( m_kind ); }
  std::size_t storage_bytes() const { return m_factors.size() * sizeof( double ); }

  std::span< double const > qpt_factors( std::size_t element, int q ) const
  {
    std::size_t const n = static_cast< std::size_t >( values_per_qpt() );
    return { m_factors.data() + ( element * ReferenceElement::num_qpts + q ) * n, n };
  }

  friend PartialAssemblyData setup_partial_assembly( Mesh const &, ReferenceElement const &, OperatorKind,
                                                     std::optional< IsotropicElasticity > const &, int );

private:
  OperatorKind m_kind = OperatorKind::scalar_laplace;
  std::size_t m_num_elements = 0;
  std::vector< double > m_factors;
};

PartialAssemblyData setup_partial_assembly( Mesh const & mesh, ReferenceElement const & ref, OperatorKind kind,
                                            std::optional< IsotropicElasticity > const & material = std::nullopt,
                                            int workers = 1 );

/// Same result as the matching matrix-free apply. Throws DimensionError on kind/layout mismatch.
void apply_partial_assembly( PartialAssemblyData const & data, Mesh const & mesh, ReferenceElement const & ref,
                             FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy = {} );
FieldVector apply_partial_assembly( PartialAssemblyData const & data, Mesh const & mesh,
                                    ReferenceElement const & ref, FieldVector const & u,
                                    ExecutionPolicy const & policy = {} );

/// A linear map on nodal field vectors.
class Operator
{
public:
  virtual ~Operator() = default;

  virtual std::size_t num_nodes() const = 0;
  virtual int components() const = 0;
  virtual void apply( FieldVector const & u, FieldVector & v ) const = 0;

  std::size_t num_dofs() const { return num_nodes() * static_cast< std::size_t >( components() ); }
  FieldVector make_vector( double fill = 0.0 ) const { return FieldVector( num_nodes(), components(), fill ); }
  FieldVector apply_to( FieldVector const & u ) const
  {
    FieldVector v = make_vector();
    apply( u, v );
    return v;
  }
};

/// Mesh and reference element are held by reference and must outlive the operator.
class MatrixFreeOperator final : public Operator
{
public:
  MatrixFreeOperator( OperatorKind kind, Mesh const & mesh, ReferenceElement const & ref,
                      IsotropicElasticity material = {}, ExecutionPolicy policy = {} );

  std::size_t num_nodes() const override { return m_mesh.num_nodes(); }
  int components() const override { return components_of( m_kind ); }
  void apply( FieldVector const & u, FieldVector & v ) const override;

private:
  OperatorKind m_kind;
  Mesh const & m_mesh;
  ReferenceElement const & m_ref;
  IsotropicElasticity m_material;
  ExecutionPolicy m_policy;
};

class PartialAssemblyOperator final : public Operator
{
public:
  PartialAssemblyOperator( OperatorKind kind, Mesh const & mesh, ReferenceElement const & ref,
                           IsotropicElasticity material = {}, ExecutionPolicy policy = {} );

  std::size_t num_nodes() const override { return m_mesh.num_nodes(); }
  int components() const override { return components_of( m_data.kind() ); }
  void apply( FieldVector const & u, FieldVector & v ) const override;

  PartialAssemblyData const & data() const { return m_data; }

private:
  Mesh const & m_mesh;
  ReferenceElement const & m_ref;
  PartialAssemblyData m_data;
  ExecutionPolicy m_policy;
};

class SpmvOperator final : public Operator
{
public:
  SpmvOperator( CsrMatrix matrix, int components, int workers = 1 );

  std::size_t num_nodes() const override { return m_matrix.num_rows / static_cast< std::size_t >( m_components ); }
  int components() const override { return m_components; }
  void apply( FieldVector const & u, FieldVector & v ) const override;

  CsrMatrix const & matrix() const { return m_matrix; }

private:
  CsrMatrix m_matrix;
  int m_components;
  int m_workers;
};

/**
 * v = P A P u + (I - P) u, where P zeroes every dof of the constrained nodes. This is
 * symmetric elimination with a unit diagonal on constrained dofs, the same convention as
 * assemble() with a boundary set. The wrapped operator must outlive this one; apply uses
 * an internal scratch vector, so one instance must not be applied concurrently.
 */
class ConstrainedOperator final : public Operator
{
public:
  ConstrainedOperator( Operator const & base, std::span< NodeIndex const > constrained_nodes );

  std::size_t num_nodes() const override { return m_base.num_nodes(); }
  int components() const override { return m_base.components(); }
  void apply( FieldVector const & u, FieldVector & v ) const override;

  std::span< std::size_t const > constrained_dofs() const { return m_dofs; }

private:
  Operator const & m_base;
  std::vector< std::size_t > m_dofs;
  mutable FieldVector m_scratch;
};

FieldVector apply_constrained( Operator const & op, std::span< NodeIndex const > constrained_nodes,
                               FieldVector const & u );

} // namespace lofem
