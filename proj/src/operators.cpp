#include "lofem/operators.hpp"

#include "lofem/errors.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>

namespace lofem {

void IsotropicElasticity::validate() const
{
  if( !std::isfinite( lambda ) || !std::isfinite( mu ) )
    throw ValidationError( "elastic constants must be finite" );
  if( !( mu > 0.0 ) )
    throw ValidationError( "shear modulus mu must be > 0" );
  if( lambda + 2.0 * mu / 3.0 < 0.0 )
    throw ValidationError( "bulk modulus lambda + 2mu/3 must be >= 0" );
}

ElementGeometry element_geometry( std::array< Vec3, 8 > const & x,
                                  std::array< Vec3, 8 > const & ref_grads,
                                  std::size_t element )
{
  ElementGeometry geo;
  for( int j = 0; j < 8; ++j )
    for( int a = 0; a < 3; ++a )
      for( int b = 0; b < 3; ++b )
        geo.jacobian[a][b] += x[j][a] * ref_grads[j][b];
  geo.det = invert( geo.jacobian, geo.inv_jacobian );
  if( !( geo.det > 0.0 ) )
    throw GeometryError( element, geo.det );
  return geo;
}

namespace {

//------------------------------------------------------------------------------------------
// Physics: maps the physical gradient at a quadrature point to the flux/stress that is
// contracted with the test function gradients.

template< int C >
struct LaplacePhysics
{
  static constexpr int components = C;

  Grad< C > flux( Grad< C > const & grad ) const { return grad; }
};

struct ElasticPhysics
{
  static constexpr int components = 3;

  double lambda;
  double mu;

  Grad< 3 > flux( Grad< 3 > const & grad ) const
  {
    double const trace = grad[0][0] + grad[1][1] + grad[2][2];
    Grad< 3 > sigma;
    for( int a = 0; a < 3; ++a )
      for( int b = 0; b < 3; ++b )
        sigma[a][b] = mu * ( grad[a][b] + grad[b][a] );
    for( int a = 0; a < 3; ++a )
      sigma[a][a] += lambda * trace;
    return sigma;
  }
};

template< int C >
using ElementField = std::array< std::array< double, C >, 8 >;

//------------------------------------------------------------------------------------------
// Element loop with the two scatter strategies. `local` computes the element output from
// the element id and gathered input; exceptions thrown inside the parallel region are
// captured and rethrown after it.

class ErrorSlot
{
public:
  void capture()
  {
    std::lock_guard< std::mutex > lock( m_mutex );
    if( !m_error )
      m_error = std::current_exception();
    m_failed.store( true, std::memory_order_relaxed );
  }
  bool failed() const { return m_failed.load( std::memory_order_relaxed ); }
  void rethrow() const
  {
    if( m_error )
      std::rethrow_exception( m_error );
  }

private:
  std::mutex m_mutex;
  std::exception_ptr m_error;
  std::atomic< bool > m_failed{ false };
};

template< int C, class Local >
void element_loop( Mesh const & mesh, FieldVector const & u, FieldVector & v,
                   ExecutionPolicy const & policy, Local const & local )
{
  if( u.num_nodes() != mesh.num_nodes() || u.components() != C )
    throw DimensionError( "operator input does not match mesh nodes / components" );
  if( !v.same_layout( u ) )
    v = FieldVector( u.num_nodes(), C );
  if( policy.workers < 1 )
    throw ValidationError( "workers must be >= 1" );

  v.fill( 0.0 );
  double const * uv = u.data();
  double * out = v.data();
  ErrorSlot errors;

  auto gather = [&]( std::size_t e, ElementField< C > & ue ) {
    auto const nodes = mesh.element_nodes( e );
    for( int a = 0; a < 8; ++a )
      for( int c = 0; c < C; ++c )
        ue[a][c] = uv[C * static_cast< std::size_t >( nodes[a] ) + c];
  };

  if( policy.scatter == ScatterMode::colored )
  {
    for( int color = 0; color < 8 && !errors.failed(); ++color )
    {
      auto const elems = mesh.color_elements( color );
      std::size_t const n = elems.size();
      #pragma omp parallel for num_threads( policy.workers ) schedule( static )
      for( std::size_t k = 0; k < n; ++k )
      {
        if( errors.failed() )
          continue;
        try
        {
          std::size_t const e = elems[k];
          ElementField< C > ue, ve;
          gather( e, ue );
          local( e, ue, ve );
          auto const nodes = mesh.element_nodes( e );
          for( int a = 0; a < 8; ++a )
            for( int c = 0; c < C; ++c )
              out[C * static_cast< std::size_t >( nodes[a] ) + c] += ve[a][c];
        }
        catch( ... )
        {
          errors.capture();
        }
      }
    }
  }
  else
  {
    std::size_t const n = mesh.num_elements();
    #pragma omp parallel for num_threads( policy.workers ) schedule( static )
    for( std::size_t e = 0; e < n; ++e )
    {
      if( errors.failed() )
        continue;
      try
      {
        ElementField< C > ue, ve;
        gather( e, ue );
        local( e, ue, ve );
        auto const nodes = mesh.element_nodes( e );
        for( int a = 0; a < 8; ++a )
          for( int c = 0; c < C; ++c )
            std::atomic_ref< double >( out[C * static_cast< std::size_t >( nodes[a] ) + c] )
              .fetch_add( ve[a][c], std::memory_order_relaxed );
      }
      catch( ... )
      {
        errors.capture();
      }
    }
  }
  errors.rethrow();
}

//------------------------------------------------------------------------------------------
// Matrix-free element kernel, one quadrature point at a time:
//   J = sum_j x_j (x) g_j,  H = (sum_j u_j (x) g_j) J^-1,  S = flux(H) w detJ,
//   P = S J^-T,  v_i += P g_i.

template< class Physics >
void matrix_free_apply( Mesh const & mesh, ReferenceElement const & ref, Physics const & physics,
                        FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy )
{
  constexpr int C = Physics::components;

  auto local = [&]( std::size_t e, ElementField< C > const & ue, ElementField< C > & ve ) {
    std::array< Vec3, 8 > const x = mesh.element_coords( e );
    for( auto & row : ve )
      row.fill( 0.0 );

    for( int q = 0; q < ReferenceElement::num_qpts; ++q )
    {
      auto const & g = ref.basis_grads[q];
      ElementGeometry const geo = element_geometry( x, g, e );
      Mat3 const & K = geo.inv_jacobian;

      Grad< C > ref_grad{};
      for( int j = 0; j < 8; ++j )
        for( int a = 0; a < C; ++a )
          for( int b = 0; b < 3; ++b )
            ref_grad[a][b] += ue[j][a] * g[j][b];

      Grad< C > grad{};
      for( int a = 0; a < C; ++a )
        for( int b = 0; b < 3; ++b )
          for( int c = 0; c < 3; ++c )
            grad[a][b] += ref_grad[a][c] * K[c][b];

      Grad< C > flux = physics.flux( grad );
      double const scale = ref.qpt_weights[q] * geo.det;

      Grad< C > P{};
      for( int a = 0; a < C; ++a )
        for( int b = 0; b < 3; ++b )
          for( int c = 0; c < 3; ++c )
            P[a][b] += flux[a][c] * K[b][c];

      for( int i = 0; i < 8; ++i )
        for( int a = 0; a < C; ++a )
          ve[i][a] += scale * dot3( P[a], g[i] );
    }
  };

  element_loop< C >( mesh, u, v, policy, local );
}

// Voigt index pairs in (xx, yy, zz, yz, xz, xy) order.
constexpr int voigt_pair[6][2] = { { 0, 0 }, { 1, 1 }, { 2, 2 }, { 1, 2 }, { 0, 2 }, { 0, 1 } };

constexpr int upper_index( int r, int c, int n )
{
  // Row-major packed upper triangle of an n x n matrix, r <= c.
  return r * n - r * ( r - 1 ) / 2 + ( c - r );
}

template< int C >
void pa_laplace_apply( PartialAssemblyData const & data, Mesh const & mesh, ReferenceElement const & ref,
                       FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy )
{
  auto local = [&]( std::size_t e, ElementField< C > const & ue, ElementField< C > & ve ) {
    for( auto & row : ve )
      row.fill( 0.0 );
    for( int q = 0; q < ReferenceElement::num_qpts; ++q )
    {
      auto const & g = ref.basis_grads[q];
      auto const d = data.qpt_factors( e, q );
      Mat3 const D{ { { d[0], d[5], d[4] }, { d[5], d[1], d[3] }, { d[4], d[3], d[2] } } };

      Grad< C > ref_grad{};
      for( int j = 0; j < 8; ++j )
        for( int a = 0; a < C; ++a )
          for( int b = 0; b < 3; ++b )
            ref_grad[a][b] += ue[j][a] * g[j][b];

      Grad< C > f{};
      for( int a = 0; a < C; ++a )
        for( int b = 0; b < 3; ++b )
          f[a][b] = dot3( D[b], ref_grad[a] );

      for( int i = 0; i < 8; ++i )
        for( int a = 0; a < C; ++a )
          ve[i][a] += dot3( f[a], g[i] );
    }
  };
  element_loop< C >( mesh, u, v, policy, local );
}

void pa_elasticity_apply( PartialAssemblyData const & data, Mesh const & mesh, ReferenceElement const & ref,
                          FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy )
{
  auto local = [&]( std::size_t e, ElementField< 3 > const & ue, ElementField< 3 > & ve ) {
    for( auto & row : ve )
      row.fill( 0.0 );
    for( int q = 0; q < ReferenceElement::num_qpts; ++q )
    {
      auto const & g = ref.basis_grads[q];
      auto const d = data.qpt_factors( e, q );
      double const * K = d.data() + 21;

      Grad< 3 > ref_grad{};
      for( int j = 0; j < 8; ++j )
        for( int a = 0; a < 3; ++a )
          for( int b = 0; b < 3; ++b )
            ref_grad[a][b] += ue[j][a] * g[j][b];

      Grad< 3 > grad{};
      for( int a = 0; a < 3; ++a )
        for( int b = 0; b < 3; ++b )
          for( int c = 0; c < 3; ++c )
            grad[a][b] += ref_grad[a][c] * K[3 * c + b];

      double strain[6];
      for( int s = 0; s < 6; ++s )
      {
        int const a = voigt_pair[s][0];
        int const b = voigt_pair[s][1];
        strain[s] = a == b ? grad[a][a] : grad[a][b] + grad[b][a];
      }

      double stress[6] = {};
      for( int r = 0; r < 6; ++r )
        for( int c = 0; c < 6; ++c )
          stress[r] += d[r <= c ? upper_index( r, c, 6 ) : upper_index( c, r, 6 )] * strain[c];

      Grad< 3 > sigma{};
      for( int s = 0; s < 6; ++s )
      {
        sigma[voigt_pair[s][0]][voigt_pair[s][1]] = stress[s];
        sigma[voigt_pair[s][1]][voigt_pair[s][0]] = stress[s];
      }

      Grad< 3 > P{};
      for( int a = 0; a < 3; ++a )
        for( int b = 0; b < 3; ++b )
          for( int c = 0; c < 3; ++c )
            P[a][b] += sigma[a][c] * K[3 * b + c];

      for( int i = 0; i < 8; ++i )
        for( int a = 0; a < 3; ++a )
          ve[i][a] += dot3( P[a], g[i] );
    }
  };
  element_loop< 3 >( mesh, u, v, policy, local );
}

void require_components( FieldVector const & u, int components, char const * what )
{
  if( u.components() != components )
    throw DimensionError( std::string( what ) + ": expected " + std::to_string( components ) +
                          " components per node, got " + std::to_string( u.components() ) );
}

} // namespace

void apply_scalar_laplace( Mesh const & mesh, ReferenceElement const & ref,
                           FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy )
{
  require_components( u, 1, "apply_scalar_laplace" );
  matrix_free_apply( mesh, ref, LaplacePhysics< 1 >{}, u, v, policy );
}

FieldVector apply_scalar_laplace( Mesh const & mesh, ReferenceElement const & ref,
                                  FieldVector const & u, ExecutionPolicy const & policy )
{
  FieldVector v( u.num_nodes(), u.components() );
  apply_scalar_laplace( mesh, ref, u, v, policy );
  return v;
}

void apply_vector_laplace( Mesh const & mesh, ReferenceElement const & ref,
                           FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy )
{
  require_components( u, 3, "apply_vector_laplace" );
  matrix_free_apply( mesh, ref, LaplacePhysics< 3 >{}, u, v, policy );
}

FieldVector apply_vector_laplace( Mesh const & mesh, ReferenceElement const & ref,
                                  FieldVector const & u, ExecutionPolicy const & policy )
{
  FieldVector v( u.num_nodes(), u.components() );
  apply_vector_laplace( mesh, ref, u, v, policy );
  return v;
}

void apply_elasticity( Mesh const & mesh, ReferenceElement const & ref, IsotropicElasticity const & material,
                       FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy )
{
  material.validate();
  require_components( u, 3, "apply_elasticity" );
  matrix_free_apply( mesh, ref, ElasticPhysics{ material.lambda, material.mu }, u, v, policy );
}

FieldVector apply_elasticity( Mesh const & mesh, ReferenceElement const & ref,
                              IsotropicElasticity const & material, FieldVector const & u,
                              ExecutionPolicy const & policy )
{
  FieldVector v( u.num_nodes(), u.components() );
  apply_elasticity( mesh, ref, material, u, v, policy );
  return v;
}

PartialAssemblyData setup_partial_assembly( Mesh const & mesh, ReferenceElement const & ref, OperatorKind kind,
                                            std::optional< IsotropicElasticity > const & material, int workers )
{
  if( kind == OperatorKind::elasticity )
  {
    if( !material )
      throw ValidationError( "partial assembly of elasticity requires a material" );
    material->validate();
  }
  if( workers < 1 )
    throw ValidationError( "workers must be >= 1" );

  PartialAssemblyData data;
  data.m_kind = kind;
  data.m_num_elements = mesh.num_elements();
  std::size_t const nv = static_cast< std::size_t >( data.values_per_qpt() );
  data.m_factors.resize( mesh.num_elements() * ReferenceElement::num_qpts * nv );

  // Voigt stiffness, engineering shear strains.
  std::array< std::array< double, 6 >, 6 > voigt{};
  if( material )
  {
    double const l = material->lambda;
    double const m = material->mu;
    for( int r = 0; r < 3; ++r )
    {
      for( int c = 0; c < 3; ++c )
        voigt[r][c] = l;
      voigt[r][r] = l + 2.0 * m;
      voigt[r + 3][r + 3] = m;
    }
  }

  ErrorSlot errors;
  std::size_t const n = mesh.num_elements();
  #pragma omp parallel for num_threads( workers ) schedule( static )
  for( std::size_t e = 0; e < n; ++e )
  {
    if( errors.failed() )
      continue;
    try
    {
      std::array< Vec3, 8 > const x = mesh.element_coords( e );
      for( int q = 0; q < ReferenceElement::num_qpts; ++q )
      {
        ElementGeometry const geo = element_geometry( x, ref.basis_grads[q], e );
        double const scale = ref.qpt_weights[q] * geo.det;
        Mat3 const & K = geo.inv_jacobian;
        double * out = data.m_factors.data() + ( e * ReferenceElement::num_qpts + q ) * nv;

        if( kind == OperatorKind::elasticity )
        {
          for( int r = 0; r < 6; ++r )
            for( int c = r; c < 6; ++c )
              out[upper_index( r, c, 6 )] = scale * voigt[r][c];
          for( int a = 0; a < 3; ++a )
            for( int b = 0; b < 3; ++b )
              out[21 + 3 * a + b] = K[a][b];
        }
        else
        {
          Mat3 const D = multiply( K, transpose( K ) );
          for( int s = 0; s < 6; ++s )
            out[s] = scale * D[voigt_pair[s][0]][voigt_pair[s][1]];
        }
      }
    }
    catch( ... )
    {
      errors.capture();
    }
  }
  errors.rethrow();
  return data;
}

void apply_partial_assembly( PartialAssemblyData const & data, Mesh const & mesh, ReferenceElement const & ref,
                             FieldVector const & u, FieldVector & v, ExecutionPolicy const & policy )
{
  if( data.num_elements() != mesh.num_elements() )
    throw DimensionError( "partial assembly data was built for a different mesh" );
  require_components( u, components_of( data.kind() ), "apply_partial_assembly" );
  switch( data.kind() )
  {
    case OperatorKind::scalar_laplace:
      pa_laplace_apply< 1 >( data, mesh, ref, u, v, policy );
      break;
    case OperatorKind::vector_laplace:
      pa_laplace_apply< 3 >( data, mesh, ref, u, v, policy );
      break;
    case OperatorKind::elasticity:
      pa_elasticity_apply( data, mesh, ref, u, v, policy );
      break;
  }
}

FieldVector apply_partial_assembly( PartialAssemblyData const & data, Mesh const & mesh,
                                    ReferenceElement const & ref, FieldVector const & u,
                                    ExecutionPolicy const & policy )
{
  FieldVector v( u.num_nodes(), u.components() );
  apply_partial_assembly( data, mesh, ref, u, v, policy );
  return v;
}

//------------------------------------------------------------------------------------------

MatrixFreeOperator::MatrixFreeOperator( OperatorKind kind, Mesh const & mesh, ReferenceElement const & ref,
                                        IsotropicElasticity material, ExecutionPolicy policy )
: m_kind( kind ), m_mesh( mesh ), m_ref( ref ), m_material( material ), m_policy( policy )
{
  if( kind == OperatorKind::elasticity )
    m_material.validate();
}

void MatrixFreeOperator::apply( FieldVector const & u, FieldVector & v ) const
{
  switch( m_kind )
  {
    case OperatorKind::scalar_laplace:
      apply_scalar_laplace( m_mesh, m_ref, u, v, m_policy );
      break;
    case OperatorKind::vector_laplace:
      apply_vector_laplace( m_mesh, m_ref, u, v, m_policy );
      break;
    case OperatorKind::elasticity:
      apply_elasticity( m_mesh, m_ref, m_material, u, v, m_policy );
      break;
  }
}

PartialAssemblyOperator::PartialAssemblyOperator( OperatorKind kind, Mesh const & mesh,
                                                  ReferenceElement const & ref,
                                                  IsotropicElasticity material, ExecutionPolicy policy )
: m_mesh( mesh ),
  m_ref( ref ),
  m_data( setup_partial_assembly( mesh, ref, kind,
                                  kind == OperatorKind::elasticity ? std::optional( material ) : std::nullopt,
                                  policy.workers ) ),
  m_policy( policy )
{}

void PartialAssemblyOperator::apply( FieldVector const & u, FieldVector & v ) const
{
  apply_partial_assembly( m_data, m_mesh, m_ref, u, v, m_policy );
}

SpmvOperator::SpmvOperator( CsrMatrix matrix, int components, int workers )
: m_matrix( std::move( matrix ) ), m_components( components ), m_workers( workers )
{
  if( components != 1 && components != 3 )
    throw ValidationError( "components must be 1 or 3" );
  if( m_matrix.num_rows != m_matrix.num_cols || m_matrix.num_rows % static_cast< std::size_t >( components ) != 0 )
    throw DimensionError( "SpMV operator needs a square matrix with whole nodes" );
}

void SpmvOperator::apply( FieldVector const & u, FieldVector & v ) const
{
  if( !v.same_layout( u ) )
    v = FieldVector( u.num_nodes(), u.components() );
  spmv( m_matrix, u, v, m_workers );
}

ConstrainedOperator::ConstrainedOperator( Operator const & base, std::span< NodeIndex const > constrained_nodes )
: m_base( base ), m_scratch( base.make_vector() )
{
  std::size_t const c = static_cast< std::size_t >( base.components() );
  m_dofs.reserve( constrained_nodes.size() * c );
  for( NodeIndex n : constrained_nodes )
  {
    if( n >= base.num_nodes() )
      throw DimensionError( "constrained node " + std::to_string( n ) + " is not a mesh node" );
    for( std::size_t l = 0; l < c; ++l )
      m_dofs.push_back( c * n + l );
  }
}

void ConstrainedOperator::apply( FieldVector const & u, FieldVector & v ) const
{
  if( u.num_nodes() != num_nodes() || u.components() != components() )
    throw DimensionError( "constrained operator input has the wrong layout" );
  std::copy( u.values().begin(), u.values().end(), m_scratch.values().begin() );
  for( std::size_t d : m_dofs )
    m_scratch[d] = 0.0;
  m_base.apply( m_scratch, v );
  for( std::size_t d : m_dofs )
    v[d] = u[d];
}

FieldVector apply_constrained( Operator const & op, std::span< NodeIndex const > constrained_nodes,
                               FieldVector const & u )
{
  ConstrainedOperator constrained( op, constrained_nodes );
  FieldVector v = op.make_vector();
  constrained.apply( u, v );
  return v;
}

std::string to_string( ScatterMode mode )
{
  return mode == ScatterMode::colored ? "colored" : "atomic";
}

ScatterMode parse_scatter_mode( std::string_view name )
{
  if( name == "colored" )
    return ScatterMode::colored;
  if( name == "atomic" )
    return ScatterMode::atomic;
  throw ValidationError( "unknown scatter mode '" + std::string( name ) + "'" );
}

} // namespace lofem
