#include "lofem/cg.hpp"

#include "lofem/errors.hpp"
#include "lofem/perfmodel.hpp"

#include <chrono>
#include <cmath>

namespace lofem {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since( clock_type::time_point start )
{
  return std::chrono::duration< double >( clock_type::now() - start ).count();
}

} // namespace

CgResult cg_solve( Operator const & op, FieldVector const & b, FieldVector const & x0, CgOptions const & options )
{
  if( !( options.tol > 0.0 ) )
    throw ValidationError( "CG tolerance must be > 0" );
  if( b.num_nodes() != op.num_nodes() || b.components() != op.components() || !x0.same_layout( b ) )
    throw DimensionError( "CG right-hand side / initial guess do not match the operator" );

  CgResult result{ x0, {} };
  CgReport & report = result.report;
  KernelTimings & t = report.timings;
  FieldVector & x = result.x;

  FieldVector r = op.make_vector();
  FieldVector Ap = op.make_vector();

  auto timed_apply = [&]( FieldVector const & in, FieldVector & out ) {
    auto const start = clock_type::now();
    op.apply( in, out );
    t.apply += seconds_since( start );
    ++t.applies;
  };
  auto timed_dot = [&]( FieldVector const & a, FieldVector const & c ) {
    auto const start = clock_type::now();
    double const value = dot( a, c, options.reduction, options.workers );
    t.dot += seconds_since( start );
    ++t.dots;
    return value;
  };
  auto timed_axpy = [&]( auto && kernel ) {
    auto const start = clock_type::now();
    kernel();
    t.axpy += seconds_since( start );
    ++t.axpys;
  };

  // r0 = b - A x0
  op.apply( x, Ap );
  r = b;
  axpy( r, -1.0, Ap, options.workers );
  FieldVector p = r;

  double rr = dot( r, r, options.reduction, options.workers );
  double const r0 = std::sqrt( rr );
  report.residual_history.push_back( r0 );
  if( r0 == 0.0 )
  {
    report.converged = true;
    return result;
  }

  FieldVector scratch;
  auto const loop_start = clock_type::now();
  for( std::size_t k = 0; k < options.max_iter; ++k )
  {
    timed_apply( p, Ap );
    double const pAp = timed_dot( p, Ap );
    double const alpha = rr / pAp;
    if( !std::isfinite( alpha ) )
      throw DivergenceError( k, "alpha = " + std::to_string( alpha ) + " (p.Ap = " + std::to_string( pAp ) + ")" );

    timed_axpy( [&] { axpy( x, alpha, p, options.workers ); } );
    timed_axpy( [&] { axpy( r, -alpha, Ap, options.workers ); } );
    double const rr_next = timed_dot( r, r );
    double const norm = std::sqrt( rr_next );
    report.residual_history.push_back( norm );
    ++report.iterations;

    if( options.residual_check_interval > 0 && report.iterations % options.residual_check_interval == 0 )
    {
      if( scratch.size() == 0 )
        scratch = op.make_vector();
      op.apply( x, scratch );
      double sum = 0.0;
      for( std::size_t i = 0; i < b.size(); ++i )
      {
        double const d = b[i] - scratch[i];
        sum += d * d;
      }
      report.residual_checks.push_back( { report.iterations, norm, std::sqrt( sum ) } );
    }

    if( rr_next == 0.0 || ( !options.fixed_iterations && norm <= options.tol * r0 ) )
      break;

    double const beta = rr_next / rr;
    if( !std::isfinite( beta ) )
      throw DivergenceError( k, "beta = " + std::to_string( beta ) );
    timed_axpy( [&] { xpby( r, beta, p, options.workers ); } );
    rr = rr_next;
  }
  t.total = seconds_since( loop_start );

  report.converged = report.residual_history.back() <= options.tol * r0;
  double const ndof = static_cast< double >( op.num_dofs() );
  if( t.total > 0.0 )
    report.cg_dofs_per_second = ndof * static_cast< double >( report.iterations ) / t.total;
  if( t.apply > 0.0 )
    report.operator_dofs_per_second = ndof * static_cast< double >( t.applies ) / t.apply;
  return result;
}

CgResult cg_solve( Operator const & op, FieldVector const & b, CgOptions const & options )
{
  return cg_solve( op, b, op.make_vector(), options );
}

CgKernelTraffic cg_kernel_traffic_model( OperatorKind kind, BoxDims const & dims )
{
  if( dims.num_elements() == 0 )
    throw ValidationError( "element count must be >= 1" );
  double const ndof = static_cast< double >( dims.num_nodes() * static_cast< std::size_t >( components_of( kind ) ) );
  double const two_streams = 2.0 * ndof * 8.0;
  return { two_streams, two_streams, two_streams, two_streams };
}

CgKernelTraffic cg_kernel_traffic_model( OperatorKind kind, std::size_t num_elements )
{
  return cg_kernel_traffic_model( kind, cube_dims( num_elements ) );
}

} // namespace lofem
