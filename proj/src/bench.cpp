#include "lofem/bench.hpp"

#include "lofem/assembly.hpp"
#include "lofem/cg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <new>
#include <ostream>
#include <random>

namespace lofem {

namespace {

std::string dims_label( BoxDims const & d )
{
  return std::to_string( d.nx ) + "x" + std::to_string( d.ny ) + "x" + std::to_string( d.nz );
}

double max_abs( std::span< double const > v )
{
  double m = 0.0;
  for( double x : v )
    m = std::max( m, std::abs( x ) );
  return m;
}

double max_abs_diff( FieldVector const & a, FieldVector const & b )
{
  double m = 0.0;
  for( std::size_t i = 0; i < a.size(); ++i )
    m = std::max( m, std::abs( a[i] - b[i] ) );
  return m;
}

std::unique_ptr< Operator > make_operator( BenchConfig const & cfg, Mesh const & mesh, ReferenceElement const & ref )
{
  ExecutionPolicy const policy{ cfg.workers, cfg.scatter };
  switch( cfg.strategy )
  {
    case Strategy::matrix_free:
      return std::make_unique< MatrixFreeOperator >( cfg.kind, mesh, ref, cfg.material, policy );
    case Strategy::partial_assembly:
      return std::make_unique< PartialAssemblyOperator >( cfg.kind, mesh, ref, cfg.material, policy );
    case Strategy::spmv:
      return std::make_unique< SpmvOperator >( assemble( cfg.kind, mesh, ref, cfg.material ),
                                               components_of( cfg.kind ), cfg.workers );
  }
  throw ValidationError( "unknown strategy" );
}

void write_number( std::ostream & os, double value )
{
  if( std::isfinite( value ) )
    os << value;
  else
    os << "nan";
}

} // namespace

void BenchConfig::validate() const
{
  if( sweep.empty() )
    throw ValidationError( "benchmark sweep must not be empty" );
  for( auto const & d : sweep )
    if( d.nx == 0 || d.ny == 0 || d.nz == 0 )
      throw ValidationError( "sweep point " + dims_label( d ) + " has a zero dimension" );
  if( iterations < 1 )
    throw ValidationError( "iterations must be >= 1" );
  if( workers < 1 )
    throw ValidationError( "workers must be >= 1" );
  if( warmup < 0 || repeats < 1 )
    throw ValidationError( "warmup must be >= 0 and repeats >= 1" );
  if( !( hardware.bandwidth > 0.0 ) )
    throw ValidationError( "hardware bandwidth must be > 0" );
  if( !( verify_tol >= 0.0 ) )
    throw ValidationError( "verify tolerance must be >= 0" );
  if( kind == OperatorKind::elasticity )
    material.validate();
}

std::vector< BoxDims > default_sweep()
{
  return { { 10, 10, 10 }, { 20, 20, 20 }, { 40, 40, 40 }, { 80, 80, 80 }, { 100, 100, 100 } };
}

double gdofs( std::size_t ndof, std::size_t iterations, double seconds )
{
  return static_cast< double >( ndof ) * static_cast< double >( iterations ) / seconds / 1e9;
}

double median_seconds( std::function< void() > const & fn, int warmup, int repeats )
{
  using clock_type = std::chrono::steady_clock;
  for( int i = 0; i < warmup; ++i )
    fn();
  std::vector< double > samples;
  samples.reserve( static_cast< std::size_t >( repeats ) );
  for( int i = 0; i < repeats; ++i )
  {
    auto const start = clock_type::now();
    fn();
    samples.push_back( std::chrono::duration< double >( clock_type::now() - start ).count() );
  }
  std::sort( samples.begin(), samples.end() );
  std::size_t const mid = samples.size() / 2;
  return samples.size() % 2 ? samples[mid] : 0.5 * ( samples[mid - 1] + samples[mid] );
}

FieldVector random_field( std::size_t num_nodes, int components, std::uint64_t seed )
{
  FieldVector v( num_nodes, components );
  std::mt19937_64 rng( seed );
  std::uniform_real_distribution< double > dist( -1.0, 1.0 );
  for( double & x : v.values() )
    x = dist( rng );
  return v;
}

OperatorTiming measure_operator( Operator const & op, std::size_t applications, int warmup, int repeats,
                                 std::uint64_t seed )
{
  FieldVector const u = random_field( op.num_nodes(), op.components(), seed );
  FieldVector v = op.make_vector();
  OperatorTiming timing;
  timing.seconds = median_seconds( [&] {
    for( std::size_t i = 0; i < applications; ++i )
      op.apply( u, v );
  }, warmup, repeats );
  timing.gdofs = gdofs( op.num_dofs(), applications, timing.seconds );
  return timing;
}

VerifyResult verify_point( OperatorKind kind, BoxDims const & dims, Vec3 const & lengths,
                           IsotropicElasticity const & material, std::uint64_t seed, std::size_t inputs,
                           double tol, ExecutionPolicy const & policy )
{
  Mesh const mesh = build_box_mesh( dims, lengths );
  ReferenceElement const & ref = q1_reference();
  MatrixFreeOperator const mf( kind, mesh, ref, material, policy );
  PartialAssemblyOperator const pa( kind, mesh, ref, material, policy );
  CsrMatrix const A = assemble( kind, mesh, ref, material );
  double const scale = max_abs( A.values );

  VerifyResult result;
  result.kind = kind;
  result.dims = dims;
  result.inputs = inputs;

  FieldVector v_mf = mf.make_vector();
  FieldVector v_pa = mf.make_vector();
  FieldVector v_sp = mf.make_vector();
  for( std::size_t k = 0; k < inputs; ++k )
  {
    FieldVector const u = random_field( mesh.num_nodes(), components_of( kind ), seed + k );
    mf.apply( u, v_mf );
    pa.apply( u, v_pa );
    spmv( A, u, v_sp, policy.workers );
    double const denom = scale * max_abs( u.values() );
    result.matrix_free_vs_spmv = std::max( result.matrix_free_vs_spmv, max_abs_diff( v_mf, v_sp ) / denom );
    result.partial_assembly_vs_spmv = std::max( result.partial_assembly_vs_spmv, max_abs_diff( v_pa, v_sp ) / denom );
    result.partial_assembly_vs_matrix_free =
      std::max( result.partial_assembly_vs_matrix_free, max_abs_diff( v_pa, v_mf ) / denom );
  }
  result.passed = result.matrix_free_vs_spmv <= tol && result.partial_assembly_vs_spmv <= tol &&
                  result.partial_assembly_vs_matrix_free <= tol;
  return result;
}

std::vector< BenchRow > run_benchmark( BenchConfig const & config, std::ostream * progress )
{
  config.validate();
  ReferenceElement const & ref = q1_reference();
  std::vector< BenchRow > rows;

  for( BoxDims const & dims : config.sweep )
  {
    try
    {
      BenchRow row;
      row.kind = config.kind;
      row.strategy = config.strategy;
      row.dims = dims;
      row.workers = config.workers;
      row.reduction = config.reduction;
      row.iterations = config.iterations;
      row.hardware = config.hardware.name;

      if( config.verify )
      {
        VerifyResult const check = verify_point( config.kind, dims, config.lengths, config.material, config.seed, 1,
                                                 config.verify_tol, { config.workers, config.scatter } );
        row.verify_error = std::max( { check.matrix_free_vs_spmv, check.partial_assembly_vs_spmv,
                                       check.partial_assembly_vs_matrix_free } );
        if( !check.passed )
          throw VerificationError( "verify failed at sweep point " + dims_label( dims ) + ": relative error " +
                                   std::to_string( *row.verify_error ) + " > " +
                                   std::to_string( config.verify_tol ) );
      }

      Mesh const mesh = build_box_mesh( dims, config.lengths );
      std::unique_ptr< Operator > const op = make_operator( config, mesh, ref );
      row.ndof = op->num_dofs();

      OperatorTiming const op_timing = measure_operator( *op, config.iterations, config.warmup, config.repeats,
                                                         config.seed );
      row.op_seconds = op_timing.seconds;
      row.op_gdofs = op_timing.gdofs;

      // Fixed-iteration CG on the Dirichlet-constrained system, b = A_c * random.
      ConstrainedOperator const constrained( *op, mesh.boundary_nodes() );
      FieldVector const x_true = random_field( mesh.num_nodes(), components_of( config.kind ), config.seed );
      FieldVector b = constrained.make_vector();
      constrained.apply( x_true, b );
      CgOptions cg_options;
      cg_options.max_iter = config.iterations;
      cg_options.fixed_iterations = true;
      cg_options.reduction = config.reduction;
      cg_options.workers = config.workers;

      std::size_t cg_iterations = 0;
      double cg_loop_seconds = 0.0;
      std::vector< double > loop_samples;
      for( int i = 0; i < config.warmup + config.repeats; ++i )
      {
        CgResult const solve = cg_solve( constrained, b, cg_options );
        if( i >= config.warmup )
        {
          loop_samples.push_back( solve.report.timings.total );
          cg_iterations = solve.report.iterations;
        }
      }
      std::sort( loop_samples.begin(), loop_samples.end() );
      std::size_t const mid = loop_samples.size() / 2;
      cg_loop_seconds = loop_samples.size() % 2 ? loop_samples[mid]
                                                : 0.5 * ( loop_samples[mid - 1] + loop_samples[mid] );
      row.cg_seconds = cg_loop_seconds;
      row.cg_gdofs = gdofs( row.ndof, cg_iterations, cg_loop_seconds );

      SpeedOfLight const sol = speed_of_light( traffic( config.strategy, config.kind, dims ), config.hardware, row.ndof );
      row.model_best_gdofs = sol.dofs_per_second.best / 1e9;
      row.model_worst_gdofs = sol.dofs_per_second.worst / 1e9;

      if( progress )
        *progress << "# " << to_string( config.kind ) << ' ' << to_string( config.strategy ) << ' '
                  << dims_label( dims ) << ": op " << row.op_gdofs << " GDof/s, cg " << row.cg_gdofs << " GDof/s\n";
      rows.push_back( std::move( row ) );
    }
    catch( std::bad_alloc const & )
    {
      throw Error( "out of memory at sweep point " + dims_label( dims ) );
    }
  }
  return rows;
}

char const * const bench_csv_header =
  "kind,strategy,nx,ny,nz,elements,ndof,workers,reduction,iterations,op_seconds,cg_seconds,"
  "op_gdofs,cg_gdofs,hardware,model_best_gdofs,model_worst_gdofs,op_fraction_of_best,"
  "op_fraction_of_worst,verify_error";

void write_bench_csv( std::ostream & os, std::span< BenchRow const > rows )
{
  os << bench_csv_header << '\n';
  for( BenchRow const & r : rows )
  {
    os << to_string( r.kind ) << ',' << to_string( r.strategy ) << ',' << r.dims.nx << ',' << r.dims.ny << ','
       << r.dims.nz << ',' << r.dims.num_elements() << ',' << r.ndof << ',' << r.workers << ','
       << to_string( r.reduction ) << ',' << r.iterations << ',';
    write_number( os, r.op_seconds );
    os << ',';
    write_number( os, r.cg_seconds );
    os << ',';
    write_number( os, r.op_gdofs );
    os << ',';
    write_number( os, r.cg_gdofs );
    os << ',' << r.hardware << ',';
    write_number( os, r.model_best_gdofs );
    os << ',';
    write_number( os, r.model_worst_gdofs );
    os << ',';
    write_number( os, r.op_gdofs / r.model_best_gdofs );
    os << ',';
    write_number( os, r.op_gdofs / r.model_worst_gdofs );
    os << ',';
    if( r.verify_error )
      write_number( os, *r.verify_error );
    os << '\n';
  }
}

std::vector< ModelRow > emit_model_tables( std::size_t elements, std::span< HardwareSpec const > hardware,
                                           std::vector< OperatorKind > const & kinds )
{
  BoxDims const dims = cube_dims( elements );
  std::vector< ModelRow > rows;
  for( OperatorKind kind : kinds )
    for( Strategy strategy : { Strategy::spmv, Strategy::matrix_free, Strategy::partial_assembly } )
    {
      TrafficEstimate const t = traffic( strategy, kind, dims );
      for( HardwareSpec const & hw : hardware )
      {
        SpeedOfLight const sol = speed_of_light( t, hw, t.ndof );
        rows.push_back( { kind, strategy, "best", hw.name, elements, t.ndof, sol.bytes.best,
                          sol.seconds.best * 1e3, sol.dofs_per_second.best / 1e9 } );
        rows.push_back( { kind, strategy, "worst", hw.name, elements, t.ndof, sol.bytes.worst,
                          sol.seconds.worst * 1e3, sol.dofs_per_second.worst / 1e9 } );
      }
    }
  return rows;
}

char const * const model_csv_header = "kind,strategy,scenario,hardware,elements,ndof,bytes,ms,gdofs";

void write_model_csv( std::ostream & os, std::span< ModelRow const > rows )
{
  os << model_csv_header << '\n';
  auto const old_precision = os.precision( 10 );
  for( ModelRow const & r : rows )
    os << to_string( r.kind ) << ',' << to_string( r.strategy ) << ',' << r.scenario << ',' << r.hardware << ','
       << r.elements << ',' << r.ndof << ',' << r.bytes << ',' << r.ms << ',' << r.gdofs << '\n';
  os.precision( old_precision );
}

char const * const breakdown_csv_header = "kind,strategy,component,best_bytes,worst_bytes,in_total";

void write_model_breakdown_csv( std::ostream & os, std::size_t elements, std::vector< OperatorKind > const & kinds )
{
  BoxDims const dims = cube_dims( elements );
  os << breakdown_csv_header << '\n';
  auto const old_precision = os.precision( 12 );
  for( OperatorKind kind : kinds )
    for( Strategy strategy : { Strategy::spmv, Strategy::matrix_free, Strategy::partial_assembly } )
    {
      TrafficEstimate const t = traffic( strategy, kind, dims );
      for( TrafficComponent const & c : t.components )
        os << to_string( kind ) << ',' << to_string( strategy ) << ',' << c.name << ',' << c.bytes.best << ','
           << c.bytes.worst << ',' << ( c.in_total ? 1 : 0 ) << '\n';
      Range const total = t.total();
      os << to_string( kind ) << ',' << to_string( strategy ) << ",total," << total.best << ',' << total.worst
         << ",1\n";
    }
  os.precision( old_precision );
}

} // namespace lofem
