#include "lofem/bench.hpp"
#include "lofem/errors.hpp"
#include "lofem/perfmodel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace lofem;

BoxDims parse_dims( std::string const & text )
{
  BoxDims d;
  char x1 = 0, x2 = 0;
  std::istringstream is( text );
  if( !( is >> d.nx >> x1 >> d.ny >> x2 >> d.nz ) || x1 != 'x' || x2 != 'x' || !is.eof() )
    throw ValidationError( "bad dims '" + text + "', expected NXxNYxNZ" );
  return d;
}

struct OutputTarget
{
  std::string path;
  std::unique_ptr< std::ofstream > file;

  std::ostream & stream()
  {
    if( path.empty() || path == "-" )
      return std::cout;
    file = std::make_unique< std::ofstream >( path );
    if( !*file )
      throw Error( "cannot open output file " + path );
    return *file;
  }
};

std::vector< OperatorKind > parse_kinds( std::vector< std::string > const & names )
{
  std::vector< OperatorKind > kinds;
  for( auto const & n : names )
    kinds.push_back( parse_operator_kind( n ) );
  return kinds;
}

} // namespace

int main( int argc, char ** argv )
{
  CLI::App app{ "Low-order finite element operator benchmarks and speed-of-light model" };
  app.require_subcommand( 1 );

  // Shared state for the subcommands.
  BenchConfig cfg;
  std::string kind = "scalar_laplace";
  std::string strategy = "matrix_free";
  std::string reduction = "blocked_deterministic";
  std::string scatter = "colored";
  std::string hardware = "V100";
  std::string hardware_file = LOFEM_DEFAULT_PRESETS;
  double bandwidth = 0.0;
  std::vector< std::size_t > sweep;
  std::vector< std::string > dims;
  OutputTarget out;

  auto * bench = app.add_subcommand( "bench", "Time operator applications and fixed-iteration CG over a sweep" );
  bench->add_option( "--kind", kind, "scalar_laplace | vector_laplace | elasticity" )->capture_default_str();
  bench->add_option( "--strategy", strategy, "matrix_free | partial_assembly | spmv" )->capture_default_str();
  bench->add_option( "--sweep", sweep, "Cube edge lengths in elements (default 10 20 40 80 100)" );
  bench->add_option( "--dims", dims, "Explicit box dims NXxNYxNZ, repeatable" )->excludes( "--sweep" );
  bench->add_option( "--lengths", cfg.lengths, "Box side lengths" )->expected( 3 );
  bench->add_option( "--iterations", cfg.iterations, "Applications / CG iterations per timed run" )
    ->capture_default_str();
  bench->add_option( "--reduction", reduction, "sequential | pairwise_tree | blocked_deterministic | compensated" )
    ->capture_default_str();
  bench->add_option( "--lambda", cfg.material.lambda, "Lame lambda" )->capture_default_str();
  bench->add_option( "--mu", cfg.material.mu, "Lame mu" )->capture_default_str();
  bench->add_option( "--workers", cfg.workers, "Worker threads" )->capture_default_str();
  bench->add_option( "--scatter", scatter, "colored | atomic" )->capture_default_str();
  bench->add_option( "--hardware", hardware, "Preset name for the model columns" )->capture_default_str();
  bench->add_option( "--hardware-file", hardware_file, "Preset file" )->capture_default_str();
  bench->add_option( "--bandwidth", bandwidth, "Override bandwidth in GB/s" );
  bench->add_option( "--seed", cfg.seed, "Input seed" )->capture_default_str();
  bench->add_option( "--warmup", cfg.warmup, "Untimed runs" )->capture_default_str();
  bench->add_option( "--repeats", cfg.repeats, "Timed runs (median reported)" )->capture_default_str();
  bench->add_flag( "--verify", cfg.verify, "Check matrix-free, partial assembly and SpMV agreement first" );
  bench->add_option( "--verify-tol", cfg.verify_tol, "Relative tolerance for --verify" )->capture_default_str();
  bench->add_option( "--out", out.path, "CSV output file (default stdout)" );

  std::size_t elements = 1000000;
  bool breakdown = false;
  std::vector< std::string > model_kinds{ "scalar_laplace", "elasticity" };
  std::vector< std::string > model_hardware;
  auto * model = app.add_subcommand( "model", "Emit speed-of-light tables" );
  model->add_option( "--elements", elements, "Element count (perfect cube)" )->capture_default_str();
  model->add_option( "--kind", model_kinds, "Kinds to include" )->capture_default_str();
  model->add_option( "--hardware", model_hardware, "Preset names (default all)" );
  model->add_option( "--hardware-file", hardware_file, "Preset file" )->capture_default_str();
  model->add_flag( "--breakdown", breakdown, "Per-component byte breakdown instead of tables" );
  model->add_option( "--out", out.path, "CSV output file (default stdout)" );

  std::size_t inputs = 20;
  double tol = 1e-12;
  std::vector< std::string > verify_kinds{ "scalar_laplace", "vector_laplace", "elasticity" };
  auto * verify = app.add_subcommand( "verify", "Compare matrix-free, partial assembly and SpMV applications" );
  verify->add_option( "--kind", verify_kinds, "Kinds to check" )->capture_default_str();
  verify->add_option( "--sweep", sweep, "Cube edge lengths (default 2 4 8)" );
  verify->add_option( "--dims", dims, "Explicit box dims NXxNYxNZ" )->excludes( "--sweep" );
  verify->add_option( "--lengths", cfg.lengths, "Box side lengths" )->expected( 3 );
  verify->add_option( "--lambda", cfg.material.lambda, "Lame lambda" )->capture_default_str();
  verify->add_option( "--mu", cfg.material.mu, "Lame mu" )->capture_default_str();
  verify->add_option( "--workers", cfg.workers, "Worker threads" )->capture_default_str();
  verify->add_option( "--scatter", scatter, "colored | atomic" )->capture_default_str();
  verify->add_option( "--seed", cfg.seed, "Input seed" )->capture_default_str();
  verify->add_option( "--inputs", inputs, "Random inputs per point" )->capture_default_str();
  verify->add_option( "--tol", tol, "Relative tolerance" )->capture_default_str();
  verify->add_option( "--out", out.path, "CSV output file (default stdout)" );

  CLI11_PARSE( app, argc, argv );

  try
  {
    auto const sweep_points = [&]( std::vector< BoxDims > fallback ) {
      std::vector< BoxDims > points;
      for( auto const & d : dims )
        points.push_back( parse_dims( d ) );
      for( std::size_t n : sweep )
        points.push_back( { n, n, n } );
      return points.empty() ? fallback : points;
    };

    if( *bench )
    {
      cfg.kind = parse_operator_kind( kind );
      cfg.strategy = parse_strategy( strategy );
      cfg.reduction = parse_reduction( reduction );
      cfg.scatter = parse_scatter_mode( scatter );
      cfg.sweep = sweep_points( default_sweep() );
      auto const presets = load_hardware_presets( hardware_file );
      cfg.hardware = find_hardware( presets, hardware );
      if( bandwidth > 0.0 )
        cfg.hardware.bandwidth = bandwidth * 1e9;
      auto const rows = run_benchmark( cfg, &std::cerr );
      write_bench_csv( out.stream(), rows );
    }
    else if( *model )
    {
      auto const kinds = parse_kinds( model_kinds );
      std::ostream & os = out.stream();
      if( breakdown )
      {
        write_model_breakdown_csv( os, elements, kinds );
        return 0;
      }
      auto presets = load_hardware_presets( hardware_file );
      std::vector< HardwareSpec > chosen;
      for( auto const & name : model_hardware )
        chosen.push_back( find_hardware( presets, name ) );
      if( chosen.empty() )
        chosen = presets;
      write_model_csv( os, emit_model_tables( elements, chosen, kinds ) );
    }
    else if( *verify )
    {
      auto const points = sweep_points( { { 2, 2, 2 }, { 4, 4, 4 }, { 8, 8, 8 } } );
      ExecutionPolicy const policy{ cfg.workers, parse_scatter_mode( scatter ) };
      std::ostream & os = out.stream();
      os << "kind,nx,ny,nz,inputs,mf_vs_spmv,pa_vs_spmv,pa_vs_mf,passed\n";
      bool all_passed = true;
      for( OperatorKind k : parse_kinds( verify_kinds ) )
        for( BoxDims const & d : points )
        {
          VerifyResult const r = verify_point( k, d, cfg.lengths, cfg.material, cfg.seed, inputs, tol, policy );
          os << to_string( k ) << ',' << d.nx << ',' << d.ny << ',' << d.nz << ',' << r.inputs << ','
             << r.matrix_free_vs_spmv << ',' << r.partial_assembly_vs_spmv << ','
             << r.partial_assembly_vs_matrix_free << ',' << ( r.passed ? "yes" : "no" ) << '\n';
          all_passed = all_passed && r.passed;
        }
      if( !all_passed )
      {
        std::cerr << "verify failed\n";
        return 3;
      }
    }
  }
  catch( VerificationError const & e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  catch( std::exception const & e )
  {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
