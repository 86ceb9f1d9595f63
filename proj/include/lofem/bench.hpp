#pragma once

#include "lofem/errors.hpp"
#include "lofem/kinds.hpp"
#include "lofem/linalg.hpp"
#include "lofem/mesh.hpp"
#include "lofem/operators.hpp"
#include "lofem/perfmodel.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lofem {

/// Matrix-free / partial-assembly / SpMV disagreement found in verify mode.
class VerificationError : public Error
{
public:
  using Error::Error;
};

struct BenchConfig
{
  OperatorKind kind = OperatorKind::scalar_laplace;
  Strategy strategy = Strategy::matrix_free;
  std::vector< BoxDims > sweep;
  Vec3 lengths{ 1.0, 1.0, 1.0 };
  std::size_t iterations = 20; ///< operator applications / CG iterations per timed run
  Reduction reduction = Reduction::blocked_deterministic;
  IsotropicElasticity material{ 1.0, 1.0 };
  int workers = 1;
  ScatterMode scatter = ScatterMode::colored;
  HardwareSpec hardware{ "V100", 900e9 };
  std::uint64_t seed = 42;
  int warmup = 2;
  int repeats = 5;
  bool verify = false;
  double verify_tol = 1e-12;

  /// Throws ValidationError.
  void validate() const;
};

/// Cubes of 10, 20, 40, 80 and 100 elements per side.
std::vector< BoxDims > default_sweep();

/// ndof * iterations / seconds / 1e9.
double gdofs( std::size_t ndof, std::size_t iterations, double seconds );

/// Runs `fn` warmup times untimed, then `repeats` timed runs; returns the median seconds.
double median_seconds( std::function< void() > const & fn, int warmup, int repeats );

/// Median time of `applications` back-to-back applies and the resulting GDof/s.
struct OperatorTiming
{
  double seconds = 0.0;
  double gdofs = 0.0;
};
OperatorTiming measure_operator( Operator const & op, std::size_t applications, int warmup, int repeats,
                                 std::uint64_t seed = 42 );

/// Deterministic uniform [-1,1] entries.
FieldVector random_field( std::size_t num_nodes, int components, std::uint64_t seed );

/// Worst relative disagreement over random inputs, scaled by max|A_ij| * ||u||_inf.
struct VerifyResult
{
  OperatorKind kind = OperatorKind::scalar_laplace;
  BoxDims dims;
  std::size_t inputs = 0;
  double matrix_free_vs_spmv = 0.0;
  double partial_assembly_vs_spmv = 0.0;
  double partial_assembly_vs_matrix_free = 0.0;
  bool passed = false;
};

VerifyResult verify_point( OperatorKind kind, BoxDims const & dims, Vec3 const & lengths,
                           IsotropicElasticity const & material, std::uint64_t seed, std::size_t inputs,
                           double tol, ExecutionPolicy const & policy = {} );

struct BenchRow
{
  OperatorKind kind = OperatorKind::scalar_laplace;
  Strategy strategy = Strategy::matrix_free;
  BoxDims dims;
  std::size_t ndof = 0;
  int workers = 1;
  Reduction reduction = Reduction::blocked_deterministic;
  std::size_t iterations = 0;
  double op_seconds = 0.0;
  double cg_seconds = 0.0;
  double op_gdofs = 0.0;
  double cg_gdofs = 0.0;
  std::string hardware;
  double model_best_gdofs = 0.0;
  double model_worst_gdofs = 0.0;
  std::optional< double > verify_error; ///< set when verify mode ran
};

/// Throws VerificationError on a verify mismatch and Error on allocation failure, naming the sweep point.
std::vector< BenchRow > run_benchmark( BenchConfig const & config, std::ostream * progress = nullptr );

extern char const * const bench_csv_header;
void write_bench_csv( std::ostream & os, std::span< BenchRow const > rows );

struct ModelRow
{
  OperatorKind kind = OperatorKind::scalar_laplace;
  Strategy strategy = Strategy::matrix_free;
  std::string scenario; ///< "best" (perfect cache) or "worst" (no cache)
  std::string hardware;
  std::size_t elements = 0;
  std::size_t ndof = 0;
  double bytes = 0.0;
  double ms = 0.0;
  double gdofs = 0.0;
};

/// One row per (kind, strategy, scenario, hardware). Element count must be a perfect cube.
std::vector< ModelRow > emit_model_tables( std::size_t elements, std::span< HardwareSpec const > hardware,
                                           std::vector< OperatorKind > const & kinds =
                                             { OperatorKind::scalar_laplace, OperatorKind::elasticity } );

extern char const * const model_csv_header;
void write_model_csv( std::ostream & os, std::span< ModelRow const > rows );

extern char const * const breakdown_csv_header;
/// Per-component byte breakdown: kind,strategy,component,best_bytes,worst_bytes,in_total.
void write_model_breakdown_csv( std::ostream & os, std::size_t elements,
                                std::vector< OperatorKind > const & kinds =
                                  { OperatorKind::scalar_laplace, OperatorKind::elasticity } );

} // namespace lofem
