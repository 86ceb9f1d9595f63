#pragma once

#include "lofem/kinds.hpp"
#include "lofem/linalg.hpp"
#include "lofem/mesh.hpp"
#include "lofem/operators.hpp"

#include <vector>

namespace lofem {

struct CgOptions
{
  double tol = 1e-8;             ///< relative l2 residual target
  std::size_t max_iter = 1000;
  Reduction reduction = Reduction::blocked_deterministic;
  int workers = 1;               ///< dots and axpys; the operator carries its own policy
  bool fixed_iterations = false; ///< run exactly max_iter iterations, no convergence test
  std::size_t residual_check_interval = 0; ///< recompute ||b - A x|| every N iterations (0 = never)
};

struct KernelTimings
{
  double apply = 0.0;
  double dot = 0.0;
  double axpy = 0.0;
  double total = 0.0; ///< wall time of the iteration loop
  std::size_t applies = 0;
  std::size_t dots = 0;
  std::size_t axpys = 0;
};

struct ResidualCheck
{
  std::size_t iteration = 0;
  double recurrence = 0.0;    ///< sqrt(r_k . r_k) from the CG recurrence
  double explicit_norm = 0.0; ///< ||b - A x_k|| recomputed from scratch
};

struct CgReport
{
  std::size_t iterations = 0;
  std::vector< double > residual_history; ///< iterations + 1 entries
  bool converged = false;
  KernelTimings timings;
  double cg_dofs_per_second = 0.0;       ///< ndof * iterations / loop time
  double operator_dofs_per_second = 0.0; ///< ndof * applies / apply time
  std::vector< ResidualCheck > residual_checks;
};

struct CgResult
{
  FieldVector x;
  CgReport report;
};

/**
 * Unpreconditioned CG:
 *   alpha = r.r / p.Ap,  x += alpha p,  r -= alpha Ap,  r.r,  p = r + beta p.
 * The r update and its dot are separate passes. Stops when ||r|| <= tol ||r_0||
 * unless fixed_iterations is set. Throws DivergenceError when alpha or beta is not finite.
 */
CgResult cg_solve( Operator const & op, FieldVector const & b, FieldVector const & x0, CgOptions const & options );

/// x0 = 0.
CgResult cg_solve( Operator const & op, FieldVector const & b, CgOptions const & options );

/// Bytes per CG kernel row, each counted as two vector streams of ndof doubles.
struct CgKernelTraffic
{
  double dot_p_ap = 0.0;
  double axpy_x = 0.0;
  double axpy_r_dot_rr = 0.0;
  double axpy_p = 0.0;
};

CgKernelTraffic cg_kernel_traffic_model( OperatorKind kind, BoxDims const & dims );
/// Element count must be a perfect cube.
CgKernelTraffic cg_kernel_traffic_model( OperatorKind kind, std::size_t num_elements );

} // namespace lofem
