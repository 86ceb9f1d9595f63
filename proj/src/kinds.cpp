#include "lofem/kinds.hpp"

#include "lofem/errors.hpp"

namespace lofem {

std::string to_string( OperatorKind kind )
{
  switch( kind )
  {
    case OperatorKind::scalar_laplace: return "scalar_laplace";
    case OperatorKind::vector_laplace: return "vector_laplace";
    case OperatorKind::elasticity: return "elasticity";
  }
  return "unknown";
}

std::string to_string( Strategy strategy )
{
  switch( strategy )
  {
    case Strategy::matrix_free: return "matrix_free";
    case Strategy::partial_assembly: return "partial_assembly";
    case Strategy::spmv: return "spmv";
  }
  return "unknown";
}

OperatorKind parse_operator_kind( std::string_view name )
{
  if( name == "scalar_laplace" || name == "laplace" ) return OperatorKind::scalar_laplace;
  if( name == "vector_laplace" ) return OperatorKind::vector_laplace;
  if( name == "elasticity" || name == "mechanics" ) return OperatorKind::elasticity;
  throw ValidationError( "unknown operator kind '" + std::string( name ) + "'" );
}

Strategy parse_strategy( std::string_view name )
{
  if( name == "matrix_free" ) return Strategy::matrix_free;
  if( name == "partial_assembly" ) return Strategy::partial_assembly;
  if( name == "spmv" ) return Strategy::spmv;
  throw ValidationError( "unknown strategy '" + std::string( name ) + "'" );
}

} // namespace lofem
