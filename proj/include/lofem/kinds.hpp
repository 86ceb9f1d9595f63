#pragma once

#include <string>
#include <string_view>

namespace lofem {

enum class OperatorKind
{
  scalar_laplace,
  vector_laplace,
  elasticity
};

/// How the operator is applied.
enum class Strategy
{
  matrix_free,
  partial_assembly,
  spmv
};

/// Degrees of freedom per node: 1 for scalar Laplace, 3 otherwise.
constexpr int components_of( OperatorKind kind )
{
  return kind == OperatorKind::scalar_laplace ? 1 : 3;
}

std::string to_string( OperatorKind kind );
std::string to_string( Strategy strategy );

/// Throws ValidationError on unknown names.
OperatorKind parse_operator_kind( std::string_view name );
Strategy parse_strategy( std::string_view name );

} // namespace lofem
