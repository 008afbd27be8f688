#include "meshfree/pde/timing.hpp"

#include <numeric>

namespace meshfree {

double TimingBreakdown::total() const { return std::accumulate(seconds.begin(), seconds.end(), 0.0); }

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::domain_discretization:
      return "domain";
    case Stage::stencil_selection:
      return "stencil";
    case Stage::weight_computation:
      return "weights";
    case Stage::matrix_assembly:
      return "assembly";
    case Stage::preconditioner:
      return "precond";
    case Stage::iterative_solve:
      return "solve";
    case Stage::error_computation:
      return "error";
  }
  return "?";
}

}  // namespace meshfree
