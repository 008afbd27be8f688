#pragma once

#include <variant>

namespace meshfree {

/// exp(-(r/sigma)^2)
struct Gaussian {
  double sigma = 1.0;
};

/// sqrt(1 + (r/sigma)^2)
struct Multiquadric {
  double sigma = 1.0;
};

/// 1 / sqrt(1 + (r/sigma)^2)
struct InverseMultiquadric {
  double sigma = 1.0;
};

/// r^k for odd k, r^k log r for even k.
struct Polyharmonic {
  int k = 3;
};

using Rbf = std::variant<Gaussian, Multiquadric, InverseMultiquadric, Polyharmonic>;

/// Throws ConfigError for non-positive shape parameters or exponents.
void validate(const Rbf& rbf);

/// Radial profile f and derived quantities at r > 0:
///   first_over_r = f'(r) / r
///   second       = f''(r)
///   mixed        = (f'' - f'/r) / r^2
/// so that grad = first_over_r * y and hess = mixed * y y^T + first_over_r * I.
struct RadialTerms {
  double value = 0.0;
  double first_over_r = 0.0;
  double second = 0.0;
  double mixed = 0.0;
};

double rbf_value(const Rbf& rbf, double r);
RadialTerms radial_terms(const Rbf& rbf, double r);

/// Limit of f'(r)/r as r -> 0 (equal to f''(0)); throws NumericalError when
/// the limit does not exist.
double rbf_curvature_at_zero(const Rbf& rbf);
/// Throws NumericalError when the gradient is undefined at r = 0.
void check_gradient_at_zero(const Rbf& rbf);

}  // namespace meshfree
