#include "meshfree/approx/rbf.hpp"

#include <cmath>
#include <string>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate(const Rbf& rbf) {
  std::visit(overloaded{[](const Polyharmonic& p) {
                          if (p.k < 1) throw ConfigError("polyharmonic exponent must be positive");
                        },
                        [](const auto& s) {
                          if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) {
                            throw ConfigError("RBF shape parameter must be positive");
                          }
                        }},
             rbf);
}

double rbf_value(const Rbf& rbf, double r) {
  return std::visit(overloaded{[r](const Gaussian& g) { return std::exp(-(r * r) / (g.sigma * g.sigma)); },
                               [r](const Multiquadric& m) { return std::sqrt(1.0 + r * r / (m.sigma * m.sigma)); },
                               [r](const InverseMultiquadric& m) {
                                 return 1.0 / std::sqrt(1.0 + r * r / (m.sigma * m.sigma));
                               },
                               [r](const Polyharmonic& p) {
                                 if (r == 0.0) return 0.0;
                                 const double rk = std::pow(r, p.k);
                                 return p.k % 2 ? rk : rk * std::log(r);
                               }},
                    rbf);
}

RadialTerms radial_terms(const Rbf& rbf, double r) {
  RadialTerms t;
  std::visit(overloaded{[&](const Gaussian& g) {
                          const double s2 = g.sigma * g.sigma;
                          const double e = std::exp(-(r * r) / s2);
                          t.value = e;
                          t.first_over_r = -2.0 / s2 * e;
                          t.second = (-2.0 / s2 + 4.0 * r * r / (s2 * s2)) * e;
                          t.mixed = 4.0 / (s2 * s2) * e;
                        },
                        [&](const Multiquadric& m) {
                          const double s2 = m.sigma * m.sigma;
                          const double f = std::sqrt(1.0 + r * r / s2);
                          t.value = f;
                          t.first_over_r = 1.0 / (s2 * f);
                          t.mixed = -1.0 / (s2 * s2 * f * f * f);
                          t.second = t.first_over_r + r * r * t.mixed;
                        },
                        [&](const InverseMultiquadric& m) {
                          const double s2 = m.sigma * m.sigma;
                          const double q = 1.0 + r * r / s2;
                          t.value = 1.0 / std::sqrt(q);
                          t.first_over_r = -std::pow(q, -1.5) / s2;
                          t.mixed = 3.0 * std::pow(q, -2.5) / (s2 * s2);
                          t.second = t.first_over_r + r * r * t.mixed;
                        },
                        [&](const Polyharmonic& p) {
                          const int k = p.k;
                          const double rk2 = std::pow(r, k - 2);
                          if (k % 2) {
                            t.value = rk2 * r * r;
                            t.first_over_r = k * rk2;
                            t.second = k * (k - 1) * rk2;
                            t.mixed = k * (k - 2) * std::pow(r, k - 4);
                          } else {
                            const double lr = std::log(r);
                            t.value = rk2 * r * r * lr;
                            t.first_over_r = rk2 * (k * lr + 1.0);
                            t.second = rk2 * (k * (k - 1) * lr + 2.0 * k - 1.0);
                            t.mixed = std::pow(r, k - 4) * (k * (k - 2) * lr + 2.0 * k - 2.0);
                          }
                        }},
             rbf);
  return t;
}

double rbf_curvature_at_zero(const Rbf& rbf) {
  return std::visit(overloaded{[](const Gaussian& g) { return -2.0 / (g.sigma * g.sigma); },
                               [](const Multiquadric& m) { return 1.0 / (m.sigma * m.sigma); },
                               [](const InverseMultiquadric& m) { return -1.0 / (m.sigma * m.sigma); },
                               [](const Polyharmonic& p) {
                                 if (p.k <= 2) {
                                   throw NumericalError("second derivatives of the polyharmonic r^" +
                                                        std::to_string(p.k) + " are singular at r = 0");
                                 }
                                 return 0.0;
                               }},
                    rbf);
}

void check_gradient_at_zero(const Rbf& rbf) {
  if (const auto* p = std::get_if<Polyharmonic>(&rbf); p && p->k == 1) {
    throw NumericalError("first derivatives of the polyharmonic r^1 are singular at r = 0");
  }
}

}  // namespace meshfree
