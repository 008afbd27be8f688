#include "meshfree/approx/monomials.hpp"

#include <numeric>

#include "meshfree/core/errors.hpp"

namespace meshfree {

namespace {

template <int Dim>
void enumerate_degree(int degree, int axis, MultiIndex<Dim>& current, std::vector<MultiIndex<Dim>>& out) {
  if (axis == Dim - 1) {
    current[axis] = degree;
    out.push_back(current);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[axis] = e;
    enumerate_degree<Dim>(degree - e, axis + 1, current, out);
  }
}

}  // namespace

int monomial_count(int degree, int dim) {
  if (degree < 0) return 0;
  long long c = 1;
  for (int i = 1; i <= dim; ++i) c = c * (degree + i) / i;
  return static_cast<int>(c);
}

template <int Dim>
Monomials<Dim>::Monomials(int degree) {
  if (degree < -1) throw ConfigError("monomial degree must be >= -1");
  for (int t = 0; t <= degree; ++t) {
    MultiIndex<Dim> current{};
    enumerate_degree<Dim>(t, 0, current, exponents_);
  }
}

template <int Dim>
Monomials<Dim> Monomials<Dim>::without_mixed(int degree) {
  Monomials full(degree);
  Monomials out;
  for (const auto& e : full.exponents_) {
    int nonzero = 0;
    for (int v : e) nonzero += v != 0;
    if (nonzero <= 1) out.exponents_.push_back(e);
  }
  return out;
}

template <int Dim>
Monomials<Dim> Monomials<Dim>::from_exponents(std::vector<MultiIndex<Dim>> exponents) {
  for (const auto& e : exponents)
    for (int v : e)
      if (v < 0) throw ConfigError("monomial exponents must be nonnegative");
  Monomials out;
  out.exponents_ = std::move(exponents);
  return out;
}

template <int Dim>
int Monomials<Dim>::max_degree() const {
  int m = -1;
  for (const auto& e : exponents_) m = std::max(m, std::accumulate(e.begin(), e.end(), 0));
  return m;
}

template <int Dim>
double Monomials<Dim>::partial(const MultiIndex<Dim>& e, const MultiIndex<Dim>& orders, const Vec<Dim>& x) {
  double value = 1.0;
  for (int a = 0; a < Dim; ++a) {
    const int p = e[a];
    const int k = orders[a];
    if (k > p) return 0.0;
    for (int f = p; f > p - k; --f) value *= f;
    for (int i = 0; i < p - k; ++i) value *= x[a];
  }
  return value;
}

template class Monomials<1>;
template class Monomials<2>;
template class Monomials<3>;

}  // namespace meshfree
