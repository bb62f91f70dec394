#pragma once

#include <functional>
#include <vector>

namespace langevin {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence. Accurate to ~1e-15 for the orders used here.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int order);

  // \int_a^b f(x) dx
  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

const GaussLegendre& gauss_legendre_64();

}  // namespace langevin
