#pragma once

#include "hcs/forms.hpp"

#include <cstdint>

namespace hcs {

// Scalar trigonometric polynomial sum_t a_t cos(<k_t, x> + phi_t) with
// sum_t |a_t| <= 1.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(std::vector<Point> waves, std::vector<double> amps, std::vector<double> phases);

  double operator()(const Point& x) const;

  // Integer wave vectors with entries in [-max_frequency, max_frequency],
  // scaled by `unit`. On a torus of period L use unit = 2 pi / L.
  static TrigPolynomial random(int dim, std::mt19937_64& rng, int terms, int max_frequency,
                               double unit);

 private:
  std::vector<Point> waves_;
  std::vector<double> amps_;
  std::vector<double> phases_;
};

struct RandomFieldOptions {
  int terms = 3;
  int max_frequency = 1;
  double amplitude = 1.0;
  bool antisymmetric = true;  // antisymmetrize the covariant slots
};

// Frequency unit that keeps trigonometric fields periodic on the chart:
// 2 pi / L on a torus, 1 elsewhere.
double frequency_unit(const ManifoldChart& m);

// Smooth seeded field whose components are independent trigonometric
// polynomials.
TangentTensorField random_tensor_field(ManifoldPtr base, int valence, std::uint64_t seed,
                                       const RandomFieldOptions& opts = {});

// Seed derivation for independent streams from one root seed.
std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream);

}  // namespace hcs
