#include "hcs/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hcs {

TrigPolynomial::TrigPolynomial(std::vector<Point> waves, std::vector<double> amps,
                               std::vector<double> phases)
    : waves_(std::move(waves)), amps_(std::move(amps)), phases_(std::move(phases)) {}

double TrigPolynomial::operator()(const Point& x) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < waves_.size(); ++t)
    acc += amps_[t] * std::cos(waves_[t].dot(x) + phases_[t]);
  return acc;
}

TrigPolynomial TrigPolynomial::random(int dim, std::mt19937_64& rng, int terms, int max_frequency,
                                      double unit) {
  std::uniform_int_distribution<int> freq(-max_frequency, max_frequency);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  std::vector<Point> waves(terms, Point(dim));
  std::vector<double> amps(terms), phases(terms);
  for (int t = 0; t < terms; ++t) {
    for (int i = 0; i < dim; ++i) waves[t][i] = unit * freq(rng);
    phases[t] = phase(rng);
    amps[t] = weight(rng);
  }
  const double total = std::accumulate(amps.begin(), amps.end(), 0.0);
  for (double& a : amps) a /= total;
  return TrigPolynomial(std::move(waves), std::move(amps), std::move(phases));
}

double frequency_unit(const ManifoldChart& m) {
  return m.quadrature ? 2.0 * std::numbers::pi / m.quadrature->period : 1.0;
}

namespace {

// Signed offsets sharing one independent component k, i1 < .. < ip.
struct Orbit {
  std::vector<std::size_t> offsets;
  std::vector<double> signs;
};

std::vector<Orbit> antisymmetric_orbits(int n, int p) {
  const Tensor shape(n, p + 1);
  std::vector<Orbit> orbits;
  std::vector<int> idx(p + 1), sorted(p), perm(p), full(p + 1);
  for (std::size_t f = 0; f < shape.size(); ++f) {
    shape.unravel(f, idx);
    if (!std::is_sorted(idx.begin() + 1, idx.end(), std::less_equal<int>())) continue;
    Orbit o;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      int inversions = 0;
      for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
          if (perm[a] > perm[b]) ++inversions;
      full[0] = idx[0];
      for (int a = 0; a < p; ++a) full[1 + a] = idx[1 + perm[a]];
      o.offsets.push_back(shape.offset(full));
      o.signs.push_back(inversions % 2 == 0 ? 1.0 : -1.0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    orbits.push_back(std::move(o));
  }
  return orbits;
}

}  // namespace

TangentTensorField random_tensor_field(ManifoldPtr base, int valence, std::uint64_t seed,
                                       const RandomFieldOptions& opts) {
  const int n = base->dim;
  const double unit = frequency_unit(*base);
  std::mt19937_64 rng(seed);
  const double amplitude = opts.amplitude;
  if (opts.antisymmetric && valence >= 2) {
    // Only components with strictly increasing covariant indices are free.
    std::vector<Orbit> orbits = antisymmetric_orbits(n, valence);
    std::vector<TrigPolynomial> comps;
    comps.reserve(orbits.size());
    for (std::size_t c = 0; c < orbits.size(); ++c)
      comps.push_back(TrigPolynomial::random(n, rng, opts.terms, opts.max_frequency, unit));
    return TangentTensorField(std::move(base), valence,
                              [n, valence, comps = std::move(comps), orbits = std::move(orbits), amplitude](const Point& x) {
                                Tensor t(n, valence + 1);
                                for (std::size_t c = 0; c < orbits.size(); ++c) {
                                  const double v = amplitude * comps[c](x);
                                  for (std::size_t k = 0; k < orbits[c].offsets.size(); ++k)
                                    t[orbits[c].offsets[k]] = orbits[c].signs[k] * v;
                                }
                                return t;
                              });
  }
  const Tensor shape(n, valence + 1);
  std::vector<TrigPolynomial> comps;
  comps.reserve(shape.size());
  for (std::size_t f = 0; f < shape.size(); ++f)
    comps.push_back(TrigPolynomial::random(n, rng, opts.terms, opts.max_frequency, unit));
  return TangentTensorField(std::move(base), valence, [n, valence, comps = std::move(comps), amplitude](const Point& x) {
    Tensor t(n, valence + 1);
    for (std::size_t f = 0; f < t.size(); ++f) t[f] = amplitude * comps[f](x);
    return t;
  });
}

std::uint64_t split_seed(std::uint64_t root, std::uint64_t stream) {
  // splitmix64 finalizer over root + stream * golden gamma
  std::uint64_t z = root + (stream + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hcs
