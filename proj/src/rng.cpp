#include "dirmix/rng.hpp"

#include "dirmix/errors.hpp"

namespace dirmix {

double draw_gamma(Rng& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("draw_gamma requires positive shape and rate");
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(rng);
}

double draw_exponential(Rng& rng, double rate) {
  if (!(rate > 0.0)) throw DomainError("draw_exponential requires positive rate");
  std::exponential_distribution<double> dist(rate);
  return dist(rng);
}

int draw_categorical(Rng& rng, std::span<const double> probs) {
  const double u = draw_uniform(rng);
  double acc = 0.0;
  for (std::size_t l = 0; l + 1 < probs.size(); ++l) {
    acc += probs[l];
    if (u < acc) return static_cast<int>(l);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace dirmix
