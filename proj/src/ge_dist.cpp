#include "crnsim/ge_dist.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crnsim {

double ge_tau(double scv) {
  if (!std::isfinite(scv) || scv < 1.0) {
    throw std::invalid_argument("ge_tau: scv must be finite and >= 1, got " +
                                std::to_string(scv));
  }
  return 2.0 / (scv + 1.0);
}

GEParams::GEParams(double rate_, double scv_) : rate(rate_), scv(scv_), tau(0.0) {
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw std::invalid_argument("GEParams: rate must be finite and > 0, got " +
                                std::to_string(rate));
  }
  tau = ge_tau(scv);
}

double exp_sample(double rate, RngStream& rng) {
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw std::invalid_argument("exp_sample: rate must be finite and > 0, got " +
                                std::to_string(rate));
  }
  return exp_from_uniform(rate, rng.next_uniform());
}

}  // namespace crnsim
