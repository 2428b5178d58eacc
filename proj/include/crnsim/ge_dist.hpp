#pragma once

#include <cmath>

#include "crnsim/rng.hpp"

namespace crnsim {

// Phase weight of the generalized exponential family for a target squared
// coefficient of variation.  scv == 1 degenerates to the plain exponential.
double ge_tau(double scv);

// Parameters of a generalized exponential stream: mean 1/rate and squared
// coefficient of variation scv >= 1.  With probability 1-tau a draw is an
// immediate zero (batching), otherwise it is exponential with rate tau*rate.
struct GEParams {
  double rate;
  double scv;
  double tau;

  GEParams(double rate_, double scv_);
};

// Inverse-transform exponential: maps a uniform u in (0,1) to -ln(u)/rate.
inline double exp_from_uniform(double rate, double u) noexcept {
  return -std::log(u) / rate;
}

double exp_sample(double rate, RngStream& rng);

// One GE draw.  When tau < 1 this always consumes exactly two uniforms
// (branch + magnitude) so that streams stay aligned sample-for-sample
// across configurations that differ only in scv; the degenerate tau == 1
// case consumes one and is bit-identical to exp_sample.
inline double ge_sample(const GEParams& p, RngStream& rng) noexcept {
  if (p.tau >= 1.0) {
    return exp_from_uniform(p.rate, rng.next_uniform());
  }
  const double branch = rng.next_uniform();
  const double u = rng.next_uniform();
  if (branch >= p.tau) {
    return 0.0;
  }
  return exp_from_uniform(p.tau * p.rate, u);
}

}  // namespace crnsim
