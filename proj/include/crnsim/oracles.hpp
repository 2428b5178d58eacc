#pragma once

#include <cstdint>

namespace crnsim::oracles {

// Closed forms for the classical single-station models used to calibrate the
// simulator.  All of them require a stable load unless noted otherwise and
// throw std::invalid_argument on bad parameters.

struct MM1Result {
  double rho = 0.0;
  double L = 0.0;
  double Lq = 0.0;
  double W = 0.0;
  double Wq = 0.0;
};

// Single server, infinite room: rho = lambda/mu < 1.
MM1Result mm1(double lambda, double mu);

// Blocking probability of the single-server loss system with room for
// n_total jobs in the system (waiting + in service).  Defined for any
// positive load, including rho == 1 and rho > 1.
double mm1n_loss(double lambda, double mu, int n_total);

// Mean waiting time in queue for c parallel servers (infinite room),
// via the Erlang-B recursion lifted to Erlang C.
double erlang_c_wq(double lambda, double mu, int c);

// Two priority classes on one exponential server, class 1 preemptive-resume
// over class 2, both Poisson, common service rate mu.
struct PrPriorityResult {
  double w1 = 0.0;  // mean response time of the high-priority class
  double w2 = 0.0;  // mean response time of the low-priority class
};

PrPriorityResult mm1_preemptive_resume(double lambda1, double lambda2, double mu);

// Brute-force cross-checks on truncated continuous-time Markov chains.
// These share no algebra with the closed forms above.
double mm1n_loss_ctmc(double lambda, double mu, int n_total);
double mmc_wq_ctmc(double lambda, double mu, int c, int max_in_system);
PrPriorityResult mm1_preemptive_resume_ctmc(double lambda1, double lambda2, double mu,
                                            int cap1, int cap2);

}  // namespace crnsim::oracles
