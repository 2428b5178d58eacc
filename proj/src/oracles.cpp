#include "crnsim/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "crnsim/ctmc.hpp"

namespace crnsim::oracles {

namespace {
void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
void require_positive(double v, const char* msg) {
  require(std::isfinite(v) && v > 0.0, msg);
}
}  // namespace

MM1Result mm1(double lambda, double mu) {
  require_positive(lambda, "mm1: lambda must be > 0");
  require_positive(mu, "mm1: mu must be > 0");
  const double rho = lambda / mu;
  require(rho < 1.0, "mm1: unstable, lambda/mu must be < 1");
  MM1Result r;
  r.rho = rho;
  r.L = rho / (1.0 - rho);
  r.Lq = rho * rho / (1.0 - rho);
  r.W = 1.0 / (mu - lambda);
  r.Wq = rho / (mu - lambda);
  return r;
}

double mm1n_loss(double lambda, double mu, int n_total) {
  require_positive(lambda, "mm1n_loss: lambda must be > 0");
  require_positive(mu, "mm1n_loss: mu must be > 0");
  require(n_total >= 1, "mm1n_loss: n_total must be >= 1");
  const double rho = lambda / mu;
  if (std::abs(rho - 1.0) < 1e-12) {
    return 1.0 / (n_total + 1.0);
  }
  // (1-rho) rho^n / (1 - rho^{n+1}): evaluate the powers in log space when
  // rho < 1 to keep precision at large n.
  const double num = (1.0 - rho) * std::pow(rho, n_total);
  const double den = 1.0 - std::pow(rho, n_total + 1);
  return num / den;
}

double erlang_c_wq(double lambda, double mu, int c) {
  require_positive(lambda, "erlang_c_wq: lambda must be > 0");
  require_positive(mu, "erlang_c_wq: mu must be > 0");
  require(c >= 1, "erlang_c_wq: c must be >= 1");
  const double a = lambda / mu;  // offered load in erlangs
  require(a < c, "erlang_c_wq: unstable, lambda must be < c*mu");
  double b = 1.0;  // Erlang-B with 0 servers
  for (int k = 1; k <= c; ++k) {
    b = a * b / (k + a * b);
  }
  const double rho = a / c;
  const double pw = b / (1.0 - rho * (1.0 - b));  // probability of waiting
  return pw / (c * mu - lambda);
}

PrPriorityResult mm1_preemptive_resume(double lambda1, double lambda2, double mu) {
  require(std::isfinite(lambda1) && lambda1 >= 0.0, "mm1_preemptive_resume: lambda1 >= 0");
  require_positive(lambda2, "mm1_preemptive_resume: lambda2 must be > 0");
  require_positive(mu, "mm1_preemptive_resume: mu must be > 0");
  const double r1 = lambda1 / mu;
  const double r12 = (lambda1 + lambda2) / mu;
  require(r1 < 1.0, "mm1_preemptive_resume: class-1 load must be < 1");
  require(r12 < 1.0, "mm1_preemptive_resume: total load must be < 1");
  PrPriorityResult out;
  out.w1 = (1.0 / mu) / (1.0 - r1);
  out.w2 = (1.0 / mu) / (1.0 - r1) + (r12 / mu) / ((1.0 - r1) * (1.0 - r12));
  return out;
}

// ---------------------------------------------------------------------------
// CTMC cross-checks

double mm1n_loss_ctmc(double lambda, double mu, int n_total) {
  require_positive(lambda, "mm1n_loss_ctmc: lambda must be > 0");
  require_positive(mu, "mm1n_loss_ctmc: mu must be > 0");
  require(n_total >= 1, "mm1n_loss_ctmc: n_total must be >= 1");
  const std::size_t n = static_cast<std::size_t>(n_total) + 1;
  Ctmc chain(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    chain.add_transition(k, k + 1, lambda);
    chain.add_transition(k + 1, k, mu);
  }
  return chain.steady_state().back();
}

double mmc_wq_ctmc(double lambda, double mu, int c, int max_in_system) {
  require_positive(lambda, "mmc_wq_ctmc: lambda must be > 0");
  require_positive(mu, "mmc_wq_ctmc: mu must be > 0");
  require(c >= 1 && max_in_system > c, "mmc_wq_ctmc: need max_in_system > c >= 1");
  const std::size_t n = static_cast<std::size_t>(max_in_system) + 1;
  Ctmc chain(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    chain.add_transition(k, k + 1, lambda);
    chain.add_transition(k + 1, k, mu * std::min<double>(static_cast<double>(k) + 1.0, c));
  }
  const std::vector<double> pi = chain.steady_state();
  double lq = 0.0;
  for (std::size_t k = static_cast<std::size_t>(c) + 1; k < n; ++k) {
    lq += (static_cast<double>(k) - c) * pi[k];
  }
  const double lambda_eff = lambda * (1.0 - pi.back());
  return lq / lambda_eff;
}

PrPriorityResult mm1_preemptive_resume_ctmc(double lambda1, double lambda2, double mu,
                                            int cap1, int cap2) {
  require_positive(lambda1, "mm1_preemptive_resume_ctmc: lambda1 must be > 0");
  require_positive(lambda2, "mm1_preemptive_resume_ctmc: lambda2 must be > 0");
  require_positive(mu, "mm1_preemptive_resume_ctmc: mu must be > 0");
  require(cap1 >= 1 && cap2 >= 1, "mm1_preemptive_resume_ctmc: caps must be >= 1");
  const std::size_t w = static_cast<std::size_t>(cap2) + 1;
  const std::size_t n = (static_cast<std::size_t>(cap1) + 1) * w;
  const auto idx = [w](int n1, int n2) {
    return static_cast<std::size_t>(n1) * w + static_cast<std::size_t>(n2);
  };
  Ctmc chain(n);
  for (int n1 = 0; n1 <= cap1; ++n1) {
    for (int n2 = 0; n2 <= cap2; ++n2) {
      if (n1 < cap1) chain.add_transition(idx(n1, n2), idx(n1 + 1, n2), lambda1);
      if (n2 < cap2) chain.add_transition(idx(n1, n2), idx(n1, n2 + 1), lambda2);
      if (n1 > 0) {
        chain.add_transition(idx(n1, n2), idx(n1 - 1, n2), mu);
      } else if (n2 > 0) {
        chain.add_transition(idx(n1, n2), idx(n1, n2 - 1), mu);
      }
    }
  }
  const std::vector<double> pi = chain.steady_state();
  double l1 = 0.0, l2 = 0.0, block1 = 0.0, block2 = 0.0;
  for (int n1 = 0; n1 <= cap1; ++n1) {
    for (int n2 = 0; n2 <= cap2; ++n2) {
      const double p = pi[idx(n1, n2)];
      l1 += n1 * p;
      l2 += n2 * p;
      if (n1 == cap1) block1 += p;
      if (n2 == cap2) block2 += p;
    }
  }
  PrPriorityResult out;
  out.w1 = l1 / (lambda1 * (1.0 - block1));
  out.w2 = l2 / (lambda2 * (1.0 - block2));
  return out;
}

}  // namespace crnsim::oracles
