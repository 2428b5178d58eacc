#pragma once

#include <cstdint>
#include <vector>

namespace crnsim::oracles {

// Steady-state solver for a finite continuous-time Markov chain given by its
// off-diagonal transition rates.  States are dense indices [0, n).  Solves
// pi Q = 0 with sum(pi) = 1 by sparse LU and verifies the residual.
class Ctmc {
 public:
  explicit Ctmc(std::size_t n_states);

  void add_transition(std::size_t from, std::size_t to, double rate);
  std::size_t n_states() const noexcept { return n_; }

  std::vector<double> steady_state() const;

 private:
  struct Entry {
    std::uint32_t from;
    std::uint32_t to;
    double rate;
  };
  std::size_t n_;
  std::vector<Entry> entries_;
};

}  // namespace crnsim::oracles
