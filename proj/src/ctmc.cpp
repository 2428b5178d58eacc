#include "crnsim/ctmc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace crnsim::oracles {

Ctmc::Ctmc(std::size_t n_states) : n_(n_states) {
  if (n_states == 0) throw std::invalid_argument("Ctmc: empty state space");
}

void Ctmc::add_transition(std::size_t from, std::size_t to, double rate) {
  if (from >= n_ || to >= n_ || from == to) {
    throw std::invalid_argument("Ctmc::add_transition: bad state pair");
  }
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("Ctmc::add_transition: rate must be finite and >= 0");
  }
  if (rate == 0.0) return;
  entries_.push_back({static_cast<std::uint32_t>(from), static_cast<std::uint32_t>(to), rate});
}

std::vector<double> Ctmc::steady_state() const {
  using Sparse = Eigen::SparseMatrix<double>;
  const auto n = static_cast<Eigen::Index>(n_);

  // Build A = Q^T, then overwrite row 0 with the normalization sum(pi) = 1.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(entries_.size() * 2 + n_);
  std::vector<double> diag(n_, 0.0);
  for (const Entry& e : entries_) {
    diag[e.from] += e.rate;
    if (e.to != 0) {  // row 0 of A is replaced below
      trip.emplace_back(static_cast<int>(e.to), static_cast<int>(e.from), e.rate);
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (i != 0 && diag[i] != 0.0) {
      trip.emplace_back(static_cast<int>(i), static_cast<int>(i), -diag[i]);
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    trip.emplace_back(0, static_cast<int>(i), 1.0);
  }
  Sparse A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;

  Eigen::SparseLU<Sparse> solver;
  solver.analyzePattern(A);
  solver.factorize(A);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Ctmc::steady_state: factorization failed");
  }
  Eigen::VectorXd pi = solver.solve(b);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Ctmc::steady_state: solve failed");
  }

  std::vector<double> out(n_);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    out[i] = std::max(0.0, pi(static_cast<Eigen::Index>(i)));
    sum += out[i];
  }
  if (!(sum > 0.0)) throw std::runtime_error("Ctmc::steady_state: degenerate solution");
  for (double& v : out) v /= sum;

  // Verify pi Q = 0 to solver precision.
  std::vector<double> resid(n_, 0.0);
  for (const Entry& e : entries_) {
    resid[e.to] += out[e.from] * e.rate;
    resid[e.from] -= out[e.from] * e.rate;
  }
  double worst = 0.0;
  for (double r : resid) worst = std::max(worst, std::abs(r));
  if (worst > 1e-8) {
    throw std::runtime_error("Ctmc::steady_state: residual " + std::to_string(worst));
  }
  return out;
}

}  // namespace crnsim::oracles
