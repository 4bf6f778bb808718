#include "qlsplab/analysis.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qlsplab/error.hpp"

namespace qlsplab {

double StateVector::norm() const {
  double s = 0.0;
  for (double a : amplitudes) s += a * a;
  return std::sqrt(s);
}

double StateVector::probability(Index flat) const {
  const double a = amplitudes.at(static_cast<std::size_t>(flat));
  return normalized ? a * a : a * a / (norm() * norm());
}

StateVector StateVector::normalized_copy() const {
  const double n = norm();
  if (!(n > 0.0)) throw SingularMatrix("cannot normalize a zero state");
  StateVector out{space, amplitudes, true};
  for (double& a : out.amplitudes) a /= n;
  return out;
}

double distance(const StateVector& a, const StateVector& b) {
  if (a.amplitudes.size() != b.amplitudes.size()) {
    throw BadShape("state dimensions differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i) {
    const double d = a.amplitudes[i] - b.amplitudes[i];
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

template <typename Pred>
double mass_where(const StateVector& state, Pred pred) {
  const double n2 = state.normalized ? 1.0 : state.norm() * state.norm();
  double s = 0.0;
  for (Index i = 0; i < static_cast<Index>(state.amplitudes.size()); ++i) {
    const double a = state.amplitudes[static_cast<std::size_t>(i)];
    if (a != 0.0 && pred(state.space.unflatten(i))) s += a * a;
  }
  return s / n2;
}

}  // namespace

double window_mass(const StateVector& state) {
  const Index q = state.space.length();
  return mass_where(state, [q](const BasisIndex& b) { return b.j >= q + 1 && b.j <= 2 * q; });
}

double block0_mass(const StateVector& state) {
  return mass_where(state, [](const BasisIndex& b) { return b.b == 0; });
}

std::vector<Index> xj_table(const PermutationChain& chain) {
  const Index cycle = 3 * chain.length();
  std::vector<Index> xs(static_cast<std::size_t>(cycle));
  CyclePoint p{0, 0};
  for (Index j = 0; j < cycle; ++j) {
    xs[static_cast<std::size_t>(j)] = p.x;
    p = p_step_direct(chain, p, Direction::kForward);
  }
  return xs;
}

double exact_solution_norm_squared(Index length) {
  const double q = static_cast<double>(length);
  const double lead = (1.0 + std::exp(-1.0 / q)) / (1.0 - std::exp(-3.0));
  return lead * lead * (1.0 - std::exp(-6.0)) / (1.0 - std::exp(-2.0 / q));
}

ExactSolution exact_solution_state(const PermutationChain& chain) {
  const IndexSpace space(chain.domain_size(), chain.length());
  const double q = static_cast<double>(chain.length());
  const double lead = (1.0 + std::exp(-1.0 / q)) / (1.0 - std::exp(-3.0));
  const std::vector<Index> xs = xj_table(chain);
  const double norm = std::sqrt(exact_solution_norm_squared(chain.length()));

  StateVector state{space, std::vector<double>(static_cast<std::size_t>(space.dim()), 0.0),
                    true};
  for (Index j = 0; j < space.cycle(); ++j) {
    const double amp = lead * std::exp(-static_cast<double>(j) / q);
    state.amplitudes[static_cast<std::size_t>(
        space.flatten({1, j, xs[static_cast<std::size_t>(j)]}))] = amp / norm;
  }
  return {norm, std::move(state)};
}

double success_probability(Index length) {
  const double q = static_cast<double>(length);
  return (std::exp(-2.0) - std::exp(-4.0)) / (1.0 - std::exp(-6.0)) * std::exp(-2.0 / q);
}

double success_probability_floor() {
  return (std::exp(-4.0) - std::exp(-6.0)) / (1.0 - std::exp(-6.0));
}

double kappa_formula(Index length) {
  const double r = std::exp(-1.0 / static_cast<double>(length));
  return (1.0 + r) / (1.0 - r);
}

Index min_length_for_delta(double delta) {
  if (!(delta > 0.0)) throw BadParameters("delta must be positive");
  Index q = 1;
  while (kappa_formula(q) > (2.0 + delta) * static_cast<double>(q)) ++q;
  return q;
}

nlohmann::json to_json(const SpectralReport& r) {
  return {{"op_norm", r.op_norm},
          {"inv_norm", r.inv_norm},
          {"kappa", r.kappa},
          {"kappa_formula", r.kappa_formula},
          {"delta", r.delta},
          {"q", r.length},
          {"op_norm_ok", r.op_norm_ok},
          {"inv_norm_ok", r.inv_norm_ok},
          {"kappa_ok", r.kappa_ok},
          {"passed", r.passed()}};
}

SpectralReport spectral_check(const Eigen::MatrixXd& a, Index length, double delta,
                              Index dense_cap) {
  if (a.rows() != a.cols()) throw BadShape("spectral_check needs a square matrix");
  if (a.rows() > dense_cap) {
    throw TooLarge("dimension " + std::to_string(a.rows()) + " exceeds dense cap " +
                   std::to_string(dense_cap));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SingularMatrix("eigensolver did not converge");
  const Eigen::VectorXd abs_eig = solver.eigenvalues().cwiseAbs();
  const double sigma_max = abs_eig.maxCoeff();
  const double sigma_min = abs_eig.minCoeff();
  if (sigma_min < 1e-14) {
    throw SingularMatrix("smallest singular value " + std::to_string(sigma_min) +
                         " below 1e-14");
  }
  SpectralReport r;
  r.op_norm = sigma_max;
  r.inv_norm = 1.0 / sigma_min;
  r.kappa = r.op_norm * r.inv_norm;
  r.kappa_formula = kappa_formula(length);
  r.delta = delta;
  r.length = length;
  r.op_norm_ok = r.op_norm <= 1.0 + 1e-9;
  r.inv_norm_ok = r.inv_norm <= r.kappa_formula + 1e-9;
  r.kappa_ok = r.kappa <= (2.0 + delta) * static_cast<double>(length);
  return r;
}

Eigen::MatrixXd closed_form_inverse(const PermutationChain& chain, Index dense_cap) {
  const IndexSpace space(chain.domain_size(), chain.length());
  if (space.dim() > dense_cap) {
    throw TooLarge("dimension " + std::to_string(space.dim()) + " exceeds dense cap");
  }
  const Index half = space.block_dim();
  const Index n = space.domain_size();
  const double q = static_cast<double>(chain.length());
  const double r = std::exp(-1.0 / q);

  // resolvent(P) = sum_k r^k P^k / (1 - e^{-3}); column (j,x) of P^k is the
  // k-th forward step from (j,x).
  Eigen::MatrixXd res_fwd = Eigen::MatrixXd::Zero(half, half);
  for (Index j = 0; j < space.cycle(); ++j) {
    for (Index x = 0; x < n; ++x) {
      CyclePoint p{j, x};
      const Index col = j * n + x;
      for (Index k = 0; k < space.cycle(); ++k) {
        res_fwd(p.j * n + p.x, col) += std::pow(r, static_cast<double>(k));
        p = p_step_direct(chain, p, Direction::kForward);
      }
    }
  }
  res_fwd /= (1.0 - std::exp(-3.0));
  // P^{-1} = P^T, so the other resolvent is the transpose.
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(space.dim(), space.dim());
  inv.topRightCorner(half, half) = (1.0 + r) * res_fwd.transpose();
  inv.bottomLeftCorner(half, half) = (1.0 + r) * res_fwd;
  return inv;
}

}  // namespace qlsplab
