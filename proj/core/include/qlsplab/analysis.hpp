#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qlsplab/encoding.hpp"
#include "qlsplab/permchain.hpp"

namespace qlsplab {

/// Dense real amplitudes over an IndexSpace.
struct StateVector {
  IndexSpace space;
  std::vector<double> amplitudes;
  bool normalized = false;

  double norm() const;
  double probability(Index flat) const;
  /// Returns a normalized copy; throws SingularMatrix on a zero vector.
  StateVector normalized_copy() const;
};

double distance(const StateVector& a, const StateVector& b);

/// Probability mass on outcomes with q+1 <= j <= 2q.
double window_mass(const StateVector& state);
/// Probability mass on the b = 0 block.
double block0_mass(const StateVector& state);

/// x_0..x_{3q-1}: the x-coordinate reached by iterating P from (0, 0).
std::vector<Index> xj_table(const PermutationChain& chain);

struct ExactSolution {
  double unnormalized_norm = 0.0;
  StateVector state;
};

/// A^{-1}|0,0,0> in closed form: amplitude (1+e^{-1/q}) e^{-j/q} / (1-e^{-3})
/// on (1, j, x_j), zero elsewhere; the returned state is normalized.
ExactSolution exact_solution_state(const PermutationChain& chain);

/// Squared norm ((1+e^{-1/q})/(1-e^{-3}))^2 (1-e^{-6})/(1-e^{-2/q}).
double exact_solution_norm_squared(Index length);

/// Window probability (e^{-2} - e^{-4})/(1 - e^{-6}) * e^{-2/q}.
double success_probability(Index length);
/// The q = 1 value, which lower-bounds success_probability for all q.
double success_probability_floor();

/// (1 + e^{-1/q}) / (1 - e^{-1/q}).
double kappa_formula(Index length);

/// Smallest q with kappa_formula(q) <= (2 + delta) q. The ratio
/// kappa_formula(q)/q decreases towards 2, so the bound holds from here on.
Index min_length_for_delta(double delta);

struct SpectralReport {
  double op_norm = 0.0;
  double inv_norm = 0.0;
  double kappa = 0.0;          // op_norm * inv_norm
  double kappa_formula = 0.0;
  double delta = 0.1;
  Index length = 0;
  bool op_norm_ok = false;     // op_norm <= 1 + 1e-9
  bool inv_norm_ok = false;    // inv_norm <= kappa_formula + 1e-9
  bool kappa_ok = false;       // kappa <= (2 + delta) q

  bool passed() const { return op_norm_ok && inv_norm_ok && kappa_ok; }
};

nlohmann::json to_json(const SpectralReport& report);

/// Full symmetric eigendecomposition; singular values of A are |eigenvalues|.
/// TooLarge above the cap, SingularMatrix when sigma_min < 1e-14.
SpectralReport spectral_check(const Eigen::MatrixXd& a, Index length, double delta = 0.1,
                              Index dense_cap = kDefaultDenseCap);

/// A^{-1} from its block form, with (I - rP)^{-1} = sum_{k<3q} r^k P^k / (1 - e^{-3})
/// using P^{3q} = I, r = e^{-1/q}.
Eigen::MatrixXd closed_form_inverse(const PermutationChain& chain,
                                    Index dense_cap = kDefaultDenseCap);

}  // namespace qlsplab
