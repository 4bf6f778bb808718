#include "qlsplab/blockenc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "qlsplab/error.hpp"
#include "qlsplab/rng.hpp"

namespace qlsplab {

nlohmann::json to_json(const BlockEncodingReport& r) {
  return {{"alpha", r.alpha},
          {"ancillas", r.ancillas},
          {"circuit_ancillas", r.circuit_ancillas},
          {"declared_eps", r.declared_eps},
          {"defect", r.defect},
          {"cost_model",
           {{"os_calls", r.cost_model.os_calls},
            {"oa_calls", r.cost_model.oa_calls},
            {"pi_calls", r.cost_model.pi_calls}}}};
}

double symmetric_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && m == m.transpose()) return symmetric_norm(m);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

Eigen::MatrixXd random_symmetric(Index n, double norm, std::uint64_t seed) {
  if (n < 1) throw BadShape("random_symmetric needs n >= 1");
  if (norm == 0.0) return Eigen::MatrixXd::Zero(n, n);
  rng::SplitMix64 gen(seed);
  Eigen::MatrixXd g(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) g(r, c) = gen.normal();
  }
  Eigen::MatrixXd e = 0.5 * (g + g.transpose());
  const double current = symmetric_norm(e);
  if (!(current > 0.0)) throw BadParameters("degenerate random direction");
  return e * (norm / current);
}

namespace {

Index ceil_log2(Index n) {
  Index bits = 0;
  while ((Index{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace

BlockEncoding build_block_encoding(const Eigen::MatrixXd& a, BlockEncodingMode mode,
                                   Index dense_cap) {
  if (a.rows() != a.cols()) throw BadShape("block-encoding needs a square matrix");
  const Index n = a.rows();
  if (2 * n > dense_cap) {
    throw TooLarge("dilation side " + std::to_string(2 * n) + " exceeds dense cap " +
                   std::to_string(dense_cap));
  }
  if (!(mode.perturbation >= 0.0)) throw BadParameters("perturbation must be >= 0");
  const double a_norm = symmetric_norm(a);
  if (a_norm > 1.0 + 1e-9) {
    throw NormTooLarge("||A|| = " + std::to_string(a_norm) + " exceeds 1");
  }

  Eigen::MatrixXd b = a;
  if (mode.perturbation > 0.0) {
    b += random_symmetric(n, mode.perturbation,
                          rng::derive_key(mode.seed, rng::stream::kPerturbation));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const Eigen::VectorXd lam = eig.eigenvalues();
  Eigen::VectorXd s_diag(n);
  for (Index i = 0; i < n; ++i) {
    s_diag(i) = std::sqrt(std::clamp(1.0 - 0.25 * lam(i) * lam(i), 0.0, 1.0));
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::MatrixXd s = v * s_diag.asDiagonal() * v.transpose();

  BlockEncoding out;
  out.unitary.resize(2 * n, 2 * n);
  out.unitary.topLeftCorner(n, n) = 0.5 * b;
  out.unitary.topRightCorner(n, n) = s;
  out.unitary.bottomLeftCorner(n, n) = s;
  out.unitary.bottomRightCorner(n, n) = -0.5 * b;

  out.report.alpha = 2.0;
  out.report.ancillas = 1;
  out.report.circuit_ancillas = ceil_log2(n) + 3;
  out.report.declared_eps = mode.perturbation;
  out.report.defect = verify_block_encoding(out.unitary, a, 2.0);
  return out;
}

double verify_block_encoding(const Eigen::MatrixXd& u, const Eigen::MatrixXd& a,
                             double alpha) {
  if (u.rows() != u.cols() || a.rows() != a.cols() || a.rows() > u.rows()) {
    throw BadShape("incompatible block-encoding dimensions");
  }
  const Eigen::MatrixXd gram = u * u.transpose() - Eigen::MatrixXd::Identity(u.rows(), u.rows());
  const double unitarity = symmetric_norm(0.5 * (gram + gram.transpose()));
  if (unitarity > 1e-10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", unitarity);
    throw NotUnitary(std::string("||U U^T - I|| = ") + buf);
  }
  const Index n = a.rows();
  return spectral_norm(alpha * u.topLeftCorner(n, n) - a);
}

Eigen::VectorXd apply_encoded_block(const Eigen::MatrixXd& u, const Eigen::VectorXd& x) {
  const Index n = x.size();
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(u.cols());
  padded.head(n) = x;
  return (u * padded).head(n);
}

std::vector<std::pair<Index, double>> BlockEncodingAdapter::apply(Index row) {
  ledger_->begin_layer();
  ledger_->record(OracleKind::kSparseS, 2);
  ledger_->record(OracleKind::kSparseA, 2);

  inner_.begin_layer();
  std::vector<std::pair<Index, double>> entries;
  for (int k = 1; k <= 2; ++k) {
    const Index col = oracle_sparse_index(*view_, inner_, row, k);
    entries.emplace_back(col, oracle_entry(*view_, inner_, row, col));
  }
  ++applications_;
  return entries;
}

bool PerturbationReport::passed() const {
  // Slack covers rounding in the computed norms only.
  const auto le = [](double value, double bound) {
    return value <= bound * (1.0 + 1e-12) + 1e-14;
  };
  return le(inv_gap, bound_inv) && le(sol_gap, bound_sol);
}

nlohmann::json to_json(const PerturbationReport& r) {
  return {{"trial", r.trial},     {"eps", r.eps},         {"kappa", r.kappa},
          {"inv_gap", r.inv_gap}, {"sol_gap", r.sol_gap}, {"bound_inv", r.bound_inv},
          {"bound_sol", r.bound_sol}, {"passed", r.passed()}};
}

std::string perturbation_csv_header() {
  return "trial,kappa,eps,inv_gap,bound_inv,sol_gap,bound_sol,passed";
}

std::string to_csv_row(const PerturbationReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d",
                static_cast<long long>(r.trial), r.kappa, r.eps, r.inv_gap, r.bound_inv,
                r.sol_gap, r.bound_sol, r.passed() ? 1 : 0);
  return buf;
}

namespace {

Eigen::VectorXd normalized_first_column(const Eigen::MatrixXd& inv) {
  Eigen::VectorXd v = inv.col(0);
  return v / v.norm();
}

}  // namespace

PerturbationReport perturbation_report(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                       double kappa) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols()) {
    throw BadShape("perturbation_report needs square matrices of equal size");
  }
  if (!(kappa >= 1.0)) throw BadParameters("kappa must be >= 1");
  PerturbationReport r;
  r.kappa = kappa;
  r.eps = spectral_norm(a - b);
  if (!(r.eps * kappa < 1.0)) {
    throw BadParameters("need ||A - B|| < 1/kappa");
  }
  const Eigen::MatrixXd a_inv = a.partialPivLu().inverse();
  const Eigen::MatrixXd b_inv = b.partialPivLu().inverse();
  r.inv_gap = spectral_norm(a_inv - b_inv);
  r.sol_gap = (normalized_first_column(a_inv) - normalized_first_column(b_inv)).norm();
  const double denom = 1.0 - kappa * r.eps;
  r.bound_inv = kappa * kappa * r.eps / denom;
  r.bound_sol = kappa * kappa * (kappa + 1.0) * r.eps / denom;
  return r;
}

std::vector<PerturbationReport> check_perturbation_lemma(double kappa, double eps,
                                                         std::int64_t trials,
                                                         std::uint64_t seed, Index dim) {
  if (!(kappa >= 1.0)) throw BadParameters("kappa must be >= 1");
  if (!(eps > 0.0) || !(eps < 1.0 / kappa)) {
    throw BadParameters("need 0 < eps < 1/kappa");
  }
  if (trials < 0 || dim < 1) throw BadParameters("trials >= 0 and dim >= 1 required");

  const std::uint64_t trial_base = rng::derive_key(seed, rng::stream::kTrials);
  std::vector<PerturbationReport> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    rng::SplitMix64 gen(rng::derive_key(trial_base, static_cast<std::uint64_t>(t)));

    Eigen::MatrixXd g(dim, dim);
    for (Index c = 0; c < dim; ++c) {
      for (Index r = 0; r < dim; ++r) g(r, c) = gen.normal();
    }
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    Eigen::VectorXd lam(dim);
    for (Index i = 0; i < dim; ++i) lam(i) = 1.0 / kappa + (1.0 - 1.0 / kappa) * gen.uniform01();
    Eigen::MatrixXd a = q * lam.asDiagonal() * q.transpose();
    a = 0.5 * (a + a.transpose());

    // Clamping B's spectrum at 1 can move it away from A; redraw until
    // ||A - B|| <= eps holds.
    Eigen::MatrixXd b;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw BadParameters("could not draw B <= I within eps of A");
      const double scale = eps * (1.0 - gen.uniform01());
      b = a + random_symmetric(dim, scale, gen());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
      const Eigen::VectorXd clamped = eig.eigenvalues().cwiseMin(1.0);
      b = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
      b = 0.5 * (b + b.transpose());
      if (spectral_norm(a - b) <= eps) break;
    }
    PerturbationReport r = perturbation_report(a, b, kappa);
    r.trial = t;
    out.push_back(r);
  }
  return out;
}

nlohmann::json to_json(const PipelineBoundReport& r) {
  return {{"kappa", r.kappa},
          {"eps_prime", r.eps_prime},
          {"kappa_prime", r.kappa_prime},
          {"defect", r.defect},
          {"distance", r.distance},
          {"bound", r.bound},
          {"within_bound", r.within_bound},
          {"below_inverse_kappa", r.below_inverse_kappa},
          {"spectrum_in_range", r.spectrum_in_range},
          {"wrong_answer_mass", r.wrong_answer_mass},
          {"passed", r.passed()}};
}

PipelineBoundReport check_pipeline_bound(const PermutationChain& chain,
                                         const Eigen::MatrixXd& a, double kappa,
                                         std::uint64_t seed,
                                         std::optional<double> eps_prime) {
  if (!(kappa >= 4.0)) throw BadKappa("pipeline bound requires kappa >= 4");
  const IndexSpace space(chain.domain_size(), chain.length());
  if (a.rows() != space.dim() || a.cols() != space.dim()) {
    throw BadShape("matrix does not match the chain's index space");
  }
  PipelineBoundReport r;
  r.kappa = kappa;
  r.eps_prime = eps_prime.value_or(1.0 / (2.0 * std::pow(kappa, 5)));
  if (!(r.eps_prime >= 0.0) || !(kappa * r.eps_prime < 1.0)) {
    throw BadParameters("need 0 <= eps' < 1/kappa");
  }
  r.kappa_prime = 2.0 * kappa / (1.0 - 2.0 * kappa * r.eps_prime);

  const Index n = space.dim();
  const Eigen::MatrixXd e =
      random_symmetric(n, r.eps_prime, rng::derive_key(seed, rng::stream::kPipeline));
  const Eigen::MatrixXd a_half = 0.5 * (a + e);
  r.defect = spectral_norm(2.0 * a_half - a);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXd v = a.partialPivLu().solve(rhs);
  Eigen::VectorXd w = a_half.partialPivLu().solve(rhs);
  v /= v.norm();
  w /= w.norm();
  r.distance = (v - w).norm();
  r.bound = 2.0 * kappa * kappa * (2.0 * kappa + 1.0) * r.eps_prime /
            (1.0 - kappa * r.eps_prime);
  r.within_bound = r.distance <= r.bound;
  r.below_inverse_kappa = r.distance < 1.0 / kappa;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a_half, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd sv = eig.eigenvalues().cwiseAbs();
  r.spectrum_in_range = sv.minCoeff() >= 1.0 / r.kappa_prime - 1e-12 &&
                        sv.maxCoeff() <= 1.0 + 1e-12;

  const Index truth = prefix_compose(chain, chain.length());
  const Index q = chain.length();
  for (Index i = 0; i < n; ++i) {
    const BasisIndex bi = space.unflatten(i);
    if (bi.j >= q + 1 && bi.j <= 2 * q && bi.x != truth) r.wrong_answer_mass += w(i) * w(i);
  }
  return r;
}

}  // namespace qlsplab
