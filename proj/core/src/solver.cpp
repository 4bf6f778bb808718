#include "qlsplab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "qlsplab/error.hpp"
#include "qlsplab/rng.hpp"

namespace qlsplab {

nlohmann::json state_to_json(const StateVector& state) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    const double a = state.amplitudes[i];
    if (std::abs(a) > kStateSerializationFloor) {
      entries.push_back(nlohmann::json::array({static_cast<Index>(i), a}));
    }
  }
  return {{"N", state.space.domain_size()},
          {"q", state.space.length()},
          {"dim", state.space.dim()},
          {"amplitudes", entries}};
}

StateVector state_from_json(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(key, "missing field");
    return j.at(key);
  };
  const auto& n = need("N");
  const auto& q = need("q");
  const auto& amps = need("amplitudes");
  if (!n.is_number_integer() || !q.is_number_integer() || n.get<Index>() < 1 ||
      q.get<Index>() < 1) {
    throw SchemaError("N/q", "must be positive integers");
  }
  if (!amps.is_array()) throw SchemaError("amplitudes", "must be an array");
  const IndexSpace space(n.get<Index>(), q.get<Index>());
  StateVector state{space, std::vector<double>(static_cast<std::size_t>(space.dim()), 0.0),
                    false};
  for (std::size_t k = 0; k < amps.size(); ++k) {
    const auto& e = amps[k];
    const std::string field = "amplitudes[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number()) {
      throw SchemaError(field, "expected [index, amplitude]");
    }
    const Index idx = e[0].get<Index>();
    if (idx < 0 || idx >= space.dim()) throw SchemaError(field, "index out of range");
    state.amplitudes[static_cast<std::size_t>(idx)] = e[1].get<double>();
  }
  return state.normalized_copy();
}

nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j = {{"state", state_to_json(r.state)},
                      {"residual", r.residual},
                      {"p_steps", r.p_steps},
                      {"ledger", to_json(r.ledger_delta)}};
  j["truncation_K"] = r.truncation_k ? nlohmann::json(*r.truncation_k) : nlohmann::json();
  return j;
}

SolveReport solve_direct(const Eigen::MatrixXd& a, const IndexSpace& space,
                         double tolerance) {
  if (a.rows() != a.cols() || a.rows() != space.dim()) {
    throw BadShape("matrix side " + std::to_string(a.rows()) +
                   " does not match the index space dimension " +
                   std::to_string(space.dim()));
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  if (!(lu.rcond() > 1e-14)) throw SingularMatrix("matrix is numerically singular");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
  rhs(0) = 1.0;
  const Eigen::VectorXd v = lu.solve(rhs);
  const double vnorm = v.norm();
  const double residual = (a * v - rhs).norm() / vnorm;
  if (!(residual <= tolerance)) {
    throw SingularMatrix("direct solve residual " + std::to_string(residual) +
                         " exceeds tolerance");
  }
  SolveReport out{StateVector{space, std::vector<double>(v.data(), v.data() + v.size()),
                              false}
                      .normalized_copy(),
                  residual, std::nullopt, 0, {}};
  return out;
}

Index neumann_truncation(Index length, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw BadEps("eps must lie in (0, 1)");
  const double q = static_cast<double>(length);
  const double r = std::exp(-1.0 / q);
  const double vnorm = std::sqrt(exact_solution_norm_squared(length));
  auto tail = [&](Index k) {
    return (1.0 + r) * std::exp(-static_cast<double>(k) / q) / ((1.0 - r) * vnorm);
  };
  const double guess = q * std::log(2.0 * (1.0 + r) / ((1.0 - r) * vnorm * eps));
  Index k = std::max<Index>(1, static_cast<Index>(std::ceil(guess)));
  while (k > 1 && tail(k - 1) <= eps / 2.0) --k;
  while (tail(k) > eps / 2.0) ++k;
  return k;
}

Index neumann_depth_bound(Index length, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw BadEps("eps must lie in (0, 1)");
  const double q = static_cast<double>(length);
  return static_cast<Index>(
      std::ceil(3.0 * q * std::log(4.0 / (eps * (1.0 - std::exp(-1.0 / q))))));
}

SolveReport solve_neumann(const PermutationChain& chain, QueryLedger& ledger, double eps) {
  const Index k_terms = neumann_truncation(chain.length(), eps);
  const IndexSpace space(chain.domain_size(), chain.length());
  const double q = static_cast<double>(chain.length());
  const QueryLedger::Mark mark = ledger.mark();

  std::vector<double> amps(static_cast<std::size_t>(space.dim()), 0.0);
  CyclePoint p{0, 0};
  for (Index k = 0; k < k_terms; ++k) {
    if (k > 0) {
      ledger.begin_layer();
      p = apply_p_step(chain, ledger, p, Direction::kForward);
    }
    amps[static_cast<std::size_t>(space.flatten({1, p.j, p.x}))] +=
        std::exp(-static_cast<double>(k) / q);
  }

  // With v = (1+r) * partial sum, A v - e_0 = -r^K P^K e_0 exactly, since
  // c (1+r) = 1 and the sum telescopes under (I - rP).
  const double r = std::exp(-1.0 / q);
  StateVector partial{space, std::move(amps), false};
  const double residual =
      std::exp(-static_cast<double>(k_terms) / q) / ((1.0 + r) * partial.norm());
  SolveReport out{partial.normalized_copy(), residual, k_terms, k_terms - 1,
                  ledger.summary_since(mark)};
  return out;
}

OutcomeSampler::OutcomeSampler(const StateVector& state, std::uint64_t seed)
    : space_(state.space), key_(rng::derive_key(seed, rng::stream::kSampling)) {
  double acc = 0.0;
  for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
    const double a = state.amplitudes[i];
    if (a == 0.0) continue;
    acc += a * a;
    support_.push_back(static_cast<Index>(i));
    cdf_.push_back(acc);
  }
  if (support_.empty()) throw BadParameters("cannot sample from a zero state");
}

BasisIndex OutcomeSampler::draw(std::uint64_t shot) const {
  const double u = rng::to_unit(rng::counter_draw(key_, shot)) * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return space_.unflatten(support_[static_cast<std::size_t>(it - cdf_.begin())]);
}

std::vector<BasisIndex> sample_outcomes(const StateVector& state, std::int64_t shots,
                                        std::uint64_t seed, std::uint64_t first_shot,
                                        unsigned workers) {
  if (shots < 1) throw BadParameters("shots must be >= 1");
  const OutcomeSampler sampler(state, seed);
  std::vector<BasisIndex> out(static_cast<std::size_t>(shots));
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) out[s] = sampler.draw(first_shot + s);
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(shots)));
  if (workers == 1) {
    run(0, out.size());
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (out.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(out.size(), begin + chunk);
    if (begin < end) pool.emplace_back(run, begin, end);
  }
  for (auto& t : pool) t.join();
  return out;
}

std::optional<Index> extract_answer(const std::vector<BasisIndex>& outcomes, Index length) {
  for (const BasisIndex& o : outcomes) {
    if (o.j >= length + 1 && o.j <= 2 * length) return o.x;
  }
  return std::nullopt;
}

}  // namespace qlsplab
