#include "wl/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace wl {
namespace {

constexpr double kDegenerateStratumTol = 1e-12;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Composite trapezoid of f over [a, b] with m panels.
double trapezoid(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double sum = 0.5 * (f(a) + f(b));
  for (int k = 1; k < m; ++k) sum += f(a + k * h);
  return sum * h;
}

}  // namespace

Stratification Stratification::explicit_map(std::vector<int> state_to_stratum) {
  if (state_to_stratum.empty()) throw ValidationError("Stratification: empty map");
  const int d = *std::max_element(state_to_stratum.begin(), state_to_stratum.end()) + 1;
  if (d < 2) throw ValidationError("Stratification: need d >= 2 strata");
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (int s : state_to_stratum) {
    if (s < 0) throw ValidationError("Stratification: negative stratum index");
    seen[static_cast<std::size_t>(s)] = true;
  }
  for (int i = 0; i < d; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      throw ValidationError("Stratification: stratum " + std::to_string(i) +
                            " is empty (map must be surjective)");
    }
  }
  Stratification strat;
  strat.d_ = d;
  strat.map_ = std::move(state_to_stratum);
  return strat;
}

Stratification Stratification::bin_edges(std::vector<double> edges) {
  if (edges.size() < 3) throw ValidationError("Stratification: need d >= 2 bins");
  if (edges.front() != 0.0 || edges.back() != 1.0) {
    throw ValidationError("Stratification: bin edges must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) {
      throw ValidationError("Stratification: bin edges must be strictly increasing");
    }
  }
  Stratification strat;
  strat.d_ = static_cast<int>(edges.size()) - 1;
  strat.edges_ = std::move(edges);
  return strat;
}

Stratification Stratification::uniform_bins(int d) {
  if (d < 2) throw ValidationError("Stratification: need d >= 2 bins");
  std::vector<double> edges(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i <= d; ++i) edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / d;
  edges.back() = 1.0;
  return bin_edges(std::move(edges));
}

TargetModel TargetModel::discrete(std::vector<double> log_weights, Stratification strat,
                                  std::string description) {
  if (log_weights.size() < 2) throw ValidationError("TargetModel: need K >= 2 states");
  if (!strat.is_explicit()) {
    throw ValidationError("TargetModel: discrete space needs an explicit stratification map");
  }
  if (strat.map_size() != static_cast<int>(log_weights.size())) {
    throw ValidationError("TargetModel: stratification map size does not match K");
  }
  for (std::size_t x = 0; x < log_weights.size(); ++x) {
    if (!std::isfinite(log_weights[x])) {
      throw ValidationError("TargetModel: log weight not finite at state " + std::to_string(x));
    }
  }
  TargetModel m;
  m.kind_ = SpaceKind::DiscreteFinite;
  m.strat_ = std::move(strat);
  m.log_w_ = std::move(log_weights);
  const double shift = *std::max_element(m.log_w_.begin(), m.log_w_.end());
  m.masses_.resize(m.log_w_.size());
  double total = 0.0;
  for (std::size_t x = 0; x < m.log_w_.size(); ++x) {
    m.masses_[x] = std::exp(m.log_w_[x] - shift);
    total += m.masses_[x];
  }
  for (double& v : m.masses_) v /= total;
  m.description_ = std::move(description);
  return m;
}

TargetModel TargetModel::torus(std::function<double(double)> log_weight, Stratification strat,
                               std::string description) {
  if (!log_weight) throw ValidationError("TargetModel: null log weight");
  if (strat.is_explicit()) {
    throw ValidationError("TargetModel: torus space needs a bin-edge stratification");
  }
  TargetModel m;
  m.kind_ = SpaceKind::Torus1D;
  m.strat_ = std::move(strat);
  m.log_weight_fn_ = std::move(log_weight);
  m.description_ = std::move(description);

  // A1 check on a dense grid, which also yields the overflow shift.
  const int grid = 16384;
  double shift = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid; ++k) {
    const double v = m.log_weight_fn_(static_cast<double>(k) / grid);
    if (!std::isfinite(v)) {
      throw ValidationError("TargetModel: log weight not finite at x = " +
                            format_double(static_cast<double>(k) / grid));
    }
    shift = std::max(shift, v);
  }
  m.torus_shift_ = shift;

  // Normalization constant by doubling trapezoid until relative agreement.
  const auto f = [&m](double x) { return std::exp(m.log_weight_fn_(x) - m.torus_shift_); };
  int nodes = 4096;
  double prev = trapezoid(f, 0.0, 1.0, nodes);
  for (;;) {
    nodes *= 2;
    const double cur = trapezoid(f, 0.0, 1.0, nodes);
    if (std::abs(cur - prev) <= 1e-12 * std::abs(cur) || nodes > (1 << 22)) {
      m.torus_norm_ = cur;
      break;
    }
    prev = cur;
  }
  return m;
}

int TargetModel::num_states() const {
  if (kind_ != SpaceKind::DiscreteFinite) {
    throw UnsupportedError("TargetModel: num_states is defined only for discrete spaces");
  }
  return static_cast<int>(log_w_.size());
}

void TargetModel::check_state(State x) const {
  if (kind_ == SpaceKind::DiscreteFinite) {
    if (!(x.v >= 0.0) || x.v >= static_cast<double>(log_w_.size()) || x.v != std::floor(x.v)) {
      throw DomainError("state " + format_double(x.v) + " not in discrete space of size " +
                        std::to_string(log_w_.size()));
    }
  } else {
    if (!(x.v >= 0.0) || !(x.v < 1.0)) {
      throw DomainError("state " + format_double(x.v) + " not a canonical torus point in [0,1)");
    }
  }
}

double TargetModel::normalized_density(State x) const {
  check_state(x);
  if (kind_ == SpaceKind::DiscreteFinite) return masses_[static_cast<std::size_t>(x.v)];
  return std::exp(log_weight_fn_(x.v) - torus_shift_) / torus_norm_;
}

double TargetModel::biased_density(const WeightVector& theta, const WeightVector& theta_star,
                                   State x) const {
  const int d = num_strata();
  if (theta.dim() != d || theta_star.dim() != d) {
    throw DomainError("biased_density: weight dimension does not match stratification");
  }
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += theta_star[i] / theta[i];
  return normalized_density(x) / (s * theta[stratum_index(x)]);
}

std::string TargetModel::digest() const {
  std::string data = description_;
  data += kind_ == SpaceKind::DiscreteFinite ? "|discrete|" : "|torus|";
  for (double v : log_w_) data += format_double(v) + ",";
  for (int s : strat_.map()) data += std::to_string(s) + ",";
  for (double e : strat_.edges()) data += format_double(e) + ",";
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

WeightVector compute_theta_star(const TargetModel& model, const QuadratureSpec& quad) {
  const int d = model.num_strata();
  std::vector<double> mass(static_cast<std::size_t>(d), 0.0);

  if (model.kind() == SpaceKind::DiscreteFinite) {
    const auto& masses = model.discrete_masses();
    for (int x = 0; x < static_cast<int>(masses.size()); ++x) {
      mass[static_cast<std::size_t>(model.stratum_unchecked(discrete_state(x)))] +=
          masses[static_cast<std::size_t>(x)];
    }
  } else {
    if (quad.initial_nodes < 1000) {
      throw ValidationError("QuadratureSpec: need at least 1000 initial nodes for the torus");
    }
    const auto& edges = model.stratification().edges();
    const auto f = [&model](double x) { return std::exp(model.log_weight_unchecked(State{x})); };
    const auto bin_integrals = [&](int nodes) {
      std::vector<double> vals(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        const double a = edges[static_cast<std::size_t>(i)];
        const double b = edges[static_cast<std::size_t>(i + 1)];
        const int m = std::max(16, static_cast<int>(std::ceil(nodes * (b - a))));
        vals[static_cast<std::size_t>(i)] = trapezoid(f, a, b, m);
      }
      return vals;
    };
    const auto normalize = [](std::vector<double> v) {
      const double total = std::accumulate(v.begin(), v.end(), 0.0);
      for (double& x : v) x /= total;
      return v;
    };
    int nodes = quad.initial_nodes;
    std::vector<double> prev = normalize(bin_integrals(nodes));
    for (;;) {
      nodes *= 2;
      std::vector<double> cur = normalize(bin_integrals(nodes));
      double sup = 0.0;
      for (int i = 0; i < d; ++i) {
        sup = std::max(sup, std::abs(cur[static_cast<std::size_t>(i)] - prev[static_cast<std::size_t>(i)]));
      }
      prev = std::move(cur);
      if (sup < quad.tolerance || nodes > quad.max_nodes) break;
    }
    mass = std::move(prev);
  }

  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (int i = 0; i < d; ++i) {
    mass[static_cast<std::size_t>(i)] /= total;
    if (mass[static_cast<std::size_t>(i)] < kDegenerateStratumTol) {
      throw ValidationError("compute_theta_star: stratum " + std::to_string(i) +
                            " has mass below 1e-12 (degenerate under A1)");
    }
  }
  return WeightVector(std::move(mass));
}

int stratum_index(const TargetModel& model, State x) { return model.stratum_index(x); }

double unnormalized_density(const TargetModel& model, State x) {
  return model.unnormalized_density(x);
}

double biased_density(const TargetModel& model, const WeightVector& theta,
                      const WeightVector& theta_star, State x) {
  return model.biased_density(theta, theta_star, x);
}

namespace {

Stratification contiguous_blocks(int K, int d) {
  if (d < 2 || K < d || K % d != 0) {
    throw ValidationError("built-in discrete models need K divisible by d and d >= 2");
  }
  std::vector<int> map(static_cast<std::size_t>(K));
  const int block = K / d;
  for (int x = 0; x < K; ++x) map[static_cast<std::size_t>(x)] = x / block;
  return Stratification::explicit_map(std::move(map));
}

}  // namespace

TargetModel make_discrete_flat(int K, int d) {
  return TargetModel::discrete(std::vector<double>(static_cast<std::size_t>(K), 0.0),
                               contiguous_blocks(K, d),
                               "discrete-flat K=" + std::to_string(K) + " d=" + std::to_string(d));
}

// Flat except the last state, which carries weight 5. For the default K=4,
// d=2 this is pi proportional to (1,1,1,5) with theta_star = (1/4, 3/4).
TargetModel make_discrete_skew(int K, int d) {
  std::vector<double> log_w(static_cast<std::size_t>(K), 0.0);
  log_w.back() = std::log(5.0);
  return TargetModel::discrete(std::move(log_w), contiguous_blocks(K, d),
                               "discrete-skew K=" + std::to_string(K) + " d=" + std::to_string(d));
}

TargetModel make_torus_cosine(double beta, int harmonics, Stratification strat) {
  if (!std::isfinite(beta)) throw ValidationError("torus cosine model: beta must be finite");
  if (harmonics < 1) throw ValidationError("torus cosine model: harmonics must be >= 1");
  const double two_pi_k = 2.0 * M_PI * harmonics;
  return TargetModel::torus(
      [beta, two_pi_k](double x) { return -beta * std::cos(two_pi_k * x); }, std::move(strat),
      "torus-cosine beta=" + format_double(beta) + " harmonics=" + std::to_string(harmonics));
}

TargetModel make_torus_doublewell(double beta, int d) {
  return make_torus_cosine(beta, 2, Stratification::uniform_bins(d));
}

}  // namespace wl
