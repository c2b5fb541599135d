#include "vsg/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace vsg {

PlusVec::PlusVec(std::vector<double> v) : v_(std::move(v)) {
  for (double e : v_) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw std::invalid_argument("PlusVec: entries must be finite and >= 0");
  }
}

PlusVec::PlusVec(std::initializer_list<double> v) : PlusVec(std::vector<double>(v)) {}

double PlusVec::max_norm() const {
  double m = 0.0;
  for (double e : v_) m = std::max(m, e);
  return m;
}

namespace {

void check_dims(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    std::ostringstream os;
    os << where << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(os.str());
  }
}

}  // namespace

bool leq(const PlusVec& x, const PlusVec& y) {
  check_dims(x.size(), y.size(), "leq");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) return false;
  }
  return true;
}

PlusVec vec_max(std::span<const PlusVec> xs) {
  if (xs.empty()) throw std::invalid_argument("vec_max: empty list");
  std::vector<double> out = xs.front().values();
  for (const auto& x : xs.subspan(1)) {
    check_dims(out.size(), x.size(), "vec_max");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], x[i]);
  }
  return PlusVec(std::move(out));
}

PlusVec vec_max(const PlusVec& x, const PlusVec& y) {
  const PlusVec both[] = {x, y};
  return vec_max(both);
}

GainMatrix::GainMatrix(std::size_t n) : n_(n), gains_(n * n) {
  if (n == 0) throw std::invalid_argument("GainMatrix: n must be >= 1");
}

void GainMatrix::set(std::size_t i, std::size_t j, GainFn g) {
  if (i >= n_ || j >= n_) throw std::out_of_range("GainMatrix::set: index out of range");
  gains_[i * n_ + j] = std::move(g);
}

GainMatrix GainMatrix::from_linear(const std::vector<std::vector<double>>& coeffs) {
  GainMatrix G(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    check_dims(coeffs[i].size(), coeffs.size(), "GainMatrix::from_linear");
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[i][j] != 0.0) G.set(i, j, GainFn::linear(coeffs[i][j]));
    }
  }
  return G;
}

PlusVec gamma_apply(const GainMatrix& G, const PlusVec& x) {
  check_dims(G.n(), x.size(), "gamma_apply");
  std::vector<double> y(G.n(), 0.0);
  for (std::size_t i = 0; i < G.n(); ++i) {
    for (std::size_t j = 0; j < G.n(); ++j) {
      const GainFn& g = G.at(i, j);
      if (!g.is_zero()) y[i] = std::max(y[i], g.eval(x[j]));
    }
  }
  return PlusVec(std::move(y));
}

PlusVec q_operator(const GainMatrix& G, const PlusVec& x) {
  check_dims(G.n(), x.size(), "q_operator");
  std::vector<double> q = x.values();
  PlusVec it = x;
  for (std::size_t k = 1; k < G.n(); ++k) {
    it = gamma_apply(G, it);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::max(q[i], it[i]);
  }
  return PlusVec(std::move(q));
}

std::vector<Cycle> enumerate_cycles(std::size_t n) {
  std::vector<Cycle> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({i});
  for (std::size_t r = 2; r <= n; ++r) {
    // Choose r nodes (bitmask order), fix the smallest first, permute the rest.
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(r), true);
    do {
      Cycle nodes;
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) nodes.push_back(i);
      }
      do {
        out.push_back(nodes);
      } while (std::next_permutation(nodes.begin() + 1, nodes.end()));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

GainFn cycle_gain(const GainMatrix& G, const Cycle& cycle) {
  if (cycle.empty()) throw std::invalid_argument("cycle_gain: empty cycle");
  std::vector<GainFn> chain;
  chain.reserve(cycle.size());
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    chain.push_back(G.at(cycle[k], cycle[(k + 1) % cycle.size()]));
  }
  return compose_chain(chain);
}

std::string cycle_to_string(const Cycle& cycle) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < cycle.size(); ++k) os << (k ? "," : "") << cycle[k] + 1;
  os << ")";
  return os.str();
}

SmallGainReport check_small_gain(const GainMatrix& G, const GridSpec& grid) {
  SmallGainReport report;
  for (auto& cycle : enumerate_cycles(G.n())) {
    CycleCheck check;
    check.cycle = cycle;
    bool has_zero = false;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (G.at(cycle[k], cycle[(k + 1) % cycle.size()]).is_zero()) has_zero = true;
    }
    if (has_zero) {
      check.skipped_zero = true;
    } else {
      check.verdict = check_contraction(cycle_gain(G, cycle), grid);
      if (!check.verdict->exact()) report.exact = false;
      if (!check.verdict->holds()) {
        report.holds = false;
        if (!report.failing_cycle) report.failing_cycle = FailingCycle{cycle, *check.verdict->witness};
      }
    }
    report.cycles.push_back(std::move(check));
  }
  return report;
}

std::optional<PlusVec> cycle_witness_vector(const GainMatrix& G, const Cycle& cycle, double s) {
  const std::size_t r = cycle.size();
  std::vector<double> x(G.n(), 0.0);
  // x_{i_r} = gamma_{i_r,i_1}(s), x_{i_j} = gamma_{i_j,i_{j+1}}(x_{i_{j+1}}), x_{i_1} = s
  double v = s;
  for (std::size_t k = r; k-- > 1;) {
    v = G.at(cycle[k], cycle[(k + 1) % r]).eval(v);
    x[cycle[k]] = v;
  }
  x[cycle[0]] = s;
  PlusVec xv(std::move(x));
  if (xv.max_norm() > 0.0 && leq(xv, gamma_apply(G, xv))) return xv;
  return std::nullopt;
}

std::optional<PlusVec> gas_witness_search(const GainMatrix& G, const WitnessSearchOptions& opts,
                                          const GridSpec& grid) {
  const auto report = check_small_gain(G, grid);
  for (const auto& c : report.cycles) {
    if (c.skipped_zero || c.verdict->holds()) continue;
    const double s0 = *c.verdict->witness;
    for (double s : {s0, 2.0 * s0, 0.5 * s0, 1.0}) {
      if (auto w = cycle_witness_vector(G, c.cycle, s)) return w;
    }
  }

  std::mt19937_64 rng(opts.seed);
  const double lo = std::log(1e-6 * opts.radius);
  const double hi = std::log(opts.radius);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(G.n());
  for (std::size_t k = 0; k < opts.samples; ++k) {
    for (auto& e : x) e = std::exp(u(rng));
    PlusVec xv(x);
    if (leq(xv, gamma_apply(G, xv))) return xv;
  }
  return std::nullopt;
}

}  // namespace vsg
