#include "vsg/biochem.hpp"

#include "vsg/gain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vsg {

namespace {

double product(const std::vector<double>& a) {
  if (a.empty()) throw std::invalid_argument("biochem: need at least one rate");
  double p = 1.0;
  for (double v : a) {
    if (!(v > 0.0)) throw std::invalid_argument("biochem: rates must be > 0");
    p *= v;
  }
  return p;
}

}  // namespace

std::vector<double> biochem_equilibrium(const std::vector<double>& a, const GCurve& g) {
  const double A = product(a);
  auto F = [&](double X) { return g(X) - A * X; };
  const auto scan = GridSpec{1e-8, 1e8, 1601}.samples();
  double lo = 0.0;
  double hi = 0.0;
  bool found = false;
  for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
    if (F(scan[k]) > 0.0 && F(scan[k + 1]) <= 0.0) {
      lo = scan[k];
      hi = scan[k + 1];
      found = true;
      break;
    }
  }
  if (!found) throw HypothesisError("biochem_equilibrium: no positive root of a X = g(X) in [1e-8, 1e8]");
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (F(mid) > 0.0 ? lo : hi) = mid;
  }
  const double X = std::abs(F(lo)) < std::abs(F(hi)) ? lo : hi;
  const double residual = std::abs(F(X));
  if (residual > 1e-10 * std::max(1.0, A * X)) {
    std::ostringstream os;
    os << "biochem_equilibrium: bisection stalled with residual " << residual;
    throw HypothesisError(os.str());
  }
  std::vector<double> xs(a.size());
  const double gx = g(X);
  double prefix = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    prefix *= a[i];
    xs[i] = gx / prefix;
  }
  xs.back() = X;
  return xs;
}

double HypothesisReport::theta_lower() const { return std::max(b / (b + 1.0), lambda); }

HypothesisReport check_hypothesis_h(const std::vector<double>& a, const GCurve& g, std::size_t points,
                                    double rel_tol) {
  HypothesisReport rep;
  rep.a = product(a);
  rep.xn_star = biochem_equilibrium(a, g).back();
  const double xs = rep.xn_star;

  auto grid = GridSpec{1e-6 * xs, 1e6 * xs, std::max<std::size_t>(points, 2)}.samples();
  for (double e : {1e-3, 1e-5}) {
    grid.push_back(xs * (1.0 - e));
    grid.push_back(xs * (1.0 + e));
  }
  std::sort(grid.begin(), grid.end());

  double k_lo = 0.0;
  double k_hi = std::numeric_limits<double>::infinity();
  double lam = -std::numeric_limits<double>::infinity();
  double worst_left_X = 0.0;
  for (double X : grid) {
    const double r = g(X) / rep.a;
    if (std::abs(X - xs) > rel_tol * xs) lam = std::max(lam, (r - xs) / std::abs(X - xs));
    const double gap = r - X;
    if (std::abs(gap) <= rel_tol * std::max(X, r)) continue;
    if (gap > 0.0) {
      // K (X - r) <= X (r - X*) with X - r < 0
      const double need = X * (xs - r) / gap;
      if (need > k_lo) k_lo = need;
    } else {
      const double cap = X * (r - xs) / (-gap);
      if (cap < k_hi) {
        k_hi = cap;
        worst_left_X = X;
      }
    }
  }
  rep.K_lower = k_lo;
  rep.K_upper = k_hi;
  rep.lambda = std::max(lam, 1e-12);

  std::ostringstream os;
  os.precision(10);
  rep.left_holds = k_hi > 0.0 && k_lo <= k_hi * (1.0 + rel_tol);
  if (rep.left_holds) {
    rep.K = k_lo > 0.0 ? std::min(k_lo, k_hi) : std::min(k_hi, xs);
  } else {
    os << "lower sector bound fails: need K >= " << k_lo << " but K <= " << k_hi << " (near X = " << worst_left_X
       << "); ";
  }
  rep.right_holds = lam < 1.0;
  if (!rep.right_holds) os << "upper sector bound fails: required lambda = " << lam << " >= 1; ";
  rep.b = rep.K / xs;
  if (rep.holds()) os << "sector condition holds on the grid";
  rep.detail = os.str();
  return rep;
}

std::vector<double> log_transform(std::span<const double> X, std::span<const double> xstar) {
  if (X.size() != xstar.size()) throw std::invalid_argument("log_transform: dimension mismatch");
  std::vector<double> out(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!(X[i] > 0.0) || !(xstar[i] > 0.0)) throw std::domain_error("log_transform: components must be positive");
    out[i] = std::log(X[i] / xstar[i]);
  }
  return out;
}

std::vector<double> log_transform_inverse(std::span<const double> x, std::span<const double> xstar) {
  if (x.size() != xstar.size()) throw std::invalid_argument("log_transform_inverse: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = xstar[i] * std::exp(x[i]);
  return out;
}

Trajectory log_transform(const Trajectory& traj, std::span<const double> xstar) {
  Trajectory out = traj;
  for (auto& s : out.states) s = log_transform(s, xstar);
  for (auto& s : out.history) s = log_transform(s, xstar);
  return out;
}

}  // namespace vsg
