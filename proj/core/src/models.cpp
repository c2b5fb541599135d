#include "vsg/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsg {

std::optional<std::vector<double>> Model::worst_disturbance(const RhsArgs&, std::size_t) const {
  return std::nullopt;
}

double Model::max_delay() const {
  double r = 0.0;
  for (const auto& term : delay_terms()) r = std::max(r, term.tau);
  return r;
}

namespace {

void check_square(const Matrix& M, std::size_t n, const char* what) {
  if (M.size() != n) throw std::invalid_argument(std::string(what) + ": wrong number of rows");
  for (const auto& row : M) {
    if (row.size() != n) throw std::invalid_argument(std::string(what) + ": matrix must be square");
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": entries must be finite");
    }
  }
}

void check_input_matrix(const Matrix& B, std::size_t n, const char* what) {
  if (B.empty()) return;
  if (B.size() != n) throw std::invalid_argument(std::string(what) + ": B must have one row per state");
  for (const auto& row : B) {
    if (row.size() != B.front().size() || row.empty())
      throw std::invalid_argument(std::string(what) + ": B rows must have equal, nonzero length");
  }
}

void add_mat_vec(const Matrix& M, std::span<const double> v, std::span<double> out) {
  for (std::size_t i = 0; i < M.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += M[i][j] * v[j];
    out[i] += acc;
  }
}

void check_rates(const std::vector<double>& a, const char* what) {
  if (a.empty()) throw std::invalid_argument(std::string(what) + ": need at least one state");
  for (double v : a) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": all a_i must be > 0");
  }
}

void check_delays(const std::vector<double>& tau, std::size_t n, const char* what) {
  if (tau.size() != n) throw std::invalid_argument(std::string(what) + ": need one delay per state");
  for (double v : tau) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": delays must be >= 0");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

LinearOde::LinearOde(Matrix A, Matrix B) : A_(std::move(A)), B_(std::move(B)) {
  if (A_.empty()) throw std::invalid_argument("linear_ode: empty system matrix");
  check_square(A_, A_.size(), "linear_ode");
  check_input_matrix(B_, A_.size(), "linear_ode");
}

void LinearOde::rhs(const RhsArgs& a, std::span<double> dx) const {
  std::fill(dx.begin(), dx.end(), 0.0);
  add_mat_vec(A_, a.x, dx);
  if (!B_.empty()) add_mat_vec(B_, a.u, dx);
}

SampledLinear::SampledLinear(Matrix A, Matrix H, Matrix B) : A_(std::move(A)), H_(std::move(H)), B_(std::move(B)) {
  if (A_.empty()) throw std::invalid_argument("sampled_linear: empty system matrix");
  check_square(A_, A_.size(), "sampled_linear");
  check_square(H_, A_.size(), "sampled_linear");
  check_input_matrix(B_, A_.size(), "sampled_linear");
}

void SampledLinear::rhs(const RhsArgs& a, std::span<double> dx) const {
  std::fill(dx.begin(), dx.end(), 0.0);
  add_mat_vec(A_, a.x, dx);
  add_mat_vec(H_, a.held, dx);
  if (!B_.empty()) add_mat_vec(B_, a.u, dx);
}

// ---------------------------------------------------------------------------

const char* to_string(LinearDelayNetwork::Coupling c) {
  switch (c) {
    case LinearDelayNetwork::Coupling::Aligned:
      return "aligned";
    case LinearDelayNetwork::Coupling::Signal:
      return "signal";
    case LinearDelayNetwork::Coupling::Signed:
      return "signed";
  }
  return "?";
}

LinearDelayNetwork::LinearDelayNetwork(std::vector<double> a, Matrix c, double r, Coupling coupling)
    : a_(std::move(a)), c_(std::move(c)), r_(r), coupling_(coupling) {
  check_rates(a_, "linear_delay_network");
  check_square(c_, a_.size(), "linear_delay_network");
  for (const auto& row : c_) {
    for (double v : row) {
      if (v < 0.0) throw std::invalid_argument("linear_delay_network: c_ij must be >= 0");
    }
  }
  if (!(r_ >= 0.0) || !std::isfinite(r_)) throw std::invalid_argument("linear_delay_network: r must be >= 0");
}

std::vector<DelayTerm> LinearDelayNetwork::delay_terms() const {
  std::vector<DelayTerm> out;
  for (std::size_t j = 0; j < a_.size(); ++j) out.push_back({j, r_});
  return out;
}

void LinearDelayNetwork::rhs(const RhsArgs& a, std::span<double> dx) const {
  const std::size_t n = a_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double best = 0.0;
    double signed_best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = c_[i][j] * std::abs(a.delayed[j]);
      if (v > best) {
        best = v;
        signed_best = c_[i][j] * a.delayed[j];
      }
    }
    double g = 0.0;
    switch (coupling_) {
      case Coupling::Aligned:
        g = a.x[i] > 0.0 ? best : (a.x[i] < 0.0 ? -best : 0.0);
        break;
      case Coupling::Signal:
        g = (a.d.empty() ? 0.0 : std::clamp(a.d[i], -1.0, 1.0)) * best;
        break;
      case Coupling::Signed:
        g = signed_best;
        break;
    }
    dx[i] = -a_[i] * a.x[i] + g + (a.u.empty() ? 0.0 : a.u[i]);
  }
}

std::optional<std::vector<double>> LinearDelayNetwork::worst_disturbance(const RhsArgs& a, std::size_t i) const {
  std::vector<double> d(a_.size(), 1.0);
  d[i] = a.x[i] < 0.0 ? -1.0 : 1.0;
  return d;
}

std::shared_ptr<LinearDelayNetwork> LinearDelayNetwork::with_coupling(Coupling c) const {
  return std::make_shared<LinearDelayNetwork>(a_, c_, r_, c);
}

// ---------------------------------------------------------------------------

GCurve GCurve::hill(double scale, double p) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("g curve: hill scale must be > 0");
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("g curve: hill exponent must be > 0");
  GCurve g;
  g.kind_ = Kind::Hill;
  g.scale_ = scale;
  g.p_ = p;
  return g;
}

GCurve GCurve::table(std::vector<double> xs, std::vector<double> gs) {
  if (xs.size() < 2 || xs.size() != gs.size())
    throw std::invalid_argument("g curve: table needs at least two matching nodes");
  if (xs.front() != 0.0) throw std::invalid_argument("g curve: table must start at X = 0");
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k]) || !(gs[k] >= 0.0) || !std::isfinite(gs[k]))
      throw std::invalid_argument("g curve: table values must be finite and g >= 0");
    if (k > 0 && !(xs[k] > xs[k - 1])) throw std::invalid_argument("g curve: table abscissae must increase");
  }
  GCurve g;
  g.kind_ = Kind::Table;
  g.xs_ = std::move(xs);
  g.gs_ = std::move(gs);
  return g;
}

double GCurve::eval(double X) const {
  if (!(X >= 0.0)) throw std::domain_error("g curve: argument must be >= 0");
  if (kind_ == Kind::Hill) {
    if (X == 0.0) return 0.0;
    if (p_ == 1.0) return scale_ * X / (1.0 + X);
    // X^p / (1 + X^p) = 1 / (1 + X^-p), stable for large X
    return scale_ / (1.0 + std::pow(X, -p_));
  }
  if (X >= xs_.back()) return gs_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), X);
  const auto k = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double w = (X - xs_[k]) / (xs_[k + 1] - xs_[k]);
  return (1.0 - w) * gs_[k] + w * gs_[k + 1];
}

BiochemCircuit::BiochemCircuit(std::vector<double> a, std::vector<double> tau, GCurve g)
    : a_(std::move(a)), tau_(std::move(tau)), g_(std::move(g)) {
  check_rates(a_, "biochem_circuit");
  check_delays(tau_, a_.size(), "biochem_circuit");
}

std::vector<DelayTerm> BiochemCircuit::delay_terms() const {
  // term i feeds equation i: X_n for i = 0, X_{i-1} otherwise
  const std::size_t n = a_.size();
  std::vector<DelayTerm> out;
  out.push_back({n - 1, tau_[n - 1]});
  for (std::size_t i = 1; i < n; ++i) out.push_back({i - 1, tau_[i - 1]});
  return out;
}

void BiochemCircuit::rhs(const RhsArgs& a, std::span<double> dx) const {
  const std::size_t n = a_.size();
  const double Xn = a.delayed[0];
  if (!(Xn >= 0.0)) throw std::domain_error("biochem_circuit: state left the nonnegative orthant");
  dx[0] = g_(Xn) - a_[0] * a.x[0];
  for (std::size_t i = 1; i < n; ++i) dx[i] = a.delayed[i] - a_[i] * a.x[i];
}

BiochemLog::BiochemLog(std::vector<double> a, std::vector<double> tau, GCurve g, std::vector<double> xstar)
    : a_(std::move(a)), tau_(std::move(tau)), g_(std::move(g)), xstar_(std::move(xstar)) {
  check_rates(a_, "biochem_log");
  check_delays(tau_, a_.size(), "biochem_log");
  if (xstar_.size() != a_.size()) throw std::invalid_argument("biochem_log: equilibrium has the wrong length");
  for (double v : xstar_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("biochem_log: equilibrium must be positive");
  }
  g_star_ = g_(xstar_.back());
  if (!(g_star_ > 0.0)) throw std::invalid_argument("biochem_log: g(X_n*) must be > 0");
}

std::vector<DelayTerm> BiochemLog::delay_terms() const {
  const std::size_t n = a_.size();
  std::vector<DelayTerm> out;
  out.push_back({n - 1, tau_[n - 1]});
  for (std::size_t i = 1; i < n; ++i) out.push_back({i - 1, tau_[i - 1]});
  return out;
}

void BiochemLog::rhs(const RhsArgs& a, std::span<double> dx) const {
  const std::size_t n = a_.size();
  const double ratio = g_(xstar_.back() * std::exp(a.delayed[0])) / g_star_;
  dx[0] = a_[0] * (ratio * std::exp(-a.x[0]) - 1.0);
  for (std::size_t i = 1; i < n; ++i) dx[i] = a_[i] * (std::exp(a.delayed[i] - a.x[i]) - 1.0);
}

}  // namespace vsg
