#pragma once

// Continuous-time right-hand sides: ODEs, retarded equations with discrete
// delays, and sampled-data feedback with a held state.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vsg {

/// x_component(t - tau)
struct DelayTerm {
  std::size_t component = 0;
  double tau = 0.0;
};

struct RhsArgs {
  double t = 0.0;
  std::span<const double> x;
  std::span<const double> delayed;  // one value per delay term, in model order
  std::span<const double> held;     // x(tau_i) for sampled-data models
  std::span<const double> u;
  std::span<const double> u_held;
  std::span<const double> d;
};

class Model {
 public:
  virtual ~Model() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual std::size_t dim() const = 0;
  [[nodiscard]] virtual std::size_t input_dim() const { return 0; }
  [[nodiscard]] virtual std::size_t disturbance_dim() const { return 0; }
  [[nodiscard]] virtual std::vector<DelayTerm> delay_terms() const { return {}; }
  [[nodiscard]] virtual bool sampled() const { return false; }

  virtual void rhs(const RhsArgs& a, std::span<double> dx) const = 0;

  /// The disturbance in [-1, 1]^m maximizing x_i f_i(args, d), when known.
  [[nodiscard]] virtual std::optional<std::vector<double>> worst_disturbance(const RhsArgs& a,
                                                                              std::size_t i) const;

  [[nodiscard]] double max_delay() const;
};

using Matrix = std::vector<std::vector<double>>;

/// x' = A x + B u
class LinearOde final : public Model {
 public:
  LinearOde(Matrix A, Matrix B = {});
  [[nodiscard]] std::string name() const override { return "linear_ode"; }
  [[nodiscard]] std::size_t dim() const override { return A_.size(); }
  [[nodiscard]] std::size_t input_dim() const override { return B_.empty() ? 0 : B_.front().size(); }
  void rhs(const RhsArgs& a, std::span<double> dx) const override;

  [[nodiscard]] const Matrix& A() const { return A_; }
  [[nodiscard]] const Matrix& B() const { return B_; }

 private:
  Matrix A_, B_;
};

/// x' = A x + H x(tau_i) + B u
class SampledLinear final : public Model {
 public:
  SampledLinear(Matrix A, Matrix H, Matrix B = {});
  [[nodiscard]] std::string name() const override { return "sampled_linear"; }
  [[nodiscard]] std::size_t dim() const override { return A_.size(); }
  [[nodiscard]] std::size_t input_dim() const override { return B_.empty() ? 0 : B_.front().size(); }
  [[nodiscard]] bool sampled() const override { return true; }
  void rhs(const RhsArgs& a, std::span<double> dx) const override;

  [[nodiscard]] const Matrix& A() const { return A_; }
  [[nodiscard]] const Matrix& H() const { return H_; }
  [[nodiscard]] const Matrix& B() const { return B_; }

 private:
  Matrix A_, H_, B_;
};

/// x_i' = -a_i x_i(t) + g_i + u_i with |g_i| <= max_j c_ij |x_j(t - r)|.
///  Aligned: g_i = sign(x_i(t)) max_j c_ij |x_j(t - r)|   (the worst case)
///  Signal:  g_i = clamp(d_i, -1, 1) max_j c_ij |x_j(t - r)|
///  Signed:  g_i = c_ij* x_j*(t - r) for the j* attaining the max (linear for n = 1)
class LinearDelayNetwork final : public Model {
 public:
  enum class Coupling { Aligned, Signal, Signed };

  LinearDelayNetwork(std::vector<double> a, Matrix c, double r, Coupling coupling = Coupling::Aligned);
  [[nodiscard]] std::string name() const override { return "linear_delay_network"; }
  [[nodiscard]] std::size_t dim() const override { return a_.size(); }
  [[nodiscard]] std::size_t input_dim() const override { return a_.size(); }
  [[nodiscard]] std::size_t disturbance_dim() const override { return a_.size(); }
  [[nodiscard]] std::vector<DelayTerm> delay_terms() const override;
  void rhs(const RhsArgs& a, std::span<double> dx) const override;
  [[nodiscard]] std::optional<std::vector<double>> worst_disturbance(const RhsArgs& a,
                                                                      std::size_t i) const override;

  [[nodiscard]] const std::vector<double>& a() const { return a_; }
  [[nodiscard]] const Matrix& c() const { return c_; }
  [[nodiscard]] double r() const { return r_; }
  [[nodiscard]] Coupling coupling() const { return coupling_; }
  [[nodiscard]] std::shared_ptr<LinearDelayNetwork> with_coupling(Coupling c) const;

 private:
  std::vector<double> a_;
  Matrix c_;
  double r_;
  Coupling coupling_;
};

const char* to_string(LinearDelayNetwork::Coupling c);

/// Production curve of the biochemical circuit.
class GCurve {
 public:
  enum class Kind { Hill, Table };

  /// scale * X^p / (1 + X^p)
  static GCurve hill(double scale, double p);
  /// Piecewise-linear through (xs[k], gs[k]); constant beyond the last node.
  /// xs must start at 0 and increase strictly.
  static GCurve table(std::vector<double> xs, std::vector<double> gs);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double operator()(double X) const { return eval(X); }
  [[nodiscard]] double eval(double X) const;

  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] double p() const { return p_; }
  [[nodiscard]] const std::vector<double>& xs() const { return xs_; }
  [[nodiscard]] const std::vector<double>& gs() const { return gs_; }

 private:
  Kind kind_ = Kind::Hill;
  double scale_ = 1.0;
  double p_ = 1.0;
  std::vector<double> xs_, gs_;
};

/// X_1' = g(X_n(t - tau_n)) - a_1 X_1,  X_i' = X_{i-1}(t - tau_{i-1}) - a_i X_i.
class BiochemCircuit final : public Model {
 public:
  BiochemCircuit(std::vector<double> a, std::vector<double> tau, GCurve g);
  [[nodiscard]] std::string name() const override { return "biochem_circuit"; }
  [[nodiscard]] std::size_t dim() const override { return a_.size(); }
  [[nodiscard]] std::vector<DelayTerm> delay_terms() const override;
  void rhs(const RhsArgs& a, std::span<double> dx) const override;

  [[nodiscard]] const std::vector<double>& a() const { return a_; }
  [[nodiscard]] const std::vector<double>& tau() const { return tau_; }
  [[nodiscard]] const GCurve& g() const { return g_; }

 private:
  std::vector<double> a_, tau_;
  GCurve g_;
};

/// The same circuit in the coordinates x_i = ln(X_i / X_i*):
///   x_1' = a_1 (g(X_n* e^{x_n(t - tau_n)}) / g(X_n*) e^{-x_1} - 1)
///   x_i' = a_i (e^{x_{i-1}(t - tau_{i-1}) - x_i} - 1)
class BiochemLog final : public Model {
 public:
  BiochemLog(std::vector<double> a, std::vector<double> tau, GCurve g, std::vector<double> xstar);
  [[nodiscard]] std::string name() const override { return "biochem_log"; }
  [[nodiscard]] std::size_t dim() const override { return a_.size(); }
  [[nodiscard]] std::vector<DelayTerm> delay_terms() const override;
  void rhs(const RhsArgs& a, std::span<double> dx) const override;

  [[nodiscard]] const std::vector<double>& a() const { return a_; }
  [[nodiscard]] const std::vector<double>& tau() const { return tau_; }
  [[nodiscard]] const GCurve& g() const { return g_; }
  [[nodiscard]] const std::vector<double>& xstar() const { return xstar_; }

 private:
  std::vector<double> a_, tau_;
  GCurve g_;
  std::vector<double> xstar_;
  double g_star_;
};

}  // namespace vsg
