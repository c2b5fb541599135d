#pragma once

// Scalar gain functions of class N1 (continuous, zero at zero, non-decreasing)
// represented as an immutable expression tree.

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsg {

enum class GainKind { Zero, Linear, Power, LogExpSq, Max, Compose, Scale };

class GainFn {
 public:
  /// The zero gain.
  GainFn();

  static GainFn zero();
  static GainFn linear(double k);
  static GainFn identity() { return linear(1.0); }
  /// k * s^p
  static GainFn power(double k, double p);
  /// c * [ln(1 + th * (exp(sqrt(2 s)) - 1))]^2
  static GainFn logexpsq(double c, double th);
  static GainFn max(GainFn a, GainFn b);
  /// Pointwise maximum of any number of gains; an empty list is the zero gain.
  static GainFn max_of(std::vector<GainFn> args);
  /// outer(inner(s))
  static GainFn compose(GainFn outer, GainFn inner);
  static GainFn scale(double k, GainFn g);

  [[nodiscard]] GainKind kind() const;
  [[nodiscard]] bool is_zero() const { return kind() == GainKind::Zero; }

  // Leaf parameters. For Linear/Power/Scale `k()` is the coefficient, for
  // LogExpSq `c()`/`th()`; calling an accessor of another kind throws.
  [[nodiscard]] double k() const;
  [[nodiscard]] double p() const;
  [[nodiscard]] double c() const;
  [[nodiscard]] double th() const;

  /// Children: Max -> args, Compose -> {outer, inner}, Scale -> {g}.
  [[nodiscard]] std::span<const GainFn> children() const;

  [[nodiscard]] double operator()(double s) const { return eval(s); }
  [[nodiscard]] double eval(double s) const;

  /// Number of nodes, counting shared subtrees once per occurrence.
  [[nodiscard]] std::size_t size() const;

  [[nodiscard]] std::string to_string() const;

 private:
  struct Node;
  explicit GainFn(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Left-to-right composition g1 o g2 o ... o gm. Throws std::invalid_argument
/// on an empty list.
GainFn compose_chain(std::span<const GainFn> gs);
GainFn compose_chain(std::initializer_list<GainFn> gs);

/// Rewrites a gain into an equivalent, usually smaller tree: folds compositions
/// of linear/power leaves and of LogExpSq(1/2, .) leaves, removes identities
/// and zeros, and distributes compositions over Max so that the result is
/// either a leaf, a composition chain, or a Max of those.
GainFn simplify(const GainFn& g);

/// Structural sufficient test for strict monotonicity on [0, inf).
bool is_strictly_increasing(const GainFn& g);

struct GridSpec {
  double s_min = 1e-12;
  double s_max = 1e12;
  std::size_t points = 2048;

  void validate() const;
  /// Log-spaced sample points, s_min and s_max included.
  [[nodiscard]] std::vector<double> samples() const;
};

enum class ContractionStatus { ExactTrue, ExactFalse, GridVerified, GridRefuted };

struct ContractionVerdict {
  ContractionStatus status = ContractionStatus::ExactTrue;
  std::optional<double> witness;  // set for ExactFalse and GridRefuted
  std::optional<GridSpec> grid;   // set for GridVerified and GridRefuted
  std::string detail;

  [[nodiscard]] bool holds() const {
    return status == ContractionStatus::ExactTrue || status == ContractionStatus::GridVerified;
  }
  [[nodiscard]] bool exact() const {
    return status == ContractionStatus::ExactTrue || status == ContractionStatus::ExactFalse;
  }
};

const char* to_string(ContractionStatus s);

/// Decides g(s) < s for all s > 0: exactly where a closed-form rule applies,
/// otherwise on the log-spaced grid. A grid pass is followed by a coarse probe
/// of [1e-300, 1e300]; any point with g(s) >= s found there refutes.
ContractionVerdict check_contraction(const GainFn& g, const GridSpec& grid = {});

inline constexpr double kInvertTolerance = 1e-10;
inline constexpr int kInvertMaxIterations = 200;

class InversionError : public std::runtime_error {
 public:
  enum class Reason { BracketTooSmall, NotIncreasing };
  InversionError(Reason reason, double y, const std::string& what)
      : std::runtime_error(what), reason_(reason), y_(y) {}
  [[nodiscard]] Reason reason() const { return reason_; }
  [[nodiscard]] double y() const { return y_; }

 private:
  Reason reason_;
  double y_;
};

/// Returns s in [0, bracket] with |g(s) - y| <= kInvertTolerance * max(1, y). Linear and
/// Power gains are inverted analytically, everything else by bisection.
double invert(const GainFn& g, double y, double bracket);

/// Same as invert() but grows the bracket geometrically from 1 until it
/// covers y (up to 1e300).
double invert_auto(const GainFn& g, double y);

}  // namespace vsg
