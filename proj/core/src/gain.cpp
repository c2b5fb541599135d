#include "vsg/gain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace vsg {

struct GainFn::Node {
  GainKind kind = GainKind::Zero;
  double a = 0.0;  // Linear/Power/Scale: k, LogExpSq: c
  double b = 0.0;  // Power: p, LogExpSq: th
  std::vector<GainFn> kids;
};

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

// ln(1 + th * (e^t - 1)) without overflow for large t.
double log_one_plus_scaled_expm1(double th, double t) {
  if (t <= 700.0) return std::log1p(th * std::expm1(t));
  return t + std::log(th + (1.0 - th) * std::exp(-t));
}

}  // namespace

GainFn::GainFn() : GainFn(std::make_shared<const Node>()) {}

GainFn::GainFn(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

GainFn GainFn::zero() { return GainFn(); }

GainFn GainFn::linear(double k) {
  require(finite_nonneg(k), "linear gain: coefficient must be finite and >= 0");
  return GainFn(std::make_shared<const Node>(Node{GainKind::Linear, k, 0.0, {}}));
}

GainFn GainFn::power(double k, double p) {
  require(finite_nonneg(k), "power gain: coefficient must be finite and >= 0");
  require(finite_pos(p), "power gain: exponent must be finite and > 0");
  return GainFn(std::make_shared<const Node>(Node{GainKind::Power, k, p, {}}));
}

GainFn GainFn::logexpsq(double c, double th) {
  require(finite_pos(c), "logexpsq gain: c must be finite and > 0");
  require(finite_pos(th), "logexpsq gain: th must be finite and > 0");
  return GainFn(std::make_shared<const Node>(Node{GainKind::LogExpSq, c, th, {}}));
}

GainFn GainFn::max(GainFn a, GainFn b) { return max_of({std::move(a), std::move(b)}); }

GainFn GainFn::max_of(std::vector<GainFn> args) {
  if (args.empty()) return zero();
  if (args.size() == 1) return std::move(args.front());
  return GainFn(std::make_shared<const Node>(Node{GainKind::Max, 0.0, 0.0, std::move(args)}));
}

GainFn GainFn::compose(GainFn outer, GainFn inner) {
  return GainFn(std::make_shared<const Node>(
      Node{GainKind::Compose, 0.0, 0.0, {std::move(outer), std::move(inner)}}));
}

GainFn GainFn::scale(double k, GainFn g) {
  require(finite_nonneg(k), "scale gain: coefficient must be finite and >= 0");
  return GainFn(std::make_shared<const Node>(Node{GainKind::Scale, k, 0.0, {std::move(g)}}));
}

GainKind GainFn::kind() const { return node_->kind; }

double GainFn::k() const {
  const auto kd = kind();
  if (kd != GainKind::Linear && kd != GainKind::Power && kd != GainKind::Scale)
    throw std::logic_error("GainFn::k on a node without a coefficient");
  return node_->a;
}

double GainFn::p() const {
  if (kind() != GainKind::Power) throw std::logic_error("GainFn::p on a non-power node");
  return node_->b;
}

double GainFn::c() const {
  if (kind() != GainKind::LogExpSq) throw std::logic_error("GainFn::c on a non-logexpsq node");
  return node_->a;
}

double GainFn::th() const {
  if (kind() != GainKind::LogExpSq) throw std::logic_error("GainFn::th on a non-logexpsq node");
  return node_->b;
}

std::span<const GainFn> GainFn::children() const { return node_->kids; }

double GainFn::eval(double s) const {
  if (!(s >= 0.0)) throw std::domain_error("GainFn::eval: argument must be >= 0");
  const Node& n = *node_;
  switch (n.kind) {
    case GainKind::Zero:
      return 0.0;
    case GainKind::Linear:
      return n.a * s;
    case GainKind::Power:
      return s == 0.0 ? 0.0 : n.a * std::pow(s, n.b);
    case GainKind::LogExpSq: {
      const double l = log_one_plus_scaled_expm1(n.b, std::sqrt(2.0 * s));
      return n.a * l * l;
    }
    case GainKind::Max: {
      double m = 0.0;
      for (const auto& g : n.kids) m = std::max(m, g.eval(s));
      return m;
    }
    case GainKind::Compose:
      return n.kids[0].eval(n.kids[1].eval(s));
    case GainKind::Scale:
      return n.a * n.kids[0].eval(s);
  }
  return 0.0;
}

std::size_t GainFn::size() const {
  std::size_t total = 1;
  for (const auto& g : node_->kids) total += g.size();
  return total;
}

std::string GainFn::to_string() const {
  std::ostringstream os;
  os.precision(17);
  const Node& n = *node_;
  switch (n.kind) {
    case GainKind::Zero:
      os << "zero";
      break;
    case GainKind::Linear:
      os << "linear(" << n.a << ")";
      break;
    case GainKind::Power:
      os << "power(" << n.a << ", " << n.b << ")";
      break;
    case GainKind::LogExpSq:
      os << "logexpsq(" << n.a << ", " << n.b << ")";
      break;
    case GainKind::Max:
      os << "max(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) os << (i ? ", " : "") << n.kids[i].to_string();
      os << ")";
      break;
    case GainKind::Compose:
      os << "compose(" << n.kids[0].to_string() << ", " << n.kids[1].to_string() << ")";
      break;
    case GainKind::Scale:
      os << "scale(" << n.a << ", " << n.kids[0].to_string() << ")";
      break;
  }
  return os.str();
}

GainFn compose_chain(std::span<const GainFn> gs) {
  if (gs.empty()) throw std::invalid_argument("compose_chain: empty chain");
  GainFn acc = gs.back();
  for (std::size_t i = gs.size() - 1; i-- > 0;) acc = GainFn::compose(gs[i], acc);
  return acc;
}

GainFn compose_chain(std::initializer_list<GainFn> gs) {
  return compose_chain(std::span<const GainFn>(gs.begin(), gs.size()));
}

// ---------------------------------------------------------------------------
// simplify

namespace {

bool is_identity(const GainFn& g) { return g.kind() == GainKind::Linear && g.k() == 1.0; }

GainFn normalize_leaf(const GainFn& g) {
  switch (g.kind()) {
    case GainKind::Linear:
      return g.k() == 0.0 ? GainFn::zero() : g;
    case GainKind::Power:
      if (g.k() == 0.0) return GainFn::zero();
      if (g.p() == 1.0) return GainFn::linear(g.k());
      return g;
    default:
      return g;
  }
}

// Folds outer o inner into one leaf when a closed form exists.
std::optional<GainFn> fold_pair(const GainFn& outer, const GainFn& inner) {
  const auto ko = outer.kind();
  const auto ki = inner.kind();
  if (ko == GainKind::Linear && ki == GainKind::Linear) return GainFn::linear(outer.k() * inner.k());
  if (ko == GainKind::Linear && ki == GainKind::Power)
    return GainFn::power(outer.k() * inner.k(), inner.p());
  if (ko == GainKind::Power && ki == GainKind::Linear)
    return GainFn::power(outer.k() * std::pow(inner.k(), outer.p()), outer.p());
  if (ko == GainKind::Power && ki == GainKind::Power)
    return GainFn::power(outer.k() * std::pow(inner.k(), outer.p()), outer.p() * inner.p());
  if (ko == GainKind::Linear && ki == GainKind::LogExpSq)
    return GainFn::logexpsq(outer.k() * inner.c(), inner.th());
  // sqrt(2 * (1/2) L^2) = L, so the outer exponential undoes the inner log.
  if (ko == GainKind::LogExpSq && ki == GainKind::LogExpSq && inner.c() == 0.5)
    return GainFn::logexpsq(outer.c(), outer.th() * inner.th());
  return std::nullopt;
}

void flatten_chain(const GainFn& g, std::vector<GainFn>& out) {
  if (g.kind() == GainKind::Compose) {
    flatten_chain(g.children()[0], out);
    flatten_chain(g.children()[1], out);
  } else {
    out.push_back(g);
  }
}

GainFn make_max(std::vector<GainFn> args) {
  std::vector<GainFn> flat;
  for (auto& a : args) {
    if (a.is_zero()) continue;
    if (a.kind() == GainKind::Max) {
      for (const auto& c : a.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(a));
    }
  }
  return GainFn::max_of(std::move(flat));
}

GainFn compose_simplified(const GainFn& a, const GainFn& b) {
  if (a.is_zero() || b.is_zero()) return GainFn::zero();
  if (a.kind() == GainKind::Max) {
    std::vector<GainFn> parts;
    for (const auto& x : a.children()) parts.push_back(compose_simplified(x, b));
    return make_max(std::move(parts));
  }
  if (b.kind() == GainKind::Max) {
    std::vector<GainFn> parts;
    for (const auto& y : b.children()) parts.push_back(compose_simplified(a, y));
    return make_max(std::move(parts));
  }
  std::vector<GainFn> chain;
  flatten_chain(a, chain);
  flatten_chain(b, chain);

  std::vector<GainFn> folded;
  for (const auto& g : chain) {
    GainFn cur = normalize_leaf(g);
    if (cur.is_zero()) return GainFn::zero();
    if (is_identity(cur)) continue;
    while (!folded.empty()) {
      auto f = fold_pair(folded.back(), cur);
      if (!f) break;
      folded.pop_back();
      cur = normalize_leaf(*f);
      if (cur.is_zero()) return GainFn::zero();
    }
    if (!is_identity(cur)) folded.push_back(cur);
  }
  if (folded.empty()) return GainFn::identity();
  return compose_chain(folded);
}

}  // namespace

GainFn simplify(const GainFn& g) {
  switch (g.kind()) {
    case GainKind::Zero:
    case GainKind::Linear:
    case GainKind::Power:
    case GainKind::LogExpSq:
      return normalize_leaf(g);
    case GainKind::Max: {
      std::vector<GainFn> parts;
      for (const auto& c : g.children()) parts.push_back(simplify(c));
      return make_max(std::move(parts));
    }
    case GainKind::Compose:
      return compose_simplified(simplify(g.children()[0]), simplify(g.children()[1]));
    case GainKind::Scale:
      return compose_simplified(normalize_leaf(GainFn::linear(g.k())), simplify(g.children()[0]));
  }
  return g;
}

bool is_strictly_increasing(const GainFn& g) {
  switch (g.kind()) {
    case GainKind::Zero:
      return false;
    case GainKind::Linear:
    case GainKind::Power:
      return g.k() > 0.0;
    case GainKind::LogExpSq:
      return true;
    case GainKind::Max: {
      bool any = false;
      for (const auto& c : g.children()) {
        if (c.is_zero()) continue;
        if (!is_strictly_increasing(c)) return false;
        any = true;
      }
      return any;
    }
    case GainKind::Compose:
      return is_strictly_increasing(g.children()[0]) && is_strictly_increasing(g.children()[1]);
    case GainKind::Scale:
      return g.k() > 0.0 && is_strictly_increasing(g.children()[0]);
  }
  return false;
}

// ---------------------------------------------------------------------------
// contraction

void GridSpec::validate() const {
  if (!(s_min > 0.0) || !(s_max > s_min) || !std::isfinite(s_max) || points < 2)
    throw std::invalid_argument("grid: need 0 < s_min < s_max < inf and points >= 2");
}

std::vector<double> GridSpec::samples() const {
  validate();
  std::vector<double> out(points);
  const double l0 = std::log(s_min);
  const double l1 = std::log(s_max);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  out.front() = s_min;
  out.back() = s_max;
  return out;
}

const char* to_string(ContractionStatus s) {
  switch (s) {
    case ContractionStatus::ExactTrue:
      return "exact_true";
    case ContractionStatus::ExactFalse:
      return "exact_false";
    case ContractionStatus::GridVerified:
      return "grid_verified";
    case ContractionStatus::GridRefuted:
      return "grid_refuted";
  }
  return "?";
}

namespace {

// First s among `hint` and the default grid with g(s) >= s, if any.
std::optional<double> find_witness(const GainFn& g, std::span<const double> hints) {
  for (double s : hints) {
    if (s > 0.0 && std::isfinite(s) && g.eval(s) >= s) return s;
  }
  for (double s : GridSpec{1e-300, 1e300, 4096}.samples()) {
    if (g.eval(s) >= s) return s;
  }
  return std::nullopt;
}

ContractionVerdict exact_true(std::string detail) {
  return ContractionVerdict{ContractionStatus::ExactTrue, std::nullopt, std::nullopt, std::move(detail)};
}

ContractionVerdict exact_false(const GainFn& g, std::initializer_list<double> hints, std::string detail) {
  std::vector<double> h(hints);
  auto w = find_witness(g, h);
  ContractionVerdict v{ContractionStatus::ExactFalse, w ? w : std::optional<double>(h.front()), std::nullopt,
                       std::move(detail)};
  return v;
}

// Closed-form rules on a simplified leaf; nullopt when no rule applies.
std::optional<ContractionVerdict> exact_rule(const GainFn& g) {
  switch (g.kind()) {
    case GainKind::Zero:
      return exact_true("zero gain");
    case GainKind::Linear:
      if (g.k() < 1.0) return exact_true("linear gain with k < 1");
      return exact_false(g, {1.0}, "linear gain with k >= 1");
    case GainKind::Power: {
      // p != 1 after simplification: k s^p crosses the diagonal.
      const double k = g.k();
      const double p = g.p();
      const double cross = p > 1.0 ? std::pow(k, -1.0 / (p - 1.0)) : std::pow(k, 1.0 / (1.0 - p));
      const double hint = p > 1.0 ? 2.0 * cross : 0.5 * cross;
      return exact_false(g, {hint, cross}, "power gain with p != 1 crosses the identity");
    }
    case GainKind::LogExpSq: {
      // With t = sqrt(2s) the condition reads sqrt(2c) * L(t) < t where
      // L(t) = ln(1 + th (e^t - 1)); L(t)/t is monotone with limits th (t->0)
      // and 1 (t->inf), and never attains either for th != 1.
      const double c = g.c();
      const double th = g.th();
      bool holds = false;
      if (th < 1.0) {
        holds = c <= 0.5;
      } else if (th > 1.0) {
        holds = 2.0 * c * th * th <= 1.0;
      } else {
        holds = c < 0.5;
      }
      if (holds) return exact_true("logexpsq gain below the identity (closed-form rule)");
      double hint = 0.5;
      if (th < 1.0 && c > 0.5) {
        const double r = std::sqrt(2.0 * c);
        const double t = 2.0 * r * -std::log(th) / (r - 1.0) + 1.0;
        hint = 0.5 * t * t;
      } else if (th > 1.0) {
        hint = 1e-8;
      }
      return exact_false(g, {hint, 0.5, 1.0}, "logexpsq gain reaches the identity (closed-form rule)");
    }
    default:
      return std::nullopt;
  }
}

ContractionVerdict grid_check(const GainFn& g, const GridSpec& grid) {
  for (double s : grid.samples()) {
    if (g.eval(s) >= s) {
      return ContractionVerdict{ContractionStatus::GridRefuted, s, grid, "g(s) >= s on the grid"};
    }
  }
  // A counterexample is conclusive wherever it lies, so also probe far outside the grid.
  for (double s : GridSpec{1e-300, 1e300, 4096}.samples()) {
    if (g.eval(s) >= s) {
      return ContractionVerdict{ContractionStatus::GridRefuted, s, grid, "g(s) >= s outside the grid window"};
    }
  }
  return ContractionVerdict{ContractionStatus::GridVerified, std::nullopt, grid,
                            "g(s) < s at every grid point (grid evidence, not a proof)"};
}

}  // namespace

ContractionVerdict check_contraction(const GainFn& g, const GridSpec& grid) {
  grid.validate();
  const GainFn sg = simplify(g);
  if (auto v = exact_rule(sg)) return *v;
  if (sg.kind() == GainKind::Max) {
    bool all_exact_true = true;
    for (const auto& branch : sg.children()) {
      auto v = exact_rule(branch);
      if (!v) {
        all_exact_true = false;
        continue;
      }
      if (v->status == ContractionStatus::ExactFalse) {
        v->detail = "max branch " + branch.to_string() + ": " + v->detail;
        return *v;
      }
    }
    if (all_exact_true) return exact_true("every max branch is below the identity");
  }
  return grid_check(g, grid);
}

// ---------------------------------------------------------------------------
// inversion

double invert(const GainFn& g, double y, double bracket) {
  if (!(y >= 0.0) || !std::isfinite(y)) throw std::invalid_argument("invert: y must be finite and >= 0");
  if (!(bracket > 0.0)) throw std::invalid_argument("invert: bracket must be > 0");
  if (y == 0.0) return 0.0;
  if (!is_strictly_increasing(g)) {
    throw InversionError(InversionError::Reason::NotIncreasing, y,
                         "invert: gain is not strictly increasing: " + g.to_string());
  }
  const double g_hi = g.eval(bracket);
  if (g_hi < y) {
    std::ostringstream os;
    os.precision(17);
    os << "invert: bracket " << bracket << " too small for y = " << y << " (g(bracket) = " << g_hi << ")";
    throw InversionError(InversionError::Reason::BracketTooSmall, y, os.str());
  }
  const GainFn sg = simplify(g);
  if (sg.kind() == GainKind::Linear) return y / sg.k();
  if (sg.kind() == GainKind::Power) return std::pow(y / sg.k(), 1.0 / sg.p());

  double lo = 0.0;
  double hi = bracket;
  for (int it = 0; it < kInvertMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g.eval(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double e_lo = std::abs(g.eval(lo) - y);
  const double e_hi = std::abs(g.eval(hi) - y);
  const double s = e_lo < e_hi ? lo : hi;
  if (std::min(e_lo, e_hi) > kInvertTolerance * std::max(1.0, y)) {
    throw InversionError(InversionError::Reason::NotIncreasing, y,
                         "invert: bisection did not reach tolerance (gain jumps or is too steep)");
  }
  return s;
}

double invert_auto(const GainFn& g, double y) {
  double bracket = 1.0;
  while (g.eval(bracket) < y) {
    bracket *= 2.0;
    if (bracket > 1e300) {
      throw InversionError(InversionError::Reason::BracketTooSmall, y,
                           "invert: gain never reaches the requested value");
    }
  }
  return invert(g, y, bracket);
}

}  // namespace vsg
