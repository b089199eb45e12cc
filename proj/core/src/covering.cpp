#include "soficrank/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "soficrank/errors.hpp"

namespace soficrank {

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Delta: return "delta";
    case MetricKind::Theta: return "theta";
    case MetricKind::DualGenerator: return "dual-generator";
  }
  return "delta";
}

MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "delta") return MetricKind::Delta;
  if (s == "theta") return MetricKind::Theta;
  if (s == "dual-generator") return MetricKind::DualGenerator;
  throw ValidationError("unknown metric '" + s + "' (expected delta, theta or dual-generator)");
}

void PseudometricSpec::validate() const {
  if (!(p >= 1.0)) throw ValidationError("product exponent p must be >= 1");
}

double circle_distance(double a, double b) {
  double t = std::fmod(std::abs(a - b), 1.0);
  return std::min(t, 1.0 - t);
}

double site_distance(MetricKind kind, std::span<const double> a,
                     std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double t = circle_distance(a[l], b[l]);
    if (kind == MetricKind::Theta) {
      acc = std::max(acc, t);
    } else {
      // The dual-generator metric pairs each character with the n standard
      // generators, which is the l2 norm over coordinates at e.
      acc += t * t;
    }
  }
  return kind == MetricKind::Theta ? acc : std::sqrt(acc);
}

double product_combine(std::span<const double> site_distances, double p) {
  if (site_distances.empty()) return 0.0;
  if (std::isinf(p)) {
    return *std::max_element(site_distances.begin(), site_distances.end());
  }
  double acc = 0.0;
  for (double r : site_distances) acc += std::pow(r, p);
  return std::pow(acc / static_cast<double>(site_distances.size()), 1.0 / p);
}

double product_distance(const PseudometricSpec& metric, std::size_t n,
                        std::span<const double> a, std::span<const double> b) {
  if (n == 0 || a.size() != b.size() || a.size() % n != 0) {
    throw ValidationError("points must have matching length divisible by n");
  }
  const std::size_t d = a.size() / n;
  double acc = 0.0;
  for (std::size_t x = 0; x < d; ++x) {
    const double r = site_distance(metric.kind, a.subspan(x * n, n), b.subspan(x * n, n));
    if (std::isinf(metric.p)) {
      acc = std::max(acc, r);
    } else {
      acc += std::pow(r, metric.p);
    }
  }
  if (std::isinf(metric.p) || d == 0) return acc;
  return std::pow(acc / static_cast<double>(d), 1.0 / metric.p);
}

CoveringBounds covering_number_bruteforce(const std::vector<std::vector<double>>& points,
                                          const Distance& dist, double eps,
                                          std::size_t budget) {
  if (!(eps > 0.0)) throw ValidationError("covering scale eps must be positive");
  if (points.size() > budget) {
    throw BudgetExceeded("covering sample has " + std::to_string(points.size()) +
                         " points, budget is " + std::to_string(budget));
  }
  CoveringBounds out;
  out.points = points.size();
  // Greedy maximal separated sets: a maximal eps-separated set is eps-dense,
  // and any 2 eps-separated set is no larger than an eps-dense one.
  auto greedy = [&](double radius) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < points.size(); ++i) {
      bool separated = true;
      for (std::size_t c : chosen) {
        if (dist(points[i], points[c]) < radius) {
          separated = false;
          break;
        }
      }
      if (separated) chosen.push_back(i);
    }
    return chosen.size();
  };
  out.upper = greedy(eps);
  out.lower = greedy(2.0 * eps);
  return out;
}

CoveringBounds covering_number_bruteforce(const std::vector<std::vector<double>>& points,
                                          const PseudometricSpec& metric, std::size_t n,
                                          double eps, std::size_t budget) {
  metric.validate();
  return covering_number_bruteforce(
      points,
      [&](std::span<const double> a, std::span<const double> b) {
        return product_distance(metric, n, a, b);
      },
      eps, budget);
}

namespace {

// All lattice offsets (as residues mod L) with product distance < radius.
// Returns false if more than `cap` offsets exist.
bool ball_offsets(std::size_t L, std::size_t n, std::size_t d,
                  const PseudometricSpec& metric, double radius, std::size_t cap,
                  std::vector<std::vector<std::size_t>>& out) {
  // Per-site offset tuples with their site distance.
  std::size_t tuples = 1;
  for (std::size_t l = 0; l < n; ++l) tuples *= L;
  std::vector<std::pair<double, std::vector<std::size_t>>> site;
  std::vector<double> a(n, 0.0);
  std::vector<double> b(n);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::vector<std::size_t> digits(n);
    std::size_t rest = t;
    for (std::size_t l = n; l-- > 0;) {
      digits[l] = rest % L;
      rest /= L;
      b[l] = static_cast<double>(digits[l]) / static_cast<double>(L);
    }
    site.emplace_back(site_distance(metric.kind, a, b), std::move(digits));
  }
  const bool sup = std::isinf(metric.p);
  const double budget = sup ? radius : std::pow(radius, metric.p) * static_cast<double>(d);

  std::vector<std::size_t> current;
  bool ok = true;
  auto recurse = [&](auto&& self, std::size_t x, double used) -> void {
    if (!ok) return;
    if (x == d) {
      if (out.size() >= cap) {
        ok = false;
        return;
      }
      out.push_back(current);
      return;
    }
    for (const auto& [r, digits] : site) {
      if (sup) {
        if (!(r < radius)) continue;
      } else {
        const double next = used + std::pow(r, metric.p);
        // Strict inequality only for the full sum; partial sums may tie.
        if (next > budget) continue;
        if (x + 1 == d && !(next < budget)) continue;
      }
      current.insert(current.end(), digits.begin(), digits.end());
      self(self, x + 1, sup ? used : used + std::pow(r, metric.p));
      current.resize(current.size() - digits.size());
      if (!ok) return;
    }
  };
  recurse(recurse, 0, 0.0);
  return ok;
}

std::size_t lattice_greedy(std::size_t L, std::size_t s, std::size_t total,
                           const std::vector<std::vector<std::size_t>>& offsets) {
  std::vector<std::uint8_t> chosen(total, 0);
  std::vector<std::size_t> coords(s, 0);
  std::vector<std::size_t> stride(s, 1);
  for (std::size_t c = s - 1; c-- > 0;) stride[c] = stride[c + 1] * L;
  std::size_t count = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    bool separated = true;
    for (const auto& off : offsets) {
      std::size_t j = 0;
      for (std::size_t c = 0; c < s; ++c) {
        j += ((coords[c] + L - off[c]) % L) * stride[c];
      }
      // Only earlier points can be chosen already.
      if (j < idx && chosen[j]) {
        separated = false;
        break;
      }
    }
    if (separated) {
      chosen[idx] = 1;
      ++count;
    }
    for (std::size_t c = s; c-- > 0;) {
      if (++coords[c] < L) break;
      coords[c] = 0;
    }
  }
  return count;
}

}  // namespace

CoveringBounds lattice_covering(std::size_t L, std::size_t n, std::size_t d,
                                const PseudometricSpec& metric, double eps,
                                double work_limit) {
  metric.validate();
  if (L == 0 || n == 0 || d == 0) throw ValidationError("empty lattice");
  if (!(eps > 0.0)) throw ValidationError("covering scale eps must be positive");
  const std::size_t s = n * d;
  double total_d = std::pow(static_cast<double>(L), static_cast<double>(s));
  if (total_d > 1.0 * (1ULL << 30)) {
    throw BudgetExceeded("lattice with " + std::to_string(L) + "^" + std::to_string(s) +
                         " points exceeds the lattice covering limit");
  }
  const auto total = static_cast<std::size_t>(total_d);
  const auto cap = static_cast<std::size_t>(std::max(1.0, work_limit / total_d));

  CoveringBounds out;
  out.points = total;
  std::vector<std::vector<std::size_t>> offsets;
  if (!ball_offsets(L, n, d, metric, eps, cap, offsets)) {
    throw BudgetExceeded("eps-ball on the lattice has too many offsets for the work limit");
  }
  out.upper = lattice_greedy(L, s, total, offsets);
  offsets.clear();
  if (ball_offsets(L, n, d, metric, 2.0 * eps, cap, offsets)) {
    out.lower = lattice_greedy(L, s, total, offsets);
  } else {
    out.lower_computed = false;
  }
  return out;
}

}  // namespace soficrank
