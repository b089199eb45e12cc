#include "soficrank/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "soficrank/errors.hpp"

namespace soficrank {

namespace {

void check_box(const FolnerBox& b, const char* what) {
  if (b.sides.empty()) throw ValidationError(std::string(what) + " has no dimensions");
  for (auto s : b.sides) {
    if (s < 1) throw ValidationError(std::string(what) + " side lengths must be >= 1");
  }
}

// Ties at exactly (1 - eta)|S| must count as full despite rounding in 1 - eta.
bool at_least_fraction(std::size_t count, double fraction, std::size_t total) {
  return static_cast<double>(count) >=
         fraction * static_cast<double>(total) - 1e-9 * static_cast<double>(total);
}

std::vector<std::int64_t> add(const std::vector<std::int64_t>& a,
                              const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

}  // namespace

std::size_t box_translate_difference(const FolnerBox& F,
                                     const std::vector<std::int64_t>& g) {
  std::size_t inter = 1;
  for (std::size_t j = 0; j < F.sides.size(); ++j) {
    const std::int64_t overlap = F.sides[j] - std::abs(g[j]);
    if (overlap <= 0) return 2 * F.size();
    inter *= static_cast<std::size_t>(overlap);
  }
  return 2 * (F.size() - inter);
}

QuasiTiling quasi_tile(const FolnerBox& region, std::vector<FolnerBox> shapes, double eta) {
  check_box(region, "region");
  if (shapes.empty()) throw ValidationError("quasi_tile needs at least one shape");
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta must lie in (0, 1)");
  for (const auto& s : shapes) {
    check_box(s, "shape");
    if (s.dimension() != region.dimension()) {
      throw ValidationError("shape and region dimensions differ");
    }
  }
  QuasiTiling out;
  out.region = region;
  out.shapes = shapes;
  out.eta = eta;

  std::vector<std::size_t> order(shapes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return shapes[a].size() > shapes[b].size();
  });

  const std::size_t total = region.size();
  std::vector<bool> taken(total, false);
  std::vector<std::size_t> cells;
  std::vector<std::size_t> targets;
  for (std::size_t s : order) {
    const FolnerBox& shape = shapes[s];
    std::vector<std::vector<std::int64_t>> offsets;
    for (std::size_t o = 0; o < shape.size(); ++o) offsets.push_back(shape.point(o));
    // Whole translates first, then the (1 - eta)-full remnants.
    for (const bool whole : {true, false}) {
      for (std::size_t c = 0; c < total; ++c) {
        const auto center = region.point(c);
        cells.clear();
        targets.clear();
        for (std::size_t o = 0; o < offsets.size(); ++o) {
          const auto idx = region.index_of(add(offsets[o], center));
          if (idx && !taken[*idx]) {
            cells.push_back(o);
            targets.push_back(*idx);
          }
        }
        if (cells.empty()) continue;
        if (whole ? cells.size() != shape.size()
                  : !at_least_fraction(cells.size(), 1.0 - eta, shape.size())) {
          continue;
        }
        for (auto t : targets) taken[t] = true;
        out.covered += targets.size();
        out.tiles.push_back({s, center, cells});
      }
    }
  }
  out.coverage = static_cast<double>(out.covered) / static_cast<double>(total);
  out.under_covered = !at_least_fraction(out.covered, 1.0 - eta, total);

  for (const auto& shape : shapes) {
    for (std::size_t o = 0; o < shape.size(); ++o) {
      const double r = static_cast<double>(box_translate_difference(region, shape.point(o))) /
                       static_cast<double>(total);
      out.invariance = std::max(out.invariance, r);
    }
  }
  return out;
}

TilingCheck verify_tiling(const QuasiTiling& t) {
  TilingCheck out;
  std::vector<std::size_t> hits(t.region.size(), 0);
  for (const auto& tile : t.tiles) {
    const FolnerBox& shape = t.shapes.at(tile.shape);
    if (!t.region.index_of(tile.center)) out.inside = false;
    std::vector<std::size_t> sorted = tile.cells;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) out.disjoint = false;
    for (auto cell : tile.cells) {
      if (cell >= shape.size()) {
        out.inside = false;
        continue;
      }
      const auto idx = t.region.index_of(add(shape.point(cell), tile.center));
      if (!idx) {
        out.inside = false;
        continue;
      }
      if (++hits[*idx] > 1) out.disjoint = false;
    }
    if (!at_least_fraction(tile.cells.size(), 1.0 - t.eta, shape.size())) out.full = false;
  }
  out.union_size = static_cast<std::size_t>(
      std::count_if(hits.begin(), hits.end(), [](std::size_t h) { return h > 0; }));
  out.covering = at_least_fraction(out.union_size, 1.0 - t.eta, t.region.size());
  return out;
}

void write_tiling_csv(std::ostream& os, const QuasiTiling& t) {
  os << "tile,shape,cells";
  for (std::size_t j = 0; j < t.region.dimension(); ++j) os << ",center_" << j;
  os << '\n';
  for (std::size_t i = 0; i < t.tiles.size(); ++i) {
    const auto& tile = t.tiles[i];
    os << i << ',' << tile.shape << ',' << tile.cells.size();
    for (auto c : tile.center) os << ',' << c;
    os << '\n';
  }
}

std::string render_tiling(const QuasiTiling& t) {
  const std::size_t dim = t.region.dimension();
  if (dim > 2) throw ValidationError("only 1- and 2-dimensional tilings can be rendered");
  static const char* digits =
      "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::vector<char> grid(t.region.size(), '.');
  for (std::size_t i = 0; i < t.tiles.size(); ++i) {
    const auto& tile = t.tiles[i];
    const FolnerBox& shape = t.shapes[tile.shape];
    for (auto cell : tile.cells) {
      if (auto idx = t.region.index_of(add(shape.point(cell), tile.center))) {
        grid[*idx] = digits[i % 62];
      }
    }
  }
  const auto width = static_cast<std::size_t>(t.region.sides.back());
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.push_back(grid[i]);
    if ((i + 1) % width == 0) out.push_back('\n');
  }
  return out;
}

std::span<const double> TorusConfiguration::at(const std::vector<std::int64_t>& point) const {
  std::vector<std::int64_t> rel(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) rel[j] = point[j] - origin[j];
  const auto idx = window.index_of(rel);
  if (!idx) throw ValidationError("configuration is not known at the requested point");
  return std::span<const double>(values).subspan(*idx * n, n);
}

std::vector<TorusConfiguration> lattice_configurations(std::vector<std::int64_t> origin,
                                                       FolnerBox window, std::size_t n,
                                                       std::size_t L) {
  check_box(window, "window");
  const std::size_t s = window.size() * n;
  const double total = std::pow(static_cast<double>(L), static_cast<double>(s));
  if (L == 0 || total > 1e7) throw BudgetExceeded("lattice configuration sample too large");
  std::vector<TorusConfiguration> out;
  std::vector<std::size_t> digits(s, 0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(total); ++i) {
    TorusConfiguration c{origin, window, n, std::vector<double>(s)};
    for (std::size_t q = 0; q < s; ++q) {
      c.values[q] = static_cast<double>(digits[q]) / static_cast<double>(L);
    }
    out.push_back(std::move(c));
    for (std::size_t q = s; q-- > 0;) {
      if (++digits[q] < L) break;
      digits[q] = 0;
    }
  }
  return out;
}

std::vector<TorusConfiguration> random_configurations(std::vector<std::int64_t> origin,
                                                      FolnerBox window, std::size_t n,
                                                      std::size_t count, std::uint64_t seed) {
  check_box(window, "window");
  SplitMix64 rng(seed);
  std::vector<TorusConfiguration> out;
  const std::size_t s = window.size() * n;
  for (std::size_t i = 0; i < count; ++i) {
    TorusConfiguration c{origin, window, n, std::vector<double>(s)};
    for (auto& v : c.values) v = rng.uniform();
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// x(-g) for g in F, in lexicographic order of F, concatenated.
std::vector<double> orbit_coordinates(const TorusConfiguration& x, const FolnerBox& F) {
  std::vector<double> out;
  out.reserve(F.size() * x.n);
  for (std::size_t i = 0; i < F.size(); ++i) {
    auto g = F.point(i);
    for (auto& v : g) v = -v;
    const auto vals = x.at(g);
    out.insert(out.end(), vals.begin(), vals.end());
  }
  return out;
}

}  // namespace

double orbit_distance(MetricKind base, const FolnerBox& F, double p,
                      const TorusConfiguration& x, const TorusConfiguration& y) {
  if (x.n != y.n) throw ValidationError("configurations have different ranks");
  const PseudometricSpec metric{base, p};
  metric.validate();
  return product_distance(metric, x.n, orbit_coordinates(x, F), orbit_coordinates(y, F));
}

std::vector<OrbitCoveringRow> orbit_covering_estimate(
    const std::vector<TorusConfiguration>& sample, MetricKind base,
    const std::vector<FolnerBox>& sets, double p, const std::vector<double>& eps) {
  if (sample.empty()) throw ValidationError("orbit covering needs a nonempty sample");
  const PseudometricSpec metric{base, p};
  metric.validate();
  const std::size_t n = sample.front().n;
  std::vector<OrbitCoveringRow> out;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    std::vector<std::vector<double>> points;
    points.reserve(sample.size());
    for (const auto& x : sample) points.push_back(orbit_coordinates(x, sets[k]));
    for (double e : eps) {
      if (!(e > 0.0 && e < 1.0)) throw ValidationError("eps must lie in (0, 1)");
      const auto b = covering_number_bruteforce(points, metric, n, e);
      OrbitCoveringRow row;
      row.index = k;
      row.set_size = sets[k].size();
      row.p = p;
      row.eps = e;
      row.lower = b.lower;
      row.upper = b.upper;
      const double scale = static_cast<double>(row.set_size) * std::log(1.0 / e);
      row.lower_exponent = std::log(static_cast<double>(b.lower)) / scale;
      row.upper_exponent = std::log(static_cast<double>(b.upper)) / scale;
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace soficrank
