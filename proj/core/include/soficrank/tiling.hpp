#pragma once

// Greedy Ornstein-Weiss quasi-tilings of boxes in Z^d and covering numbers
// under orbit pseudometrics rho_{F,p}.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "soficrank/covering.hpp"
#include "soficrank/sofic_level.hpp"

namespace soficrank {

struct Tile {
  std::size_t shape = 0;
  std::vector<std::int64_t> center;
  /// F_{i,j}: offsets within the shape box (lexicographic indices).
  std::vector<std::size_t> cells;
};

struct QuasiTiling {
  FolnerBox region;
  std::vector<FolnerBox> shapes;
  double eta = 0.0;
  std::vector<Tile> tiles;
  std::size_t covered = 0;
  double coverage = 0.0;
  bool under_covered = false;
  /// max over g in the shapes of |(g + F) sym.diff. F| / |F|.
  double invariance = 0.0;
};

/// Largest shapes first, candidate centers in lexicographic order over the
/// region. Each shape gets two scans: the first places only translates that
/// are entirely inside and free, the second any tile with at least
/// (1 - eta)|shape| free cells inside the region.
QuasiTiling quasi_tile(const FolnerBox& region, std::vector<FolnerBox> shapes, double eta);

struct TilingCheck {
  bool disjoint = true;
  bool inside = true;
  bool full = true;        // |F_{i,j}| >= (1 - eta)|F_{n_j}|
  bool covering = true;    // |union| >= (1 - eta)|F|
  std::size_t union_size = 0;
  bool all() const { return disjoint && inside && full && covering; }
};

/// Re-derives the four inequalities by enumerating every cell.
TilingCheck verify_tiling(const QuasiTiling& t);

/// |(g + F) sym.diff. F| for a box F and translation g.
std::size_t box_translate_difference(const FolnerBox& F, const std::vector<std::int64_t>& g);

/// Columns: tile, shape, cells, center_0..center_{d-1}.
void write_tiling_csv(std::ostream& os, const QuasiTiling& t);
/// One character per cell (tile number in base 62, '.' when uncovered);
/// 1- and 2-dimensional regions only.
std::string render_tiling(const QuasiTiling& t);

/// A configuration Z^d -> T^n known on origin + box.
struct TorusConfiguration {
  std::vector<std::int64_t> origin;
  FolnerBox window;
  std::size_t n = 1;
  /// Site-major: value of coordinate l at window point w is values[w * n + l].
  std::vector<double> values;

  /// x(point); throws ValidationError outside the window.
  std::span<const double> at(const std::vector<std::int64_t>& point) const;
};

/// Every configuration with values in {0, 1/L, ..., (L-1)/L} on the window.
std::vector<TorusConfiguration> lattice_configurations(std::vector<std::int64_t> origin,
                                                       FolnerBox window, std::size_t n,
                                                       std::size_t L);
/// `count` configurations with uniform values from a fixed seed.
std::vector<TorusConfiguration> random_configurations(std::vector<std::int64_t> origin,
                                                      FolnerBox window, std::size_t n,
                                                      std::size_t count, std::uint64_t seed);

/// rho_{F,p}(x, y) = ((1/|F|) sum_{g in F} rho(gx, gy)^p)^(1/p) with
/// (gx)(e) = x(-g) and rho the site metric at e.
double orbit_distance(MetricKind base, const FolnerBox& F, double p,
                      const TorusConfiguration& x, const TorusConfiguration& y);

struct OrbitCoveringRow {
  std::size_t index = 0;  // position in the F list
  std::size_t set_size = 0;
  double p = 0.0;
  double eps = 0.0;
  std::size_t lower = 0;
  std::size_t upper = 0;
  double lower_exponent = 0.0;
  double upper_exponent = 0.0;
};

std::vector<OrbitCoveringRow> orbit_covering_estimate(
    const std::vector<TorusConfiguration>& sample, MetricKind base,
    const std::vector<FolnerBox>& sets, double p, const std::vector<double>& eps);

}  // namespace soficrank
