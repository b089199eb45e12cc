#pragma once

// Job files: one YAML document describing a group, its sofic levels, the
// element or presentation to study and the estimator parameters. See
// README.md for the schema.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soficrank/covering.hpp"
#include "soficrank/group_ring.hpp"
#include "soficrank/mdim.hpp"
#include "soficrank/rank.hpp"
#include "soficrank/sofic_level.hpp"
#include "soficrank/tiling.hpp"

namespace soficrank::cli {

/// Schema or content error located in the job file.
class JobError : public ValidationError {
 public:
  JobError(const std::string& file, int line, int column, std::string field,
           const std::string& message, std::string detail = {});

  const std::string& field() const noexcept { return field_; }
  /// Extra lines (a caret rendering for element syntax errors).
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

struct LevelSpec {
  std::string kind = "quotient";  // quotient | folner | tables | regular
  std::vector<std::int64_t> sizes;
  FreeCatalog catalog = FreeCatalog::TransitiveRandom;
  std::vector<std::vector<Permutation>> tables;
};

struct EstimatorSpec {
  EtaSchedule schedule = EtaSchedule::standard();
  RankMethod method = RankMethod::Auto;
  std::optional<std::size_t> relator_cutoff;
  std::size_t kmax = 4;
  double noise = 0.0;
  std::vector<double> eps{0.125, 0.015625, 0x1p-10, 0x1p-20};
  PseudometricSpec metric{MetricKind::Delta, 2.0};
  double delta = 1e-6;
  std::size_t m = 1;
  std::vector<GroupElement> relation_set;
  bool brute_force = true;
  std::size_t brute_max_degree = 12;
  std::size_t fourier_grid = 0;
  std::size_t threads = 1;
};

struct OrbitSpec {
  std::vector<std::int64_t> origin;
  FolnerBox window;
  std::size_t n = 1;
  std::string sample = "random";  // random | lattice
  std::size_t count = 500;
  std::size_t lattice = 4;
  std::vector<FolnerBox> sets;
  std::vector<double> p{1.0, 2.0, kInfinity};
  std::vector<double> eps{0.25, 0.125};
  MetricKind metric = MetricKind::Delta;
};

struct TileSpec {
  FolnerBox region;
  std::vector<FolnerBox> shapes;
  double eta = 0.1;
  std::optional<OrbitSpec> orbit;
};

struct OutputSpec {
  std::string json;
  std::string csv;
  std::string render;
};

struct JobSpec {
  std::string path;
  std::string name;
  std::optional<std::string> command;
  std::uint64_t seed = 1;
  GroupPtr group;
  std::optional<LevelSpec> levels;
  std::optional<GroupRingMatrix> matrix;
  std::vector<std::string> matrix_text;
  std::optional<ModulePresentation> presentation;
  std::vector<std::vector<std::string>> relator_text;
  EstimatorSpec estimator;
  std::optional<TileSpec> tile;
  OutputSpec output;
};

/// Reads and validates a job file. Throws JobError.
JobSpec load_job(const std::string& path);
JobSpec parse_job(const std::string& text, const std::string& path);

/// The sofic levels described by the job; the group must be set.
std::vector<SoficLevel> build_levels(const JobSpec& job);

std::string to_string(GroupKind k);

}  // namespace soficrank::cli
