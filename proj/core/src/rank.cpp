#include "soficrank/rank.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "soficrank/budget.hpp"
#include "soficrank/errors.hpp"
#include "soficrank/exact_rank.hpp"
#include "soficrank/fourier.hpp"
#include "soficrank/parallel.hpp"
#include "soficrank/sofic_rep.hpp"

namespace soficrank {

EtaSchedule EtaSchedule::standard() {
  EtaSchedule s;
  for (int j = 1; j <= 20; ++j) s.etas.push_back(std::ldexp(1.0, -j));
  s.etas.push_back(0.0);
  return s;
}

void EtaSchedule::validate() const {
  if (etas.empty()) throw ValidationError("eta schedule is empty");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(etas[i] >= 0.0) || !std::isfinite(etas[i])) {
      throw ValidationError("eta values must be finite and nonnegative");
    }
    if (i > 0 && etas[i] >= etas[i - 1]) {
      throw ValidationError("eta schedule must be strictly decreasing");
    }
  }
  if (tail == 0) throw ValidationError("tail length must be at least 1");
}

std::string to_string(RankMethod m) {
  switch (m) {
    case RankMethod::Auto: return "auto";
    case RankMethod::Dense: return "dense";
    case RankMethod::Sliced: return "sliced";
    case RankMethod::Exact: return "exact";
  }
  return "auto";
}

namespace {

std::vector<RankRow> level_rows(const SoficLevel& level, const GroupRingMatrix& f,
                                 const std::vector<double>& etas, RankMethod method) {
  const SoficMatrix a = represent(level, f);
  // The exact path handles eta = 0 itself; spectra are only needed for the rest.
  std::vector<double> spectral;
  for (double e : etas) {
    if (method != RankMethod::Exact || e != 0.0) spectral.push_back(e);
  }
  CountingFunction counts;
  if (!spectral.empty()) {
    const std::size_t side = std::max(a.entries.rows(), a.entries.cols());
    const bool dense = method == RankMethod::Dense ||
                       (method != RankMethod::Sliced && fits_dense(side, side, a.degree));
    counts = dense ? counting_function(singular_profile(a), spectral)
                   : sliced_counting_function(a, spectral);
  }
  std::vector<RankRow> rows;
  std::size_t next = 0;
  for (double eta : etas) {
    RankRow r;
    r.level = level.index();
    r.degree = level.degree();
    r.eta = eta;
    if (method == RankMethod::Exact && eta == 0.0) {
      r.fraction = exact_kernel_fraction(a);
      r.method = "exact-rank";
    } else {
      r.fraction = counts.values[next++];
      r.method = to_string(counts.method);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

RankEstimate assemble(std::string target, std::size_t block_cols,
                      const std::vector<SoficLevel>& levels,
                      std::vector<std::vector<RankRow>> per_level,
                      const EstimatorOptions& options) {
  const auto& etas = options.schedule.etas;
  const std::size_t count = levels.size();
  RankEstimate out;
  out.target = std::move(target);
  out.block_cols = block_cols;
  out.schedule = options.schedule;
  out.method = to_string(options.method);
  for (std::size_t l = 0; l < count; ++l) {
    for (auto& r : per_level[l]) out.table.push_back(r);
  }

  const std::size_t tail = std::min(options.schedule.tail, count);
  out.estimate = static_cast<double>(block_cols);
  for (std::size_t j = 0; j < etas.size(); ++j) {
    TailStat t;
    t.eta = etas[j];
    t.levels = tail;
    t.min = static_cast<double>(block_cols);
    t.max = 0.0;
    double sum = 0.0;
    for (std::size_t l = count - tail; l < count; ++l) {
      const double v = per_level[l][j].fraction;
      t.min = std::min(t.min, v);
      t.max = std::max(t.max, v);
      sum += v;
    }
    t.mean = sum / static_cast<double>(tail);
    out.estimate = std::min(out.estimate, t.mean);
    out.tails.push_back(t);
  }

  const std::size_t last = etas.size() - 1;
  const std::size_t half = std::max((count + 1) / 2, tail);
  out.envelope_low = static_cast<double>(block_cols);
  out.envelope_high = 0.0;
  for (std::size_t l = count - half; l < count; ++l) {
    out.envelope_low = std::min(out.envelope_low, per_level[l][last].fraction);
    out.envelope_high = std::max(out.envelope_high, per_level[l][last].fraction);
  }
  out.final_level_value = per_level[count - 1][last].fraction;
  // The minimizing tail mean can come from an earlier eta than the envelope.
  out.envelope_low = std::min(out.envelope_low, out.estimate);
  out.envelope_high = std::max(out.envelope_high, out.estimate);

  for (std::size_t l = 1; l < count; ++l) {
    if (per_level[l][last].fraction > per_level[l - 1][last].fraction + 1e-12) {
      std::ostringstream os;
      os << "kernel fraction at eta=" << etas[last] << " increases from level "
         << levels[l - 1].index() << " to level " << levels[l].index();
      out.diagnostics.push_back(os.str());
    }
  }
  const auto& tl = out.tails[last];
  if (tl.max - tl.min > 0.05) {
    std::ostringstream os;
    os << "tail oscillates at the final eta: min " << tl.min << ", max " << tl.max;
    out.diagnostics.push_back(os.str());
  }
  return out;
}

void check_levels(const std::vector<SoficLevel>& levels, const GroupPtr& group) {
  if (levels.size() < 2) {
    throw ValidationError("an estimate needs at least 2 levels (got " +
                          std::to_string(levels.size()) + ")");
  }
  for (const auto& l : levels) {
    if (!same_group(l.group(), group)) {
      throw GroupMismatch("level group differs from the matrix group");
    }
  }
}

}  // namespace

RankEstimate vnd_estimate(const std::vector<SoficLevel>& levels,
                          const GroupRingMatrix& f, const EstimatorOptions& options) {
  options.schedule.validate();
  check_levels(levels, f.group());
  auto per_level = parallel_map<std::vector<RankRow>>(
      levels.size(), options.threads, [&](std::size_t l) {
        return level_rows(levels[l], f, options.schedule.etas, options.method);
      });
  return assemble("dim ker rho(" + f.str() + ")", f.cols(), levels,
                  std::move(per_level), options);
}

RankEstimate vr_estimate(const std::vector<SoficLevel>& levels,
                         const ModulePresentation& pres, std::size_t k,
                         const EstimatorOptions& options) {
  options.schedule.validate();
  const GroupRingMatrix f = pres.relator_matrix(k);
  check_levels(levels, pres.group());
  auto per_level = parallel_map<std::vector<RankRow>>(
      levels.size(), options.threads, [&](std::size_t l) {
        return level_rows(levels[l], f, options.schedule.etas, options.method);
      });
  std::ostringstream target;
  target << "vr(Z(" << pres.group()->describe() << ")^" << pres.rank();
  if (k > 0) target << " / <" << k << " relators>";
  target << ")";
  RankEstimate out = assemble(target.str(), pres.rank(), levels,
                              std::move(per_level), options);

  // Kernel fraction at the last level and final eta, per relator prefix.
  const std::vector<double> last_eta{options.schedule.etas.back()};
  auto prefixes = parallel_map<double>(k + 1, options.threads, [&](std::size_t j) {
    return level_rows(levels.back(), pres.relator_matrix(j), last_eta,
                      options.method)[0].fraction;
  });
  out.prefix_fractions = prefixes;
  bool monotone = true;
  for (std::size_t j = 1; j < prefixes.size(); ++j) {
    monotone = monotone && prefixes[j] <= prefixes[j - 1] + 1e-12;
  }
  out.prefix_monotone = monotone;
  if (!monotone) out.diagnostics.push_back("kernel fraction increases with a relator");
  return out;
}

double sandwich_factor(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("covering scale eps must lie in (0, 1)");
  }
  return std::log((3.0 + 3.0 * eps) / eps) / std::log(1.0 / eps);
}

CoveringSandwich covering_sandwich(const CountingFunction& counts,
                                   std::span<const double> eps) {
  CoveringSandwich out;
  for (double e : eps) {
    const double factor = sandwich_factor(e);
    for (std::size_t j = 0; j < counts.etas.size(); ++j) {
      SandwichRow r;
      r.level = counts.level_index;
      r.degree = counts.degree;
      r.eta = counts.etas[j];
      r.eps = e;
      r.lower = counts.values[j];
      r.upper = counts.values[j] * factor;
      out.rows.push_back(r);
    }
  }
  return out;
}

double fourier_oracle_vr(const GroupRingMatrix& f, std::size_t grid) {
  return fourier_kernel_measure(f, grid);
}

}  // namespace soficrank
