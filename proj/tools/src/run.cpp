#include "soficrank_cli/run.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "soficrank/budget.hpp"
#include "soficrank/errors.hpp"
#include "soficrank/exact_rank.hpp"
#include "soficrank/fourier.hpp"
#include "soficrank/mdim.hpp"
#include "soficrank/rank.hpp"
#include "soficrank/sofic_rep.hpp"
#include "soficrank/spectral.hpp"
#include "soficrank/tiling.hpp"

namespace soficrank::cli {

using Json = nlohmann::ordered_json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"vr",   "vnd",  "spectrum",        "moments",
                                              "mdim", "tile", "demo-additivity", "verify"};
  return names;
}

namespace {

// Shortest round-trip text; CSV and JSON agree digit for digit.
std::string num(double v) {
  if (v == kInfinity) return "inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json p_value(double p) { return p == kInfinity ? Json("inf") : Json(p); }

struct Artifacts {
  Json report;
  std::string csv;
  // Extra files: suffix -> contents.
  std::map<std::string, std::string> extra;
  std::string render;
};

[[noreturn]] void missing(const JobSpec& job, const std::string& field, const std::string& why) {
  throw JobError(job.path, 0, 0, field, "missing required field '" + field + "' " + why);
}

const ModulePresentation& need_presentation(const JobSpec& job, const std::string& cmd) {
  if (!job.presentation) missing(job, "presentation", "for " + cmd);
  return *job.presentation;
}

const GroupRingMatrix& need_matrix(const JobSpec& job, const std::string& cmd) {
  if (!job.matrix) missing(job, "matrix", "for " + cmd);
  return *job.matrix;
}

std::size_t relator_count(const JobSpec& job, const ModulePresentation& pres) {
  const auto k = job.estimator.relator_cutoff.value_or(pres.relators().size());
  if (k > pres.relators().size()) {
    throw JobError(job.path, 0, 0, "estimator.relator_cutoff",
                   "exceeds the " + std::to_string(pres.relators().size()) +
                       " relators of the presentation");
  }
  return k;
}

EstimatorOptions rank_options(const JobSpec& job) {
  EstimatorOptions o;
  o.schedule = job.estimator.schedule;
  o.method = job.estimator.method;
  o.threads = job.estimator.threads;
  return o;
}

Json header(const std::string& command, const JobSpec& job,
            const std::vector<SoficLevel>& levels) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["job"] = job.name;
  j["seed"] = job.seed;
  j["group"] = job.group->describe();
  Json ls = Json::array();
  for (const auto& l : levels) {
    ls.push_back({{"level", l.index()},
                  {"degree", l.degree()},
                  {"provenance", to_string(l.provenance())},
                  {"exact", l.exact()},
                  {"description", l.describe()}});
  }
  j["levels"] = ls;
  return j;
}

Json schedule_json(const EtaSchedule& s) {
  return {{"etas", s.etas}, {"tail", s.tail}};
}

void rank_json(Json& j, const RankEstimate& r) {
  j["target"] = r.target;
  j["block_cols"] = r.block_cols;
  j["method"] = r.method;
  j["schedule"] = schedule_json(r.schedule);
  j["estimate"] = r.estimate;
  j["envelope"] = {{"eta", r.schedule.etas.back()}, {"low", r.envelope_low},
                   {"high", r.envelope_high}};
  j["final_level_value"] = {{"level", r.table.empty() ? 0 : r.table.back().level},
                            {"eta", r.schedule.etas.back()},
                            {"value", r.final_level_value}};
  Json tails = Json::array();
  for (const auto& t : r.tails) {
    tails.push_back({{"eta", t.eta}, {"levels", t.levels}, {"min", t.min}, {"max", t.max},
                     {"mean", t.mean}});
  }
  j["tails"] = tails;
  Json table = Json::array();
  for (const auto& row : r.table) {
    table.push_back({{"level", row.level}, {"degree", row.degree}, {"eta", row.eta},
                     {"fraction", row.fraction}, {"method", row.method}});
  }
  j["table"] = table;
  j["diagnostics"] = r.diagnostics;
}

std::string rank_csv(const RankEstimate& r, const std::string& prefix = {}) {
  std::string out;
  for (const auto& row : r.table) {
    out += prefix + std::to_string(row.level) + "," + std::to_string(row.degree) + "," +
           num(row.eta) + "," + num(row.fraction) + "," + row.method + "\n";
  }
  return out;
}

Artifacts do_vr(const JobSpec& job) {
  const auto& pres = need_presentation(job, "vr");
  const auto levels = build_levels(job);
  const auto k = relator_count(job, pres);
  const auto r = vr_estimate(levels, pres, k, rank_options(job));
  Artifacts a;
  a.report = header("vr", job, levels);
  a.report["rank"] = pres.rank();
  a.report["relators"] = k;
  rank_json(a.report, r);
  Json prefix = Json::array();
  const auto& last = levels.back();
  for (std::size_t j = 0; j < r.prefix_fractions.size(); ++j) {
    prefix.push_back({{"relators", j}, {"level", last.index()}, {"degree", last.degree()},
                      {"eta", 0.0}, {"fraction", r.prefix_fractions[j]}});
  }
  a.report["prefix"] = prefix;
  a.report["prefix_monotone"] = r.prefix_monotone ? Json(*r.prefix_monotone) : Json();
  if (job.group->kind() == GroupKind::FreeAbelian && job.estimator.fourier_grid > 0) {
    a.report["fourier_oracle"] = {
        {"grid", job.estimator.fourier_grid},
        {"value", fourier_oracle_vr(pres.relator_matrix(k), job.estimator.fourier_grid)}};
  }
  a.csv = "level,degree,eta,fraction,method\n" + rank_csv(r);
  return a;
}

Artifacts do_vnd(const JobSpec& job) {
  const auto& f = need_matrix(job, "vnd");
  const auto levels = build_levels(job);
  const auto r = vnd_estimate(levels, f, rank_options(job));
  Artifacts a;
  a.report = header("vnd", job, levels);
  a.report["matrix"] = job.matrix_text;
  rank_json(a.report, r);
  if (job.group->kind() == GroupKind::FreeAbelian && job.estimator.fourier_grid > 0) {
    a.report["fourier_oracle"] = {
        {"grid", job.estimator.fourier_grid},
        {"value", fourier_kernel_measure(f, job.estimator.fourier_grid)}};
  }
  a.csv = "level,degree,eta,fraction,method\n" + rank_csv(r);
  return a;
}

// The operator studied by spectrum: the matrix, or the stacked relators.
GroupRingMatrix spectral_target(const JobSpec& job) {
  if (job.matrix) return *job.matrix;
  if (job.presentation) return job.presentation->relator_matrix(relator_count(job, *job.presentation));
  missing(job, "matrix", "(or presentation) for spectrum");
}

CountingFunction count_level(const SoficMatrix& a, const std::vector<double>& etas,
                             RankMethod method, std::optional<SpectralProfile>& profile) {
  const std::size_t rows = a.block_rows * a.degree, cols = a.block_cols * a.degree;
  const bool dense = method == RankMethod::Dense ||
                     (method != RankMethod::Sliced && fits_dense(rows, cols, a.degree));
  if (!dense) return sliced_counting_function(a, etas);
  profile = singular_profile(a);
  return counting_function(*profile, etas);
}

Artifacts do_spectrum(const JobSpec& job) {
  const auto f = spectral_target(job);
  const auto levels = build_levels(job);
  const auto& etas = job.estimator.schedule.etas;
  Artifacts a;
  a.report = header("spectrum", job, levels);
  a.report["block_rows"] = f.rows();
  a.report["block_cols"] = f.cols();
  a.report["eps"] = job.estimator.eps;
  Json profiles = Json::array(), counting = Json::array(), sandwich = Json::array();
  a.csv = "level,degree,eta,fraction,method\n";
  std::string sw = "level,degree,eta,eps,lower,upper\n";
  for (const auto& level : levels) {
    const auto m = represent(level, f);
    std::optional<SpectralProfile> profile;
    const auto counts = count_level(m, etas, job.estimator.method, profile);
    if (profile) {
      profiles.push_back({{"level", level.index()}, {"degree", level.degree()},
                          {"method", to_string(profile->method)},
                          {"largest", profile->largest()},
                          {"singular_values", profile->values}});
    }
    for (std::size_t e = 0; e < etas.size(); ++e) {
      counting.push_back({{"level", level.index()}, {"degree", level.degree()},
                          {"eta", etas[e]}, {"fraction", counts.values[e]},
                          {"method", to_string(counts.method)}});
      a.csv += std::to_string(level.index()) + "," + std::to_string(level.degree()) + "," +
               num(etas[e]) + "," + num(counts.values[e]) + "," + to_string(counts.method) + "\n";
    }
    for (const auto& row : covering_sandwich(counts, job.estimator.eps).rows) {
      sandwich.push_back({{"level", row.level}, {"degree", row.degree}, {"eta", row.eta},
                          {"eps", row.eps}, {"lower", row.lower}, {"upper", row.upper}});
      sw += std::to_string(row.level) + "," + std::to_string(row.degree) + "," + num(row.eta) +
            "," + num(row.eps) + "," + num(row.lower) + "," + num(row.upper) + "\n";
    }
  }
  a.report["profiles"] = profiles;
  a.report["counting"] = counting;
  a.report["sandwich"] = sandwich;
  a.extra["_sandwich.csv"] = sw;
  return a;
}

Artifacts do_moments(const JobSpec& job) {
  const auto f = spectral_target(job);
  const auto levels = build_levels(job);
  const auto& e = job.estimator;
  Artifacts a;
  a.report = header("moments", job, levels);
  a.report["kmax"] = e.kmax;
  a.report["noise"] = e.noise;
  Json reports = Json::array();
  a.csv = "level,degree,k,empirical,exact,difference,wraparound,perturbed,drift\n";
  for (const auto& level : levels) {
    const auto r = e.noise > 0.0
                       ? perturbation_moment_check(level, f, e.noise, e.kmax, job.seed)
                       : moment_check(level, f, e.kmax);
    Json rows = Json::array();
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      Json jr{{"level", r.level_index}, {"degree", r.degree}, {"k", row.k},
              {"empirical", row.empirical}, {"exact", row.exact},
              {"difference", row.difference}, {"wraparound", row.wraparound},
              {"support_radius", row.support_radius}};
      std::string pert = ",";
      if (!r.perturbed.empty()) {
        jr["perturbed"] = r.perturbed[i];
        jr["drift"] = r.drift[i];
        pert = num(r.perturbed[i]) + "," + num(r.drift[i]);
      }
      rows.push_back(jr);
      a.csv += std::to_string(r.level_index) + "," + std::to_string(r.degree) + "," +
               std::to_string(row.k) + "," + num(row.empirical) + "," + num(row.exact) + "," +
               num(row.difference) + "," + (row.wraparound ? "true" : "false") + "," + pert +
               "\n";
    }
    Json jr{{"level", r.level_index}, {"degree", r.degree}, {"rows", rows}};
    if (e.noise > 0.0) {
      jr["noise_scale"] = r.noise_scale;
      jr["achieved_noise"] = r.achieved_noise;
      jr["operator_norm"] = r.operator_norm;
      jr["first_moment_bound"] = r.first_moment_bound ? Json(*r.first_moment_bound) : Json();
    }
    reports.push_back(jr);
  }
  a.report["reports"] = reports;
  return a;
}

Json opt(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(); }
Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(); }
std::string opt_csv(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

Artifacts do_mdim(const JobSpec& job) {
  const auto& pres = need_presentation(job, "mdim");
  const auto levels = build_levels(job);
  const auto& e = job.estimator;
  MdimOptions o;
  o.eps = e.eps;
  o.delta = e.delta;
  o.relators = relator_count(job, pres);
  o.metric = e.metric;
  o.relation_set = e.relation_set;
  o.power_bound = e.m;
  o.brute_force = e.brute_force;
  o.brute_max_degree = e.brute_max_degree;
  o.threads = e.threads;
  const auto r = mdim_estimate(levels, pres, o);
  Artifacts a;
  a.report = header("mdim", job, levels);
  a.report["target"] = r.target;
  a.report["block_cols"] = r.block_cols;
  a.report["relators"] = r.relators;
  a.report["delta"] = r.delta;
  a.report["eta"] = r.eta;
  a.report["metric"] = {{"kind", to_string(r.metric.kind)}, {"p", p_value(r.metric.p)}};
  a.report["m"] = e.m;
  Json rows = Json::array();
  a.csv = "level,degree,eps,near_kernel_dim,lower,upper,brute_status,brute_exponent,"
          "brute_lower_exponent\n";
  for (const auto& row : r.rows) {
    rows.push_back({{"level", row.level}, {"degree", row.degree}, {"eps", row.eps},
                    {"near_kernel_dim", row.near_kernel_dim}, {"lower", row.lower},
                    {"upper", row.upper}, {"brute_status", row.brute_status},
                    {"brute_points", opt(row.brute_points)},
                    {"brute_upper_count", opt(row.brute_upper_count)},
                    {"brute_lower_count", opt(row.brute_lower_count)},
                    {"brute_exponent", opt(row.brute_exponent)},
                    {"brute_lower_exponent", opt(row.brute_lower_exponent)}});
    a.csv += std::to_string(row.level) + "," + std::to_string(row.degree) + "," + num(row.eps) +
             "," + std::to_string(row.near_kernel_dim) + "," + num(row.lower) + "," +
             num(row.upper) + "," + row.brute_status + "," + opt_csv(row.brute_exponent) + "," +
             opt_csv(row.brute_lower_exponent) + "\n";
  }
  a.report["rows"] = rows;
  Json summary = Json::array();
  for (const auto& s : r.summary) {
    summary.push_back({{"level", levels.back().index()}, {"eps", s.eps}, {"lower", s.lower},
                       {"upper", s.upper}, {"width", s.width()}});
  }
  a.report["summary"] = summary;
  a.report["warnings"] = r.warnings;
  return a;
}

Artifacts do_tile(const JobSpec& job) {
  if (!job.tile) missing(job, "tile", "for tile");
  const auto& spec = *job.tile;
  const auto t = quasi_tile(spec.region, spec.shapes, spec.eta);
  const auto check = verify_tiling(t);
  Artifacts a;
  a.report["schema"] = kSchemaVersion;
  a.report["command"] = "tile";
  a.report["job"] = job.name;
  a.report["seed"] = job.seed;
  a.report["region"] = spec.region.sides;
  Json shapes = Json::array();
  for (const auto& s : spec.shapes) shapes.push_back(s.sides);
  a.report["shapes"] = shapes;
  a.report["eta"] = spec.eta;
  a.report["tiles"] = t.tiles.size();
  a.report["covered"] = t.covered;
  a.report["coverage"] = t.coverage;
  a.report["under_covered"] = t.under_covered;
  a.report["invariance"] = t.invariance;
  a.report["checks"] = {{"disjoint", check.disjoint}, {"inside", check.inside},
                        {"full", check.full},         {"covering", check.covering},
                        {"union_size", check.union_size}, {"all", check.all()}};
  std::ostringstream csv;
  write_tiling_csv(csv, t);
  a.csv = csv.str();
  if (spec.region.dimension() <= 2) a.render = render_tiling(t);
  if (spec.orbit) {
    const auto& o = *spec.orbit;
    const auto sample = o.sample == "lattice"
                            ? lattice_configurations(o.origin, o.window, o.n, o.lattice)
                            : random_configurations(o.origin, o.window, o.n, o.count, job.seed);
    Json rows = Json::array();
    std::string oc = "set,set_size,p,eps,lower,upper,lower_exponent,upper_exponent\n";
    for (double p : o.p) {
      for (const auto& row : orbit_covering_estimate(sample, o.metric, o.sets, p, o.eps)) {
        rows.push_back({{"set", row.index}, {"set_size", row.set_size}, {"p", p_value(row.p)},
                        {"eps", row.eps}, {"lower", row.lower}, {"upper", row.upper},
                        {"lower_exponent", row.lower_exponent},
                        {"upper_exponent", row.upper_exponent}});
        oc += std::to_string(row.index) + "," + std::to_string(row.set_size) + "," +
              num(row.p) + "," + num(row.eps) + "," + std::to_string(row.lower) + "," +
              std::to_string(row.upper) + "," + num(row.lower_exponent) + "," +
              num(row.upper_exponent) + "\n";
      }
    }
    a.report["orbit"] = {{"sample", o.sample}, {"points", sample.size()}, {"n", o.n},
                         {"metric", to_string(o.metric)}, {"rows", rows}};
    a.extra["_orbit.csv"] = oc;
  }
  return a;
}

Artifacts do_additivity(const JobSpec& job) {
  const auto levels = build_levels(job);
  const auto r = additivity_failure_demo(levels, rank_options(job));
  Artifacts a;
  a.report = header("demo-additivity", job, levels);
  a.report["n"] = r.n;
  a.csv = "module,level,degree,eta,fraction,method\n";
  const std::pair<const char*, const RankEstimate*> parts[] = {
      {"middle", &r.middle}, {"sub", &r.sub}, {"quotient", &r.quotient}};
  const double values[] = {r.middle_value, r.sub_value, r.quotient_value};
  for (std::size_t i = 0; i < 3; ++i) {
    Json j;
    j["value"] = values[i];
    rank_json(j, *parts[i].second);
    a.report[parts[i].first] = j;
    a.csv += rank_csv(*parts[i].second, std::string(parts[i].first) + ",");
  }
  a.report["additivity_holds"] = r.additivity_holds;
  return a;
}

Artifacts execute(const std::string& command, const JobSpec& job) {
  if (command == "vr") return do_vr(job);
  if (command == "vnd") return do_vnd(job);
  if (command == "spectrum") return do_spectrum(job);
  if (command == "moments") return do_moments(job);
  if (command == "mdim") return do_mdim(job);
  if (command == "tile") return do_tile(job);
  if (command == "demo-additivity") return do_additivity(job);
  throw ValidationError("unknown subcommand '" + command + "'");
}

double mib(std::size_t bytes) { return static_cast<double>(bytes) / (1024.0 * 1024.0); }

std::string fixed(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << v;
  return os.str();
}

int do_verify(const JobSpec& job, std::ostream& out) {
  std::vector<SoficLevel> levels;
  if (job.levels) levels = build_levels(job);
  std::optional<std::pair<std::size_t, std::size_t>> blocks;
  if (job.matrix) {
    blocks = {job.matrix->rows(), job.matrix->cols()};
  } else if (job.presentation) {
    blocks = {relator_count(job, *job.presentation), job.presentation->rank()};
  }
  std::vector<std::string> warnings;
  std::size_t best_rows = 0, best_cols = 0, best_level = 0;
  if (blocks) {
    for (const auto& level : levels) {
      const std::size_t d = level.degree();
      const std::size_t rows = blocks->first * d, cols = blocks->second * d;
      if (rows * cols >= best_rows * best_cols) {
        best_rows = rows;
        best_cols = cols;
        best_level = level.index();
      }
      const auto m = job.estimator.method;
      if (m == RankMethod::Exact && d > kExactRankDegreeLimit) {
        warnings.push_back("level " + std::to_string(level.index()) + " (degree " +
                           std::to_string(d) + ") exceeds the exact-rank degree guard (" +
                           std::to_string(kExactRankDegreeLimit) + ")");
      }
      if (m != RankMethod::Sliced && m != RankMethod::Exact && !fits_dense(rows, cols, d)) {
        warnings.push_back("level " + std::to_string(level.index()) + " (degree " +
                           std::to_string(d) + ") needs a dense " + std::to_string(rows) +
                           " x " + std::to_string(cols) + " matrix (" +
                           fixed(mib(dense_bytes(rows, cols))) +
                           " MiB) beyond the dense budget guard SOFICRANK_BUDGET_MB=" +
                           std::to_string(dense_budget_bytes() / (1024 * 1024)) +
                           "; set estimator.method: sliced");
      }
    }
  }
  if (job.tile) {
    std::size_t cells = job.tile->region.size();
    if (cells > 50'000'000) warnings.push_back("tile region has " + std::to_string(cells) + " cells");
  }
  out << "ok\n";
  out << "job: " << job.name << "\n";
  out << "group: " << job.group->describe() << "\n";
  if (!levels.empty()) {
    out << "levels: " << levels.size() << " (degrees " << levels.front().degree() << ".."
        << levels.back().degree() << ")\n";
  }
  if (blocks && !levels.empty()) {
    out << "predicted max dense matrix: " << best_rows << " x " << best_cols << " ("
        << fixed(mib(dense_bytes(best_rows, best_cols))) << " MiB) at level " << best_level
        << "\n";
  }
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  return 0;
}

void write_file(const std::filesystem::path& p, const std::string& contents) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << contents;
  if (!f) throw Error("cannot write " + p.string());
}

std::string stem_of(const std::string& name) {
  return std::filesystem::path(name).replace_extension().string();
}

}  // namespace

std::string render_report(const std::string& command, const JobSpec& job) {
  return execute(command, job).report.dump(2) + "\n";
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    auto job = load_job(options.job_path);
    if (options.threads > 0) job.estimator.threads = options.threads;
    if (options.command == "verify") return do_verify(job, out);
    const auto a = execute(options.command, job);
    const std::filesystem::path dir(options.out_dir);
    std::filesystem::create_directories(dir);
    const std::string base = job.name + "_" + options.command;
    const auto json_name = job.output.json.empty() ? base + ".json" : job.output.json;
    const auto csv_name = job.output.csv.empty() ? base + ".csv" : job.output.csv;
    const auto json_text = a.report.dump(2) + "\n";
    write_file(dir / json_name, json_text);
    write_file(dir / csv_name, a.csv);
    out << "wrote " << (dir / json_name).string() << "\n";
    out << "wrote " << (dir / csv_name).string() << "\n";
    for (const auto& [suffix, contents] : a.extra) {
      const auto p = dir / (stem_of(csv_name) + suffix);
      write_file(p, contents);
      out << "wrote " << p.string() << "\n";
    }
    if (!a.render.empty()) {
      const auto p = dir / (job.output.render.empty() ? base + ".txt" : job.output.render);
      write_file(p, a.render);
      out << "wrote " << p.string() << "\n";
    }
    return 0;
  } catch (const JobError& e) {
    err << "error: " << e.what() << "\n";
    if (!e.detail().empty()) err << e.detail() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << options.job_path << ": " << e.what() << "\n" << e.caret() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << options.job_path << ": " << e.what() << "\n";
    return 2;
  } catch (const YAML::Exception& e) {
    err << "error: " << options.job_path << ": " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: budget guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace soficrank::cli
