#include "soficrank_cli/job.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "soficrank/errors.hpp"
#include "soficrank/parse.hpp"

namespace soficrank::cli {

namespace {

std::string locate(const std::string& file, int line, int column) {
  if (line <= 0) return file;
  return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

}  // namespace

JobError::JobError(const std::string& file, int line, int column, std::string field,
                   const std::string& message, std::string detail)
    : ValidationError(locate(file, line, column) + ": " +
                      (field.empty() ? message : field + ": " + message)),
      field_(std::move(field)),
      detail_(std::move(detail)) {}

std::string to_string(GroupKind k) {
  switch (k) {
    case GroupKind::FreeAbelian: return "free-abelian";
    case GroupKind::Free: return "free";
    case GroupKind::Finite: return "finite";
    case GroupKind::DirectProduct: return "product";
  }
  return {};
}

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

class Reader {
 public:
  explicit Reader(std::string file) : file_(std::move(file)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& field,
                         const std::string& message, std::string detail = {},
                         int column_shift = 0) const {
    const auto mark = at.Mark();
    const bool known = mark.line >= 0 && mark.pos >= 0;
    throw JobError(file_, known ? mark.line + 1 : 0, known ? mark.column + 1 + column_shift : 0,
                   field, message, std::move(detail));
  }

  void allow(const YAML::Node& map, const std::string& path,
             std::initializer_list<const char*> keys) const {
    if (!map.IsMap()) fail(map, path, "expected a mapping");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, join(path, key), "unknown field");
    }
  }

  YAML::Node require(const YAML::Node& map, const std::string& path, const char* key) const {
    const auto node = map[key];
    if (!node) fail(map, join(path, key), "missing required field '" + join(path, key) + "'");
    return node;
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& path, const char* what) const {
    if (!node.IsScalar()) fail(node, path, std::string("expected ") + what);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, path, std::string("expected ") + what + ", got '" + node.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& node, const std::string& path) const {
    return scalar<std::string>(node, path, "a string");
  }

  double real(const YAML::Node& node, const std::string& path) const {
    if (node.IsScalar()) {
      const auto& s = node.Scalar();
      if (s == "inf" || s == "infinity" || s == ".inf") return kInfinity;
    }
    const double v = scalar<double>(node, path, "a number");
    if (!std::isfinite(v)) fail(node, path, "expected a finite number");
    return v;
  }

  std::int64_t integer(const YAML::Node& node, const std::string& path) const {
    return scalar<std::int64_t>(node, path, "an integer");
  }

  std::size_t count(const YAML::Node& node, const std::string& path, std::size_t lo,
                    std::size_t hi) const {
    const auto v = integer(node, path);
    if (v < static_cast<std::int64_t>(lo) || static_cast<std::uint64_t>(v) > hi) {
      fail(node, path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<std::size_t>(v);
  }

  bool boolean(const YAML::Node& node, const std::string& path) const {
    return scalar<bool>(node, path, "true or false");
  }

  YAML::Node sequence(const YAML::Node& node, const std::string& path, bool nonempty = true) const {
    if (!node.IsSequence()) fail(node, path, "expected a list");
    if (nonempty && node.size() == 0) fail(node, path, "list must not be empty");
    return node;
  }

  std::vector<std::int64_t> integers(const YAML::Node& node, const std::string& path) const {
    std::vector<std::int64_t> out;
    const auto seq = sequence(node, path);
    for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(integer(seq[i], index(path, i)));
    return out;
  }

  std::vector<double> reals(const YAML::Node& node, const std::string& path) const {
    std::vector<double> out;
    if (node.IsScalar()) return {real(node, path)};
    const auto seq = sequence(node, path);
    for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(real(seq[i], index(path, i)));
    return out;
  }

  std::vector<std::string> strings(const YAML::Node& node, const std::string& path) const {
    std::vector<std::string> out;
    const auto seq = sequence(node, path);
    for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(text(seq[i], index(path, i)));
    return out;
  }

  FolnerBox box(const YAML::Node& node, const std::string& path) const {
    FolnerBox b{integers(node, path)};
    for (auto s : b.sides) {
      if (s < 1) fail(node, path, "box sides must be >= 1");
    }
    return b;
  }

  GroupRingElement element(const GroupPtr& g, const YAML::Node& node,
                           const std::string& path) const {
    const auto s = text(node, path);
    try {
      return parse_element(g, s);
    } catch (const ParseError& e) {
      const int quoted = node.Tag() == "!" ? 1 : 0;
      fail(node, path, "cannot parse element: " + e.reason(), e.caret(),
           static_cast<int>(e.position()) + quoted);
    }
  }

  GroupPtr group(const YAML::Node& node, const std::string& path) const {
    allow(node, path, {"kind", "rank", "labels", "table", "factors"});
    const auto kind_node = require(node, path, "kind");
    const auto kind = text(kind_node, join(path, "kind"));
    std::vector<std::string> labels;
    if (node["labels"]) labels = strings(node["labels"], join(path, "labels"));
    try {
      if (kind == "free-abelian" || kind == "free") {
        const auto rank_node = require(node, path, "rank");
        const auto rank = static_cast<int>(count(rank_node, join(path, "rank"), 1, 64));
        return kind == "free" ? GroupSpec::free(rank, labels)
                              : GroupSpec::free_abelian(rank, labels);
      }
      if (kind == "finite") {
        const auto tnode = sequence(require(node, path, "table"), join(path, "table"));
        std::vector<std::vector<int>> table;
        for (std::size_t i = 0; i < tnode.size(); ++i) {
          std::vector<int> row;
          for (auto v : integers(tnode[i], index(join(path, "table"), i))) {
            row.push_back(static_cast<int>(v));
          }
          table.push_back(std::move(row));
        }
        return GroupSpec::finite(std::move(table), labels);
      }
      if (kind == "product") {
        const auto fnode = sequence(require(node, path, "factors"), join(path, "factors"));
        std::vector<GroupPtr> factors;
        for (std::size_t i = 0; i < fnode.size(); ++i) {
          factors.push_back(group(fnode[i], index(join(path, "factors"), i)));
        }
        return GroupSpec::direct_product(std::move(factors));
      }
    } catch (const JobError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(node, path, e.what());
    }
    fail(kind_node, join(path, "kind"),
         "unknown group kind '" + kind + "' (free-abelian, free, finite, product)");
  }

  LevelSpec levels(const YAML::Node& node, const std::string& path) const {
    allow(node, path, {"kind", "sizes", "catalog", "tables"});
    LevelSpec out;
    if (node["kind"]) out.kind = text(node["kind"], join(path, "kind"));
    if (out.kind == "quotient" || out.kind == "folner") {
      const auto sizes = require(node, path, "sizes");
      out.sizes = integers(sizes, join(path, "sizes"));
      for (auto s : out.sizes) {
        if (s < 1) fail(sizes, join(path, "sizes"), "sizes must be >= 1");
      }
    } else if (out.kind == "tables") {
      out.catalog = FreeCatalog::UserTables;
      const auto tpath = join(path, "tables");
      const auto tables = sequence(require(node, path, "tables"), tpath);
      for (std::size_t i = 0; i < tables.size(); ++i) {
        const auto lpath = index(tpath, i);
        std::vector<Permutation> gens;
        const auto level = sequence(tables[i], lpath);
        for (std::size_t j = 0; j < level.size(); ++j) {
          Permutation p;
          for (auto v : integers(level[j], index(lpath, j))) {
            if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) {
              fail(level[j], index(lpath, j), "permutation entries must be nonnegative");
            }
            p.push_back(static_cast<std::uint32_t>(v));
          }
          gens.push_back(std::move(p));
        }
        out.tables.push_back(std::move(gens));
      }
    } else if (out.kind != "regular") {
      fail(node["kind"], join(path, "kind"),
           "unknown level kind '" + out.kind + "' (quotient, folner, tables, regular)");
    }
    if (node["catalog"]) {
      const auto c = text(node["catalog"], join(path, "catalog"));
      if (c == "transitive-random") {
        out.catalog = FreeCatalog::TransitiveRandom;
      } else if (c == "cyclic-commuting") {
        out.catalog = FreeCatalog::CyclicCommuting;
      } else {
        fail(node["catalog"], join(path, "catalog"),
             "unknown catalog '" + c + "' (transitive-random, cyclic-commuting)");
      }
    }
    return out;
  }

  std::vector<std::string> row_text(const YAML::Node& node, const std::string& path) const {
    if (node.IsScalar()) return {text(node, path)};
    return strings(node, path);
  }

  EstimatorSpec estimator(const YAML::Node& node, const std::string& path,
                          const GroupPtr& g) const {
    allow(node, path,
          {"etas", "tail", "method", "relator_cutoff", "kmax", "noise", "eps", "p", "metric",
           "delta", "m", "relation_set", "brute_force", "brute_max_degree", "fourier_grid",
           "threads"});
    EstimatorSpec out;
    if (const auto n = node["etas"]) {
      if (!(n.IsScalar() && n.Scalar() == "standard")) {
        out.schedule.etas = reals(n, join(path, "etas"));
      }
    }
    if (const auto n = node["tail"]) out.schedule.tail = count(n, join(path, "tail"), 1, 1000);
    try {
      out.schedule.validate();
    } catch (const ValidationError& e) {
      fail(node["etas"] ? node["etas"] : node, join(path, "etas"), e.what());
    }
    if (const auto n = node["method"]) {
      const auto m = text(n, join(path, "method"));
      if (m == "auto") out.method = RankMethod::Auto;
      else if (m == "dense") out.method = RankMethod::Dense;
      else if (m == "sliced") out.method = RankMethod::Sliced;
      else if (m == "exact") out.method = RankMethod::Exact;
      else fail(n, join(path, "method"), "unknown method '" + m + "' (auto, dense, sliced, exact)");
    }
    if (const auto n = node["relator_cutoff"]) {
      out.relator_cutoff = count(n, join(path, "relator_cutoff"), 0, 1u << 20);
    }
    if (const auto n = node["kmax"]) out.kmax = count(n, join(path, "kmax"), 1, 12);
    if (const auto n = node["noise"]) {
      out.noise = real(n, join(path, "noise"));
      if (out.noise < 0.0) fail(n, join(path, "noise"), "must be >= 0");
    }
    if (const auto n = node["eps"]) {
      out.eps = reals(n, join(path, "eps"));
      for (double e : out.eps) {
        if (!(e > 0.0 && e < 1.0)) fail(n, join(path, "eps"), "values must lie in (0, 1)");
      }
    }
    if (const auto n = node["p"]) {
      out.metric.p = real(n, join(path, "p"));
      if (!(out.metric.p >= 1.0)) fail(n, join(path, "p"), "must be >= 1 or inf");
    }
    if (const auto n = node["metric"]) {
      try {
        out.metric.kind = metric_kind_from_string(text(n, join(path, "metric")));
      } catch (const ValidationError& e) {
        fail(n, join(path, "metric"), e.what());
      }
    }
    if (const auto n = node["delta"]) {
      out.delta = real(n, join(path, "delta"));
      if (!(out.delta > 0.0)) fail(n, join(path, "delta"), "must be > 0");
    }
    if (const auto n = node["m"]) out.m = count(n, join(path, "m"), 1, 8);
    if (const auto n = node["relation_set"]) {
      const auto seq = sequence(n, join(path, "relation_set"));
      for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto p = index(join(path, "relation_set"), i);
        const auto s = text(seq[i], p);
        try {
          out.relation_set.push_back(parse_group_element(g, s));
        } catch (const ParseError& e) {
          fail(seq[i], p, "cannot parse group element: " + e.reason(), e.caret(),
               static_cast<int>(e.position()) + (seq[i].Tag() == "!" ? 1 : 0));
        }
      }
    }
    if (const auto n = node["brute_force"]) out.brute_force = boolean(n, join(path, "brute_force"));
    if (const auto n = node["brute_max_degree"]) {
      out.brute_max_degree = count(n, join(path, "brute_max_degree"), 1, 64);
    }
    if (const auto n = node["fourier_grid"]) {
      out.fourier_grid = count(n, join(path, "fourier_grid"), 0, 1u << 16);
    }
    if (const auto n = node["threads"]) out.threads = count(n, join(path, "threads"), 1, 256);
    return out;
  }

  OrbitSpec orbit(const YAML::Node& node, const std::string& path) const {
    allow(node, path,
          {"origin", "window", "n", "sample", "count", "lattice", "sets", "p", "eps", "metric"});
    OrbitSpec out;
    out.window = box(require(node, path, "window"), join(path, "window"));
    if (const auto n = node["origin"]) {
      out.origin = integers(n, join(path, "origin"));
      if (out.origin.size() != out.window.dimension()) {
        fail(n, join(path, "origin"), "origin and window dimensions differ");
      }
    } else {
      for (auto s : out.window.sides) out.origin.push_back(1 - s);
    }
    if (const auto n = node["n"]) out.n = count(n, join(path, "n"), 1, 16);
    if (const auto n = node["sample"]) {
      out.sample = text(n, join(path, "sample"));
      if (out.sample != "random" && out.sample != "lattice") {
        fail(n, join(path, "sample"), "expected random or lattice");
      }
    }
    if (const auto n = node["count"]) out.count = count(n, join(path, "count"), 1, kCoveringBudget);
    if (const auto n = node["lattice"]) out.lattice = count(n, join(path, "lattice"), 1, 1024);
    const auto sets = sequence(require(node, path, "sets"), join(path, "sets"));
    for (std::size_t i = 0; i < sets.size(); ++i) {
      out.sets.push_back(box(sets[i], index(join(path, "sets"), i)));
      if (out.sets.back().dimension() != out.window.dimension()) {
        fail(sets[i], index(join(path, "sets"), i), "set and window dimensions differ");
      }
    }
    if (const auto n = node["p"]) {
      out.p = reals(n, join(path, "p"));
      for (double p : out.p) {
        if (!(p >= 1.0)) fail(n, join(path, "p"), "values must be >= 1 or inf");
      }
    }
    if (const auto n = node["eps"]) {
      out.eps = reals(n, join(path, "eps"));
      for (double e : out.eps) {
        if (!(e > 0.0 && e < 1.0)) fail(n, join(path, "eps"), "values must lie in (0, 1)");
      }
    }
    if (const auto n = node["metric"]) {
      try {
        out.metric = metric_kind_from_string(text(n, join(path, "metric")));
      } catch (const ValidationError& e) {
        fail(n, join(path, "metric"), e.what());
      }
    }
    return out;
  }

  TileSpec tile(const YAML::Node& node, const std::string& path) const {
    allow(node, path, {"region", "shapes", "eta", "orbit"});
    TileSpec out;
    out.region = box(require(node, path, "region"), join(path, "region"));
    const auto shapes = sequence(require(node, path, "shapes"), join(path, "shapes"));
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      out.shapes.push_back(box(shapes[i], index(join(path, "shapes"), i)));
      if (out.shapes.back().dimension() != out.region.dimension()) {
        fail(shapes[i], index(join(path, "shapes"), i), "shape and region dimensions differ");
      }
    }
    if (const auto n = node["eta"]) {
      out.eta = real(n, join(path, "eta"));
      if (!(out.eta > 0.0 && out.eta < 1.0)) fail(n, join(path, "eta"), "must lie in (0, 1)");
    }
    if (const auto n = node["orbit"]) out.orbit = orbit(n, join(path, "orbit"));
    return out;
  }

  JobSpec job(const YAML::Node& root, const std::string& path) const {
    if (!root || root.IsNull()) fail(root, "", "empty job file");
    allow(root, "",
          {"name", "command", "seed", "group", "levels", "matrix", "presentation", "estimator",
           "tile", "output"});
    JobSpec out;
    out.path = path;
    out.name = std::filesystem::path(path).stem().string();
    if (const auto n = root["name"]) out.name = text(n, "name");
    if (const auto n = root["command"]) out.command = text(n, "command");
    if (const auto n = root["seed"]) {
      out.seed = static_cast<std::uint64_t>(count(n, "seed", 0, std::numeric_limits<std::int64_t>::max()));
    }
    if (const auto t = root["tile"]) out.tile = tile(t, "tile");
    // Tiling jobs live on Z^d and may omit the group.
    if (!root["group"] && out.tile) {
      out.group = GroupSpec::free_abelian(static_cast<int>(out.tile ? out.tile->region.dimension() : 1));
    } else {
      out.group = group(require(root, "", "group"), "group");
    }
    if (const auto n = root["levels"]) out.levels = levels(n, "levels");
    if (const auto n = root["matrix"]) {
      std::vector<std::vector<GroupRingElement>> rows;
      if (n.IsScalar()) {
        rows.push_back({element(out.group, n, "matrix")});
        out.matrix_text.push_back(n.Scalar());
      } else {
        const auto seq = sequence(n, "matrix");
        for (std::size_t i = 0; i < seq.size(); ++i) {
          const auto rpath = index("matrix", i);
          const auto texts = row_text(seq[i], rpath);
          std::vector<GroupRingElement> row;
          for (std::size_t j = 0; j < texts.size(); ++j) {
            row.push_back(element(out.group, seq[i].IsScalar() ? seq[i] : seq[i][j],
                                  seq[i].IsScalar() ? rpath : index(rpath, j)));
            out.matrix_text.push_back(texts[j]);
          }
          if (!rows.empty() && row.size() != rows.front().size()) {
            fail(seq[i], rpath, "rows of the matrix have different lengths");
          }
          rows.push_back(std::move(row));
        }
      }
      out.matrix = GroupRingMatrix::from_rows(out.group, rows);
    }
    if (const auto p = root["presentation"]) {
      allow(p, "presentation", {"rank", "relators"});
      const auto rank = count(require(p, "presentation", "rank"), "presentation.rank", 1, 64);
      std::vector<std::vector<GroupRingElement>> rels;
      if (const auto r = p["relators"]) {
        const auto seq = sequence(r, "presentation.relators", false);
        for (std::size_t i = 0; i < seq.size(); ++i) {
          const auto rpath = index("presentation.relators", i);
          const auto texts = row_text(seq[i], rpath);
          if (texts.size() != rank) {
            fail(seq[i], rpath, "relator has " + std::to_string(texts.size()) +
                                    " entries, expected " + std::to_string(rank));
          }
          std::vector<GroupRingElement> row;
          for (std::size_t j = 0; j < texts.size(); ++j) {
            row.push_back(element(out.group, seq[i].IsScalar() ? seq[i] : seq[i][j],
                                  seq[i].IsScalar() ? rpath : index(rpath, j)));
          }
          out.relator_text.push_back(texts);
          rels.push_back(std::move(row));
        }
      }
      out.presentation = ModulePresentation(out.group, rank, std::move(rels));
    }
    if (const auto n = root["estimator"]) out.estimator = estimator(n, "estimator", out.group);
    if (const auto o = root["output"]) {
      allow(o, "output", {"json", "csv", "render"});
      if (o["json"]) out.output.json = text(o["json"], "output.json");
      if (o["csv"]) out.output.csv = text(o["csv"], "output.csv");
      if (o["render"]) out.output.render = text(o["render"], "output.render");
    }
    return out;
  }

 private:
  std::string file_;
};

}  // namespace

JobSpec parse_job(const std::string& text, const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw JobError(path, e.mark.line + 1, e.mark.column + 1, "", e.msg);
  }
  return Reader(path).job(root, path);
}

JobSpec load_job(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw JobError(path, 0, 0, "", "cannot read job file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_job(buf.str(), path);
}

std::vector<SoficLevel> build_levels(const JobSpec& job) {
  if (!job.levels) throw JobError(job.path, 0, 0, "levels", "missing required field 'levels'");
  const auto& spec = *job.levels;
  if (spec.kind == "folner") return folner_levels(job.group, spec.sizes);
  if (spec.kind == "regular") {
    if (job.group->kind() != GroupKind::Finite) {
      throw JobError(job.path, 0, 0, "levels.kind", "regular levels need a finite group");
    }
    return {SoficLevel::regular(job.group, 0)};
  }
  QuotientSchedule s;
  s.sizes = spec.sizes;
  s.catalog = spec.catalog;
  s.seed = job.seed;
  s.tables = spec.tables;
  return quotient_chain(job.group, s);
}

}  // namespace soficrank::cli
