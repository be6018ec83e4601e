#include "rwr/rwr.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwr/error.hpp"
#include "rwr/parallel.hpp"
#include "rwr/patree.hpp"
#include "rwr/report_json.hpp"
#include "rwr/srs.hpp"
#include "rwr/theory.hpp"
#include "rwr/verify.hpp"
#include "rwr/walk.hpp"

using nlohmann::json;

struct rwr_config {
  std::string kind = "erw";
  std::string model = "strong";
  std::string method = "direct";
  std::string format = "csv";
  double b = 0.0;
  double p = 0.5;
  double alpha = 2.0;
  std::int64_t dim = 1;
  std::int64_t n = 100;
  std::int64_t replicas = 1;
  std::int64_t seed = 0;
  std::int64_t threads = 1;
  bool dump = false;
  std::vector<double> t_grid;
};

struct rwr_result {
  std::vector<std::string> columns;
  std::vector<double> data;
  std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
};

struct rwr_walk {
  rwr::WalkConfig config;
  rwr::WalkState state;
  rwr::Rng rng;
};

struct rwr_tree {
  rwr::PATForest forest;
};

namespace {

thread_local std::string last_error;

rwr_status fail(rwr_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class Fn>
rwr_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return RWR_OK;
  } catch (const rwr::ParameterError& e) {
    return fail(RWR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const rwr::RegimeError& e) {
    return fail(RWR_ERR_REGIME, e.what());
  } catch (const rwr::IoError& e) {
    return fail(RWR_ERR_IO, e.what());
  } catch (const json::exception& e) {
    return fail(RWR_ERR_INVALID_ARGUMENT, std::string("json: ") + e.what());
  } catch (const std::logic_error& e) {
    return fail(RWR_ERR_USAGE, e.what());
  } catch (const std::exception& e) {
    return fail(RWR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RWR_ERR_INTERNAL, "unknown failure");
  }
}

void require(const void* ptr, const char* what) {
  if (ptr == nullptr) throw rwr::UsageError(std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string format_number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw rwr::ParameterError("t_grid entry '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

void set_string(rwr_config& c, const std::string& key, const std::string& value) {
  auto one_of = [&](std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
      if (value == a) return;
    std::string list;
    for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
    throw rwr::ParameterError(key + " must be one of {" + list + "}, got '" + value + "'");
  };
  if (key == "kind") {
    one_of({"erw", "srs", "tree"});
    c.kind = value;
  } else if (key == "model") {
    one_of({"reinforced", "strong"});
    c.model = value;
  } else if (key == "method") {
    one_of({"direct", "clusters"});
    c.method = value;
  } else if (key == "format") {
    one_of({"csv", "json"});
    c.format = value;
  } else if (key == "t_grid") {
    c.t_grid = parse_grid(value);
  } else {
    throw rwr::UsageError("unknown string key '" + key + "'");
  }
}

void set_real(rwr_config& c, const std::string& key, double value) {
  if (key == "b") c.b = value;
  else if (key == "p") c.p = value;
  else if (key == "alpha") c.alpha = value;
  else throw rwr::UsageError("unknown real key '" + key + "'");
}

void set_int(rwr_config& c, const std::string& key, std::int64_t value) {
  if (key == "dim") c.dim = value;
  else if (key == "n") c.n = value;
  else if (key == "replicas") c.replicas = value;
  else if (key == "seed") c.seed = value;
  else if (key == "threads") c.threads = value;
  else if (key == "dump") c.dump = value != 0;
  else throw rwr::UsageError("unknown integer key '" + key + "'");
}

void validate(const rwr_config& c) {
  if (!(c.p > 0.0 && c.p < 1.0)) throw rwr::ParameterError("p must lie in (0, 1), got " + format_number(c.p));
  if (!(c.b >= 0.0) || std::isinf(c.b)) throw rwr::ParameterError("b must be finite and nonnegative");
  if (!(c.alpha > 0.0 && c.alpha <= 2.0)) throw rwr::ParameterError("alpha must lie in (0, 2]");
  if (c.dim < 1 || c.dim > 64) throw rwr::ParameterError("dim must lie in [1, 64]");
  if (c.kind == "erw" && c.dim != 1) throw rwr::ParameterError("the elephant walk is one-dimensional");
  if (c.n < 1) throw rwr::ParameterError("n must be >= 1");
  if (c.replicas < 1) throw rwr::ParameterError("replicas must be >= 1");
  if (c.threads < 1) throw rwr::ParameterError("threads must be >= 1");
  for (double t : c.t_grid)
    if (!(t > 0.0 && t <= 1.0)) throw rwr::ParameterError("t_grid entries must lie in (0, 1]");
}

json config_json(const rwr_config& c) {
  return json{{"kind", c.kind},         {"model", c.model}, {"method", c.method},     {"format", c.format},
              {"b", c.b},               {"p", c.p},         {"alpha", c.alpha},       {"dim", c.dim},
              {"n", c.n},               {"replicas", c.replicas}, {"seed", c.seed}, {"threads", c.threads},
              {"dump", c.dump},         {"t_grid", c.t_grid}};
}

void load_json(rwr_config& c, const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw rwr::ParameterError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand" || key == "output") continue;  // handled by the command line front end
    if (key == "t_grid") {
      if (value.is_array()) {
        c.t_grid = value.get<std::vector<double>>();
      } else {
        set_string(c, key, value.get<std::string>());
      }
    } else if (key == "b" || key == "p" || key == "alpha") {
      set_real(c, key, value.get<double>());
    } else if (key == "dump") {
      c.dump = value.is_boolean() ? value.get<bool>() : value.get<std::int64_t>() != 0;
    } else if (value.is_string()) {
      set_string(c, key, value.get<std::string>());
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      set_int(c, key, value.get<std::int64_t>());
    } else {
      throw rwr::ParameterError("config key '" + key + "' has an unsupported value");
    }
  }
}

json regime_json(const rwr_config& c) {
  using namespace rwr::theory;
  if (c.kind == "tree") {
    return json{{"kind", "tree"}, {"kappa", kappa_strong(c.b, c.p)}};
  }
  const RegimeReport r = c.kind == "srs" ? regime(Model::SRS, c.b, c.p, c.alpha)
                                         : regime(c.model == "reinforced" ? Model::ERW1 : Model::ERW2, c.b, c.p);
  json j{{"model", to_string(r.model)},
         {"regime", to_string(r.regime)},
         {"threshold", r.threshold},
         {"kappa", r.kappa}};
  for (const auto& [k, v] : r.constants) j["constants"][k] = v;
  return j;
}

rwr::WalkConfig walk_config(const rwr_config& c) {
  rwr::WalkConfig w;
  w.b = c.b;
  w.p = c.p;
  if (c.kind == "srs") {
    w.rule = rwr::UpdateRule::Always;
    w.steps = rwr::StepKind::Stable;
    w.stable = {c.alpha, static_cast<int>(c.dim)};
  } else {
    w.rule = c.model == "reinforced" ? rwr::UpdateRule::OnMemoryOnly : rwr::UpdateRule::Always;
  }
  return w;
}

std::vector<std::string> vector_columns(const char* stem, std::int64_t dim) {
  if (dim == 1) return {stem};
  std::vector<std::string> out;
  for (std::int64_t k = 1; k <= dim; ++k) out.push_back(stem + std::to_string(k));
  return out;
}

rwr_result simulate(const rwr_config& c) {
  validate(c);
  const auto replicas = static_cast<std::size_t>(c.replicas);
  const unsigned threads = static_cast<unsigned>(c.threads);
  const auto seed = static_cast<std::uint64_t>(c.seed);
  std::vector<std::vector<double>> blocks(replicas);
  rwr_result result;

  if (c.kind == "erw") {
    result.columns = {"replica", "k", "S"};
    std::vector<std::int64_t> times;
    if (c.t_grid.empty()) {
      for (std::int64_t k = 1; k <= c.n; ++k) times.push_back(k);
    } else {
      for (double t : c.t_grid)
        times.push_back(std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(t * static_cast<double>(c.n)))));
    }
    const rwr::WalkConfig w = walk_config(c);
    rwr::for_each_replica(replicas, threads, [&](std::size_t r) {
      rwr::Rng rng = rwr::Rng::for_replica(seed, r);
      const rwr::WalkState state = rwr::run(w, c.n, rng);
      auto& out = blocks[r];
      for (std::int64_t k : times) {
        out.push_back(static_cast<double>(r));
        out.push_back(static_cast<double>(k));
        out.push_back(state.position(k)[0]);
      }
    });
  } else if (c.kind == "srs") {
    result.columns = {"replica"};
    for (auto& name : vector_columns("S", c.dim)) result.columns.push_back(name);
    rwr::SRSConfig s;
    s.alpha = c.alpha;
    s.dim = static_cast<int>(c.dim);
    s.b = c.b;
    s.p = c.p;
    s.n = c.n;
    const auto method = c.method == "clusters" ? rwr::SrsMethod::Clusters : rwr::SrsMethod::Direct;
    rwr::for_each_replica(replicas, threads, [&](std::size_t r) {
      rwr::Rng rng = rwr::Rng::for_replica(seed, r);
      const auto value = rwr::simulate_srs(s, rng, method);
      blocks[r].push_back(static_cast<double>(r));
      blocks[r].insert(blocks[r].end(), value.begin(), value.end());
    });
  } else {
    if (c.dump) {
      result.columns = {"node", "parent", "cut", "cluster"};
      if (replicas > 1) result.columns.insert(result.columns.begin(), "replica");
    } else {
      result.columns = {"replica", "clusters", "cuts", "root_cluster_size"};
    }
    rwr::for_each_replica(replicas, threads, [&](std::size_t r) {
      rwr::Rng rng = rwr::Rng::for_replica(seed, r);
      const rwr::PATForest f = rwr::percolate(rwr::grow_discrete(c.n, c.b, rng), c.p, rng);
      auto& out = blocks[r];
      if (c.dump) {
        for (std::int64_t i = 1; i <= f.tree.size(); ++i) {
          if (replicas > 1) out.push_back(static_cast<double>(r));
          out.push_back(static_cast<double>(i));
          out.push_back(static_cast<double>(f.tree.parent[i]));
          out.push_back(static_cast<double>(f.cut[i]));
          out.push_back(static_cast<double>(f.cluster_id[i]));
        }
      } else {
        out.push_back(static_cast<double>(r));
        out.push_back(static_cast<double>(f.cluster_count()));
        out.push_back(static_cast<double>(f.cut_count()));
        out.push_back(static_cast<double>(f.clusters[1].size));
      }
    });
  }
  for (const auto& b : blocks) result.data.insert(result.data.end(), b.begin(), b.end());
  return result;
}

std::string render(const rwr_result& r, const std::string& format) {
  const std::size_t cols = r.columns.size();
  if (format == "csv") {
    std::string out;
    for (std::size_t j = 0; j < cols; ++j) out += (j ? "," : "") + r.columns[j];
    out += '\n';
    for (std::size_t i = 0; i < r.rows(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (j) out += ',';
        out += format_number(r.data[i * cols + j]);
      }
      out += '\n';
    }
    return out;
  }
  if (format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < r.rows(); ++i)
      rows.push_back(std::vector<double>(r.data.begin() + i * cols, r.data.begin() + (i + 1) * cols));
    return json{{"columns", r.columns}, {"rows", rows}}.dump() + "\n";
  }
  throw rwr::ParameterError("format must be csv or json, got '" + format + "'");
}

}  // namespace

extern "C" {

const char* rwr_last_error(void) { return last_error.c_str(); }

const char* rwr_status_string(rwr_status status) {
  switch (status) {
    case RWR_OK: return "ok";
    case RWR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RWR_ERR_REGIME: return "regime error";
    case RWR_ERR_USAGE: return "usage error";
    case RWR_ERR_IO: return "i/o error";
    case RWR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void rwr_string_free(char* s) { std::free(s); }

rwr_status rwr_config_new(rwr_config** out) {
  return guarded([&] {
    require(out, "output pointer");
    *out = new rwr_config();
  });
}

void rwr_config_free(rwr_config* config) { delete config; }

rwr_status rwr_config_set_real(rwr_config* config, const char* key, double value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    set_real(*config, key, value);
  });
}

rwr_status rwr_config_set_int(rwr_config* config, const char* key, int64_t value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    set_int(*config, key, value);
  });
}

rwr_status rwr_config_set_string(rwr_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    set_string(*config, key, value);
  });
}

rwr_status rwr_config_get_string(const rwr_config* config, const char* key, const char** value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "output pointer");
    const std::string k = key;
    if (k == "kind") *value = config->kind.c_str();
    else if (k == "model") *value = config->model.c_str();
    else if (k == "method") *value = config->method.c_str();
    else if (k == "format") *value = config->format.c_str();
    else throw rwr::UsageError("unknown string key '" + k + "'");
  });
}

rwr_status rwr_config_load_json(rwr_config* config, const char* json_text) {
  return guarded([&] {
    require(config, "config");
    require(json_text, "json text");
    rwr_config copy = *config;
    load_json(copy, json_text);
    *config = std::move(copy);
  });
}

rwr_status rwr_config_validate(const rwr_config* config) {
  return guarded([&] {
    require(config, "config");
    validate(*config);
  });
}

rwr_status rwr_config_to_json(const rwr_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "output pointer");
    *out = dup_string(config_json(*config).dump());
  });
}

rwr_status rwr_config_regime(const rwr_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "output pointer");
    validate(*config);
    *out = dup_string(regime_json(*config).dump());
  });
}

rwr_status rwr_simulate(const rwr_config* config, rwr_result** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "output pointer");
    *out = new rwr_result(simulate(*config));
  });
}

void rwr_result_free(rwr_result* result) { delete result; }

rwr_status rwr_result_shape(const rwr_result* result, size_t* rows, size_t* cols) {
  return guarded([&] {
    require(result, "result");
    if (rows) *rows = result->rows();
    if (cols) *cols = result->columns.size();
  });
}

rwr_status rwr_result_column(const rwr_result* result, size_t col, const char** name) {
  return guarded([&] {
    require(result, "result");
    require(name, "output pointer");
    if (col >= result->columns.size()) throw rwr::UsageError("column index out of range");
    *name = result->columns[col].c_str();
  });
}

rwr_status rwr_result_data(const rwr_result* result, const double** data) {
  return guarded([&] {
    require(result, "result");
    require(data, "output pointer");
    *data = result->data.data();
  });
}

rwr_status rwr_result_format(const rwr_result* result, const char* format, char** out) {
  return guarded([&] {
    require(result, "result");
    require(format, "format");
    require(out, "output pointer");
    *out = dup_string(render(*result, format));
  });
}

rwr_status rwr_result_save(const rwr_result* result, const char* path, const char* format) {
  return guarded([&] {
    require(result, "result");
    require(path, "path");
    require(format, "format");
    const std::string text = render(*result, format);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw rwr::IoError(std::string("cannot open '") + path + "' for writing");
    file << text;
    file.flush();
    if (!file) throw rwr::IoError(std::string("write to '") + path + "' failed");
  });
}

size_t rwr_check_count(void) { return rwr::verify::checks().size(); }

const char* rwr_check_name(size_t index) {
  const auto& c = rwr::verify::checks();
  return index < c.size() ? c[index].name.c_str() : nullptr;
}

int rwr_check_criterion(size_t index) {
  const auto& c = rwr::verify::checks();
  return index < c.size() ? c[index].criterion : 0;
}

rwr_status rwr_verify(const char* name, uint64_t seed, unsigned threads, char** out, int* all_pass) {
  return guarded([&] {
    require(name, "check name");
    require(out, "output pointer");
    const std::string wanted = name;
    if (wanted != "all" && !rwr::verify::has_check(wanted)) {
      std::string names;
      for (const auto& c : rwr::verify::checks()) names += "\n  " + c.name;
      throw rwr::UsageError("unknown check '" + wanted + "'; valid names:\n  all" + names);
    }
    rwr::verify::Options options;
    options.seed = seed;
    options.threads = std::max(1u, threads);
    std::vector<rwr::MCReport> reports;
    for (const auto& c : rwr::verify::checks()) {
      if (wanted != "all" && c.name != wanted) continue;
      auto part = rwr::verify::run_check(c.name, options);
      reports.insert(reports.end(), part.begin(), part.end());
    }
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r);
    *out = dup_string(arr.dump(2) + "\n");
    if (all_pass) *all_pass = rwr::verify::all_pass(reports) ? 1 : 0;
  });
}

rwr_status rwr_walk_new(const rwr_config* config, rwr_walk** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "output pointer");
    validate(*config);
    if (config->kind == "tree") throw rwr::UsageError("a walk needs kind erw or srs");
    const rwr::WalkConfig w = walk_config(*config);
    w.validate();
    *out = new rwr_walk{w, rwr::WalkState(w.dim()), rwr::Rng::for_replica(static_cast<std::uint64_t>(config->seed), 0)};
  });
}

void rwr_walk_free(rwr_walk* walk) { delete walk; }

rwr_status rwr_walk_step(rwr_walk* walk, int64_t steps) {
  return guarded([&] {
    require(walk, "walk");
    if (steps < 0) throw rwr::ParameterError("step count must be nonnegative");
    walk->state.reserve(walk->state.time() + steps);
    for (int64_t k = 0; k < steps; ++k) rwr::step(walk->state, walk->config, walk->rng);
  });
}

rwr_status rwr_walk_time(const rwr_walk* walk, int64_t* time) {
  return guarded([&] {
    require(walk, "walk");
    require(time, "output pointer");
    *time = walk->state.time();
  });
}

rwr_status rwr_walk_position(const rwr_walk* walk, double* out, size_t dim) {
  return guarded([&] {
    require(walk, "walk");
    require(out, "output pointer");
    if (dim != static_cast<size_t>(walk->state.dim())) throw rwr::UsageError("dimension mismatch");
    const auto s = walk->state.position(walk->state.time());
    std::copy(s.begin(), s.end(), out);
  });
}

rwr_status rwr_tree_new(const rwr_config* config, rwr_tree** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "output pointer");
    validate(*config);
    rwr::Rng rng = rwr::Rng::for_replica(static_cast<std::uint64_t>(config->seed), 0);
    *out = new rwr_tree{rwr::percolate(rwr::grow_discrete(config->n, config->b, rng), config->p, rng)};
  });
}

void rwr_tree_free(rwr_tree* tree) { delete tree; }

rwr_status rwr_tree_size(const rwr_tree* tree, int64_t* nodes, int64_t* clusters) {
  return guarded([&] {
    require(tree, "tree");
    if (nodes) *nodes = tree->forest.tree.size();
    if (clusters) *clusters = tree->forest.cluster_count();
  });
}

rwr_status rwr_tree_node(const rwr_tree* tree, int64_t node, int64_t* parent, int* cut, int64_t* cluster) {
  return guarded([&] {
    require(tree, "tree");
    const auto& f = tree->forest;
    if (node < 1 || node > f.tree.size()) throw rwr::ParameterError("node label out of range");
    if (parent) *parent = f.tree.parent[node];
    if (cut) *cut = f.cut[node];
    if (cluster) *cluster = f.cluster_id[node];
  });
}

rwr_status rwr_tree_cluster(const rwr_tree* tree, int64_t cluster, int64_t* root, int64_t* size,
                            int64_t* half_edges) {
  return guarded([&] {
    require(tree, "tree");
    const auto& f = tree->forest;
    if (cluster < 1 || cluster > f.cluster_count()) throw rwr::ParameterError("cluster index out of range");
    const auto& c = f.clusters[cluster];
    if (root) *root = c.root;
    if (size) *size = c.size;
    if (half_edges) *half_edges = c.half_edges;
  });
}

}  // extern "C"
