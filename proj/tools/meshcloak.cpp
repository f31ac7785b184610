#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "meshcloak/distance.hpp"
#include "meshcloak/engine.hpp"
#include "meshcloak/error.hpp"
#include "meshcloak/mesh.hpp"
#include "meshcloak/metrics.hpp"
#include "meshcloak/simulator.hpp"
#include "meshcloak/stream.hpp"
#include "meshcloak/street_map.hpp"
#include "meshcloak/synthetic_map.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace meshcloak;

namespace {

struct Options {
  std::string map_path;
  double dc_max = 2000.0;
  std::string matrix_path;
  std::string stream_path;
  std::string profile = "P1";
  std::size_t users = 1000;
  std::size_t queries_per_user = 11;
  std::string k_range = "2:5";
  std::int64_t dt = 5;
  std::uint64_t seed = 1;
  std::string mode = "batch";
  std::string edge_rule = "literal";
  std::string mesh_mode = "literal";
  double max_snap = 50.0;
  unsigned threads = 1;
  std::string label;
  std::string out;
  bool dump_meshes = false;

  // gen-map
  std::size_t terminals = 6105;
  std::size_t streets = 7029;
  double width = 6000.0;
  double height = 6000.0;
  double oneway_fraction = 0.15;
  std::string grid;
  double spacing = 100.0;

  // report
  std::string in_dir;
};

std::pair<int, int> parse_k_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw ConfigError("--k-range expects lo:hi, got '" + s + "'");
  try {
    int lo = std::stoi(s.substr(0, colon));
    int hi = std::stoi(s.substr(colon + 1));
    return {lo, hi};
  } catch (const std::exception&) {
    throw ConfigError("--k-range expects integers lo:hi, got '" + s + "'");
  }
}

SpeedProfile resolve_profile(const std::string& name) {
  if (name == "P1") return profile_p1();
  if (name == "P2") return profile_p2();
  return load_profile(name);
}

EdgeRule parse_edge_rule(const std::string& s) {
  if (s == "literal") return EdgeRule::literal;
  if (s == "strict") return EdgeRule::strict;
  throw ConfigError("--edge-rule must be literal or strict");
}

MeshMode parse_mesh_mode(const std::string& s) {
  if (s == "literal") return MeshMode::literal;
  if (s == "max-remaining") return MeshMode::max_remaining;
  throw ConfigError("--mesh-mode must be literal or max-remaining");
}

std::string default_label(const Options& opt) {
  std::string profile = opt.profile;
  if (profile != "P1" && profile != "P2")
    profile = fs::path(profile).stem().string();
  auto [lo, hi] = parse_k_range(opt.k_range);
  (void)lo;
  return profile + "-" + std::to_string(opt.dt) + "-" + std::to_string(hi);
}

void write_file(const std::string& path, const auto& writer) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  writer(out);
  if (!out) throw ConfigError("write failed: " + path);
}

BoundedDistanceMatrix obtain_matrix(const StreetMap& map, const Options& opt,
                                    bool* reused = nullptr) {
  if (reused) *reused = false;
  if (!opt.matrix_path.empty() && fs::exists(opt.matrix_path)) {
    try {
      auto m = load_matrix(map, opt.matrix_path, opt.dc_max);
      if (reused) *reused = true;
      return m;
    } catch (const ConfigError&) {
      // stale or mismatched cache: fall through and rebuild
    }
  }
  auto m = map_distance_matrix(map, opt.dc_max, opt.threads);
  if (!opt.matrix_path.empty()) save_matrix(m, map, opt.matrix_path);
  return m;
}

int cmd_gen_map(const Options& opt) {
  StreetMap map = [&] {
    if (!opt.grid.empty()) {
      auto x = opt.grid.find('x');
      if (x == std::string::npos)
        throw ConfigError("--grid expects NXxNY, e.g. 61x61");
      auto nx = static_cast<std::size_t>(std::stoull(opt.grid.substr(0, x)));
      auto ny = static_cast<std::size_t>(std::stoull(opt.grid.substr(x + 1)));
      return grid_map(nx, ny, opt.spacing);
    }
    return synthetic_map(opt.terminals, opt.streets, opt.width, opt.height,
                         opt.oneway_fraction, opt.seed);
  }();
  save_map(map, opt.out);
  std::cout << "map: " << map.terminal_count() << " terminals, "
            << map.street_count() << " streets -> " << opt.out << '\n';
  return 0;
}

int cmd_precompute(const Options& opt) {
  StreetMap map = load_map(opt.map_path);
  if (fs::exists(opt.out)) {
    try {
      auto cached = load_matrix(map, opt.out, opt.dc_max);
      std::cout << "cache reused: " << cached.entry_count() << " entries ("
                << opt.out << ")\n";
      return 0;
    } catch (const ConfigError&) {
      // rebuild below
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  auto matrix = map_distance_matrix(map, opt.dc_max, opt.threads);
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  save_matrix(matrix, map, opt.out);
  std::cout << "matrix: " << matrix.entry_count() << " entries, dc_max "
            << opt.dc_max << ", " << secs << " s -> " << opt.out << '\n';
  return 0;
}

int cmd_simulate(const Options& opt) {
  StreetMap map = load_map(opt.map_path);
  SpeedProfile profile = resolve_profile(opt.profile);
  auto k_range = parse_k_range(opt.k_range);
  auto users =
      generate_users(map, profile, opt.users, k_range, opt.dt, opt.seed);
  auto records = simulate(map, users, opt.queries_per_user, opt.seed);
  save_stream(opt.out, records);
  std::cout << "stream: " << records.size() << " queries from " << opt.users
            << " users -> " << opt.out << '\n';
  return 0;
}

json run_meta(const Options& opt, const std::string& label,
              const std::string& stream_path) {
  auto [lo, hi] = parse_k_range(opt.k_range);
  return json{{"label", label},
              {"map", opt.map_path},
              {"dc_max", opt.dc_max},
              {"profile", opt.profile},
              {"users", opt.users},
              {"queries_per_user", opt.queries_per_user},
              {"k_lo", lo},
              {"k_hi", hi},
              {"dt", opt.dt},
              {"seed", opt.seed},
              {"mode", opt.mode},
              {"edge_rule", opt.edge_rule},
              {"mesh_mode", opt.mesh_mode},
              {"max_snap", opt.max_snap},
              {"stream", stream_path},
              {"k_distribution", "uniform over [k_lo, k_hi]"},
              {"mobility", "random waypoint over shortest paths"}};
}

int cmd_run(const Options& opt) {
  if (opt.mode != "batch" && opt.mode != "sequential")
    throw ConfigError("--mode must be batch or sequential");
  StreetMap map = load_map(opt.map_path);
  fs::create_directories(opt.out);

  BoundedDistanceMatrix matrix = obtain_matrix(map, opt);

  std::string stream_path = opt.stream_path;
  if (stream_path.empty()) {
    SpeedProfile profile = resolve_profile(opt.profile);
    auto k_range = parse_k_range(opt.k_range);
    auto users =
        generate_users(map, profile, opt.users, k_range, opt.dt, opt.seed);
    auto records = simulate(map, users, opt.queries_per_user, opt.seed);
    stream_path = (fs::path(opt.out) / "stream.csv").string();
    save_stream(stream_path, records);
  }
  // Always run from the file so a pre-generated stream and an inline one
  // take the identical path through the engine.
  auto records = load_stream(stream_path);
  auto queries = snap_stream(map, records, opt.max_snap);

  EngineConfig config;
  config.edge_rule = parse_edge_rule(opt.edge_rule);
  config.mesh_mode = parse_mesh_mode(opt.mesh_mode);

  EngineLog log = opt.mode == "batch"
                      ? run_batch(map, matrix, config, queries)
                      : run_sequential(map, matrix, config, queries);
  MetricsReport report = compute_metrics(log);
  std::string label = opt.label.empty() ? default_label(opt) : opt.label;

  write_file((fs::path(opt.out) / "ticks.csv").string(),
             [&](std::ostream& o) { write_ticks_csv(o, log); });
  write_file((fs::path(opt.out) / "results.csv").string(),
             [&](std::ostream& o) { write_results_csv(o, log); });
  write_file((fs::path(opt.out) / "metrics.txt").string(),
             [&](std::ostream& o) { write_report(o, report, label); });
  write_file((fs::path(opt.out) / "metrics.csv").string(),
             [&](std::ostream& o) {
               write_report_csv_header(o);
               write_report_csv_row(o, report, label);
             });
  write_file((fs::path(opt.out) / "meta.json").string(),
             [&](std::ostream& o) {
               o << run_meta(opt, label, stream_path).dump(2) << '\n';
             });
  if (opt.dump_meshes)
    write_file((fs::path(opt.out) / "meshes.jsonl").string(),
               [&](std::ostream& o) {
                 for (const CloakingResult& r : log.results)
                   dump_mesh(o, r.mesh);
               });

  write_report(std::cout, report, label);
  return 0;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& header) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw ConfigError(path + ": unexpected header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

int cmd_report(const Options& opt) {
  fs::path dir(opt.in_dir);
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in)
    throw ConfigError("cannot open " + (dir / "meta.json").string());
  json meta = json::parse(meta_in);

  auto ticks = read_csv((dir / "ticks.csv").string(),
                        "tick,new,waiting,succeeded,expired,cg_nodes,"
                        "cg_edges,batch_ms");
  auto results = read_csv((dir / "results.csv").string(),
                          "query_id,user_id,k,clique_size,delay,mesh_len");

  std::vector<std::int64_t> dt_by_id;
  std::string stream_path = meta.value("stream", std::string());
  if (!stream_path.empty() && fs::exists(stream_path))
    for (const QueryRecord& r : load_stream(stream_path))
      dt_by_id.push_back(r.dt);
  std::int64_t fallback_dt = meta.value("dt", std::int64_t{0});

  MetricsReport r;
  double total_ms = 0;
  for (const auto& row : ticks) {
    r.admitted += std::stoull(row.at(1));
    r.expired += std::stoull(row.at(4));
    total_ms += std::stod(row.at(7));
  }
  r.succeeded = results.size();
  r.waiting = r.admitted - r.succeeded - r.expired;
  if (r.admitted == 0) {
    r.no_data = true;
  } else {
    if (r.succeeded + r.waiting > 0)
      r.success_rate = static_cast<double>(r.succeeded) /
                       static_cast<double>(r.succeeded + r.waiting);
    r.success_rate_total = static_cast<double>(r.succeeded) /
                           static_cast<double>(r.admitted);
    double sk = 0, sdt = 0, sm = 0;
    for (const auto& row : results) {
      auto id = std::stoll(row.at(0));
      double k = std::stod(row.at(2));
      double size = std::stod(row.at(3));
      double delay = std::stod(row.at(4));
      sk += size / k;
      std::int64_t dt =
          id >= 0 && static_cast<std::size_t>(id) < dt_by_id.size()
              ? dt_by_id[static_cast<std::size_t>(id)]
              : fallback_dt;
      if (dt > 0) sdt += delay / static_cast<double>(dt);
      sm += std::stod(row.at(5));
    }
    if (r.succeeded > 0) {
      auto n = static_cast<double>(r.succeeded);
      r.rel_k = sk / n;
      r.rel_dt = sdt / n;
      r.avg_mesh_length = sm / n;
    }
    r.avg_ms_per_query = total_ms / static_cast<double>(r.admitted);
  }
  std::string label = opt.label.empty()
                          ? meta.value("label", std::string("run"))
                          : opt.label;
  write_report(std::cout, r, label);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MeshCloak road-network location cloaking toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_map = [&](CLI::App* sub) {
    sub->add_option("--map", opt.map_path, "map file")->required();
  };

  CLI::App* gen = app.add_subcommand("gen-map", "generate a synthetic map");
  gen->add_option("--terminals", opt.terminals, "terminal count");
  gen->add_option("--streets", opt.streets, "street count");
  gen->add_option("--width", opt.width, "extent in meters");
  gen->add_option("--height", opt.height, "extent in meters");
  gen->add_option("--oneway-fraction", opt.oneway_fraction,
                  "fraction of extra streets made one-way");
  gen->add_option("--grid", opt.grid, "lattice NXxNY instead of random");
  gen->add_option("--spacing", opt.spacing, "lattice edge length");
  gen->add_option("--seed", opt.seed, "random seed");
  gen->add_option("--out", opt.out, "output map file")->required();

  CLI::App* pre = app.add_subcommand("precompute",
                                     "build the bounded distance matrix");
  add_map(pre);
  pre->add_option("--dc-max", opt.dc_max, "distance bound in meters");
  pre->add_option("--threads", opt.threads, "worker threads");
  pre->add_option("--out", opt.out, "matrix cache file")->required();

  CLI::App* sim = app.add_subcommand("simulate", "generate a query stream");
  add_map(sim);
  sim->add_option("--profile", opt.profile, "P1, P2, or profile file");
  sim->add_option("--users", opt.users, "user count");
  sim->add_option("--queries-per-user", opt.queries_per_user, "per user");
  sim->add_option("--k-range", opt.k_range, "lo:hi inclusive");
  sim->add_option("--dt", opt.dt, "temporal tolerance seconds");
  sim->add_option("--seed", opt.seed, "random seed");
  sim->add_option("--out", opt.out, "output stream csv")->required();

  CLI::App* run = app.add_subcommand("run", "run the cloaking engine");
  add_map(run);
  run->add_option("--dc-max", opt.dc_max, "distance bound in meters");
  run->add_option("--matrix", opt.matrix_path, "matrix cache file");
  run->add_option("--stream", opt.stream_path,
                  "pre-generated stream (otherwise simulated)");
  run->add_option("--profile", opt.profile, "P1, P2, or profile file");
  run->add_option("--users", opt.users, "user count");
  run->add_option("--queries-per-user", opt.queries_per_user, "per user");
  run->add_option("--k-range", opt.k_range, "lo:hi inclusive");
  run->add_option("--dt", opt.dt, "temporal tolerance seconds");
  run->add_option("--seed", opt.seed, "random seed");
  run->add_option("--mode", opt.mode, "batch or sequential");
  run->add_option("--edge-rule", opt.edge_rule, "literal or strict");
  run->add_option("--mesh-mode", opt.mesh_mode, "literal or max-remaining");
  run->add_option("--max-snap", opt.max_snap, "snap radius in meters");
  run->add_option("--threads", opt.threads, "worker threads");
  run->add_option("--label", opt.label, "report label");
  run->add_flag("--dump-meshes", opt.dump_meshes, "write meshes.jsonl");
  run->add_option("--out", opt.out, "output directory")->required();

  CLI::App* rep = app.add_subcommand("report", "recompute metrics from a run");
  rep->add_option("--in", opt.in_dir, "run output directory")->required();
  rep->add_option("--label", opt.label, "report label override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen_map(opt);
    if (pre->parsed()) return cmd_precompute(opt);
    if (sim->parsed()) return cmd_simulate(opt);
    if (run->parsed()) return cmd_run(opt);
    if (rep->parsed()) return cmd_report(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const EngineError& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
