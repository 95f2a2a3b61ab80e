#include "pcalloc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "pcalloc/alloc.hpp"
#include "pcalloc/csv.hpp"
#include "pcalloc/error.hpp"
#include "pcalloc/goals.hpp"
#include "pcalloc/ingest.hpp"
#include "pcalloc/metrics.hpp"
#include "pcalloc/pcm.hpp"
#include "pcalloc/scoring.hpp"
#include "pcalloc/weights.hpp"

namespace pcalloc::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string goals_path;
  std::string races_path;
  double alpha = 1.0;
  double epsilon = 0.0;
  std::string method;
  std::string grid;
  std::optional<double> pot;
  double unit = 1.0;
  std::string system = "2010-";
  std::string team;
  std::optional<double> target;
  std::string format;
  std::string output = "-";
  bool force = false;
  int round = -1;
  double tol = 1e-9;
  double refine_tol = 1e-6;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kValidation, fmt::format("cannot read '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output == "-") {
    out << text;
    return;
  }
  if (std::filesystem::exists(cfg.output) && !cfg.force) {
    throw Error(ErrorKind::kValidation, fmt::format("refusing to overwrite '{}' (use --force)", cfg.output));
  }
  std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::kValidation, fmt::format("cannot write '{}'", cfg.output));
  file << text;
}

SeasonResults load_season(const RunConfig& cfg) {
  if (cfg.races_path.empty()) throw UsageError("this subcommand needs --races PATH");
  return parse_season(read_file(cfg.races_path));
}

GoalsMatrix load_goals_input(const RunConfig& cfg) {
  if (cfg.goals_path.empty() == cfg.races_path.empty()) {
    throw UsageError("exactly one of --goals PATH or --races PATH is required");
  }
  if (!cfg.goals_path.empty()) return load_goals(read_file(cfg.goals_path));
  return goals_matrix(parse_season(read_file(cfg.races_path)));
}

std::vector<WeightingMethod> methods_of(const std::string& text) {
  if (text == "both") return {{Method::kEigenvector}, {Method::kRowGeometricMean}};
  try {
    return {{parse_method(text)}};
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> grid_of(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ':')) {
    const auto v = csv::parse_real(piece);
    if (!v) throw UsageError(fmt::format("bad --grid '{}' (expected START:STOP:STEP)", text));
    parts.push_back(*v);
  }
  if (parts.size() != 3) throw UsageError(fmt::format("bad --grid '{}' (expected START:STOP:STEP)", text));
  if (parts[0] < 0.0 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw UsageError(fmt::format("bad --grid '{}': need 0 <= START <= STOP and STEP > 0", text));
  }
  return make_grid(parts[0], parts[1], parts[2]);
}

const std::string& format_of(const RunConfig& cfg, const std::vector<std::string>& allowed) {
  if (std::find(allowed.begin(), allowed.end(), cfg.format) == allowed.end()) {
    throw UsageError(fmt::format("--format {} not supported here (allowed: {})", cfg.format, fmt::join(allowed, ", ")));
  }
  return cfg.format;
}

std::string join_json_docs(const std::vector<std::string>& docs) {
  if (docs.size() == 1) return docs.front();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& d : docs) arr.push_back(nlohmann::json::parse(d));
  return arr.dump(2) + "\n";
}

std::string cmd_goals(const RunConfig& cfg) {
  const auto goals = load_goals_input(cfg);
  if (format_of(cfg, {"csv", "json"}) == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < goals.size(); ++i) {
      rows.push_back(std::vector<std::int64_t>(goals.g.row(i).begin(), goals.g.row(i).end()));
    }
    nlohmann::json doc = {{"teams", goals.teams}, {"goals", rows}};
    doc["races_counted"] = goals.races_counted ? nlohmann::json(*goals.races_counted) : nlohmann::json(nullptr);
    return doc.dump(2) + "\n";
  }
  return write_goals(goals);
}

std::string cmd_pcm(const RunConfig& cfg) {
  const auto m = build_pcm(load_goals_input(cfg), cfg.alpha, cfg.epsilon);
  return format_of(cfg, {"csv", "json"}) == "json" ? write_pcm_json(m, cfg.round) : write_pcm_csv(m, cfg.round);
}

std::string cmd_weights(const RunConfig& cfg) {
  const auto methods = methods_of(cfg.method);
  const auto& format = format_of(cfg, {"json", "csv"});
  const auto goals = load_goals_input(cfg);
  std::vector<WeightVector> results;
  for (const auto& method : methods) results.push_back(weights_for_goals(goals, cfg.alpha, method, cfg.epsilon));
  if (format == "csv") {
    if (results.size() == 1) return write_weights_csv(results.front(), cfg.round);
    std::string out = "team,EM,RGM\n";
    for (std::size_t i = 0; i < goals.size(); ++i) {
      auto cell = [&](double x) { return cfg.round >= 0 ? csv::format_fixed(x, cfg.round) : csv::format_real(x); };
      out += csv::quote(goals.teams[i]) + "," + cell(results[0].w[i]) + "," + cell(results[1].w[i]) + "\n";
    }
    return out;
  }
  std::vector<std::string> docs;
  for (const auto& w : results) docs.push_back(write_weights_json(w, cfg.round));
  return join_json_docs(docs);
}

std::string cmd_allocate(const RunConfig& cfg) {
  if (!cfg.pot) throw UsageError("allocate needs --pot");
  const auto methods = methods_of(cfg.method);
  const auto& format = format_of(cfg, {"json", "csv"});
  if (format == "csv" && methods.size() != 1) throw UsageError("csv allocation output needs a single --method");
  const auto goals = load_goals_input(cfg);
  std::vector<std::string> docs;
  for (const auto& method : methods) {
    const auto report = allocate(weights_for_goals(goals, cfg.alpha, method, cfg.epsilon), *cfg.pot, cfg.unit);
    docs.push_back(format == "csv" ? write_allocation_csv(report, cfg.round) : write_allocation_json(report, cfg.round));
  }
  return format == "csv" ? docs.front() : join_json_docs(docs);
}

std::string cmd_sweep(const RunConfig& cfg) {
  const auto methods = methods_of(cfg.method);
  const auto& format = format_of(cfg, {"tsv", "json"});
  const auto grid = grid_of(cfg.grid);
  const auto goals = load_goals_input(cfg);
  const auto result = sweep(goals, methods, grid, cfg.epsilon, cfg.refine_tol);
  if (format == "json") return write_sweep_json(result, cfg.round);
  std::string out;
  for (const auto& ms : result.methods) {
    if (result.methods.size() > 1) {
      // gnuplot-style data blocks: a comment line and two blank lines between methods.
      if (!out.empty()) out += "\n\n";
      out += fmt::format("# method: {}\n", method_name(ms.method));
    }
    out += write_sweep_tsv(ms, goals.teams, cfg.round);
  }
  return out;
}

std::string cmd_indifferent(const RunConfig& cfg) {
  if (cfg.team.empty() || !cfg.target) throw UsageError("indifferent-alpha needs --team and --target");
  const auto methods = methods_of(cfg.method);
  format_of(cfg, {"json"});
  const auto grid = grid_of(cfg.grid);
  const double step = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
  const auto goals = load_goals_input(cfg);
  std::vector<std::string> docs;
  for (const auto& method : methods) {
    const auto result =
        indifferent_alpha(goals, cfg.team, *cfg.target, method, grid.front(), grid.back(), step, cfg.tol, cfg.epsilon);
    docs.push_back(write_indifference_json(result, cfg.round));
  }
  return join_json_docs(docs);
}

std::string cmd_scale_invariance(const RunConfig& cfg) {
  const auto methods = methods_of(cfg.method);
  format_of(cfg, {"json"});
  auto grid = grid_of(cfg.grid);
  std::erase_if(grid, [](double a) { return a <= 0.0; });
  const auto goals = load_goals_input(cfg);
  std::vector<std::string> docs;
  for (const auto& method : methods) {
    docs.push_back(write_crossings_json(scale_invariance_scan(goals, method, grid, cfg.refine_tol, cfg.epsilon),
                                        cfg.round));
  }
  return join_json_docs(docs);
}

std::string cmd_standings(const RunConfig& cfg) {
  const auto& format = format_of(cfg, {"csv", "json"});
  PointsSystem system;
  try {
    system = builtin_system(cfg.system);
  } catch (const Error&) {
    if (!std::filesystem::exists(cfg.system)) {
      throw UsageError(fmt::format("--system '{}' is neither a builtin system nor a readable file", cfg.system));
    }
    system = parse_points_system(read_file(cfg.system));
  }
  const auto standings = score_season(load_season(cfg), system);
  return format == "json" ? write_standings_json(standings, system.name) : write_standings_csv(standings);
}

struct Subcommand {
  const char* name;
  const char* help;
  const char* default_method;
  const char* default_format;
  const char* default_grid;
  std::function<std::string(const RunConfig&)> handler;
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  const std::vector<Subcommand> subcommands = {
      {"goals", "Aggregate race results into the goals matrix", "rgm", "csv", "0:3:0.02", cmd_goals},
      {"pcm", "Build the alpha-parameterized pairwise comparison matrix", "rgm", "csv", "0:3:0.02", cmd_pcm},
      {"weights", "Derive team weights (EM and/or RGM)", "rgm", "json", "0:3:0.02", cmd_weights},
      {"allocate", "Split a money pot by team weights", "rgm", "json", "0:3:0.02", cmd_allocate},
      {"sweep", "Weights, HHI* and rankings over an alpha grid", "both", "tsv", "0:3:0.02", cmd_sweep},
      {"indifferent-alpha", "Find alpha values giving a team its target share", "rgm", "json", "0:3:0.02",
       cmd_indifferent},
      {"check-scale-invariance", "Report rank reversals along an alpha grid", "rgm", "json", "0.02:3:0.02",
       cmd_scale_invariance},
      {"standings", "Championship standings under a points system", "rgm", "csv", "0:3:0.02", cmd_standings},
  };

  CLI::App app{"Pairwise-comparison revenue allocation from season race results", "pcalloc"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  std::map<const CLI::App*, const Subcommand*> by_app;
  for (const auto& sc : subcommands) {
    CLI::App* sub = app.add_subcommand(sc.name, sc.help);
    by_app[sub] = &sc;
    sub->add_option("--goals", cfg.goals_path, "Goals matrix CSV");
    sub->add_option("--races", cfg.races_path, "Race-level season CSV");
    sub->add_option("--alpha", cfg.alpha, "Inequality exponent (>= 0)");
    sub->add_option("--epsilon", cfg.epsilon, "Constant added to every goal count (>= 0)");
    sub->add_option("--method", cfg.method, "em | rgm | both");
    sub->add_option("--grid", cfg.grid, "Alpha grid START:STOP:STEP");
    sub->add_option("--pot", cfg.pot, "Money to allocate");
    sub->add_option("--unit", cfg.unit, "Rounding unit for money amounts");
    sub->add_option("--system", cfg.system, "Points system name or JSON file");
    sub->add_option("--team", cfg.team, "Team id");
    sub->add_option("--target", cfg.target, "Target share in (0, 1)");
    sub->add_option("--tol", cfg.tol, "Root tolerance on |share - target|");
    sub->add_option("--refine-tol", cfg.refine_tol, "Width of refined crossing intervals");
    sub->add_option("--format", cfg.format, "json | csv | tsv");
    sub->add_option("--output", cfg.output, "Output path, '-' for standard output");
    sub->add_flag("--force", cfg.force, "Overwrite an existing output file");
    sub->add_option("--round", cfg.round, "Round displayed numbers to N decimals");
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Subcommand* sc = by_app.at(app.get_subcommands().front());
  if (cfg.method.empty()) cfg.method = sc->default_method;
  if (cfg.format.empty()) cfg.format = sc->default_format;
  if (cfg.grid.empty()) cfg.grid = sc->default_grid;
  try {
    if (cfg.round < -1) throw UsageError("--round must be non-negative");
    emit(cfg, sc->handler(cfg), out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace pcalloc::cli
