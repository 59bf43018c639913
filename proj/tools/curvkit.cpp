#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "curv/catalog.hpp"
#include "curv/classify.hpp"
#include "curv/errors.hpp"
#include "curv/metric.hpp"
#include "curv/report.hpp"

namespace {

struct Options {
  std::string input;
  int points = 20;
  unsigned long long seed = 42;
  int order = 4;
  int k = -1;
  double tol_rel = 1e-8;
  double tol_abs = 1e-10;
  bool json = false;
  bool force = false;
};

int worker_count() {
  if (const char* s = std::getenv("CURVKIT_THREADS")) {
    char* end = nullptr;
    long t = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && t >= 1) return static_cast<int>(t);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

curv::MetricSpec load_input(const std::string& input) {
  const std::string prefix = "catalog:";
  if (input.rfind(prefix, 0) == 0) {
    const std::string name = input.substr(prefix.size());
    const curv::CatalogEntry* entry = curv::find_catalog(name);
    if (!entry)
      throw curv::DomainError("unknown catalog metric '" + name +
                              "' (see `curvkit catalog list`)");
    return entry->spec;
  }
  if (!std::filesystem::exists(input))
    throw curv::DomainError("no such metric file: " + input);
  return curv::parse_metric_file(input);
}

curv::ReportView view_of(const std::string& command) {
  if (command == "invariants") return curv::ReportView::Invariants;
  if (command == "identities") return curv::ReportView::Identities;
  if (command == "holonomy") return curv::ReportView::Holonomy;
  return curv::ReportView::Classify;
}

// invariants already works from first derivatives; the other commands need
// grad grad Riemann, hence two orders more.
int min_order(const std::string& command) {
  return command == "invariants" ? 3 : 4;
}

int run_analysis(const std::string& command, const Options& opt) {
  if (opt.order < 2 || opt.order > 6)
    throw curv::DomainError("--order must be between 2 and 6");
  if (opt.points < 1) throw curv::DomainError("--points must be at least 1");
  if (!(opt.tol_rel > 0.0) || !(opt.tol_abs > 0.0))
    throw curv::DomainError("tolerances must be positive");
  if (opt.k >= 1 && opt.order < opt.k + 2)
    throw curv::JetBudgetError("k-symmetry depth " + std::to_string(opt.k) +
                               " needs --order >= " + std::to_string(opt.k + 2));
  if (opt.order < min_order(command))
    throw curv::JetBudgetError("`" + command + "` needs --order >= " +
                               std::to_string(min_order(command)));

  const curv::MetricSpec spec = load_input(opt.input);

  curv::SampleConfig config;
  config.points = opt.points;
  config.seed = opt.seed;
  config.order = opt.order;
  config.k_max = opt.k;
  config.tol_abs = opt.tol_abs;
  config.tol_rel = opt.tol_rel;
  config.force_identities = opt.force;
  config.threads = worker_count();

  const curv::ClassificationReport report = curv::aggregate(spec, config);
  if (opt.json)
    std::cout << curv::report_json(report, command);
  else
    std::cout << curv::report_text(report, view_of(command));
  return curv::report_clean(report) ? 0 : 1;
}

int run_catalog_list() {
  size_t width = 0;
  for (const curv::CatalogEntry& e : curv::builtin_metrics())
    width = std::max(width, e.name.size());
  for (const curv::CatalogEntry& e : curv::builtin_metrics())
    std::cout << e.name << std::string(width - e.name.size() + 2, ' ')
              << e.summary << "\n";
  return 0;
}

int run_catalog_emit(const std::string& name) {
  const curv::CatalogEntry* entry = curv::find_catalog(name);
  if (!entry)
    throw curv::DomainError("unknown catalog metric '" + name +
                            "' (see `curvkit catalog list`)");
  std::cout << curv::emit_metric(entry->spec);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature classification toolkit for pseudo-Riemannian metrics"};
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "place a metric in the symmetry hierarchy"},
      {"invariants", "evaluate scalar and low-rank curvature invariants"},
      {"identities", "check the curvature identity suite"},
      {"holonomy", "infinitesimal holonomy algebra and parallel directions"},
  };
  std::vector<CLI::App*> analysis;
  for (const auto& [name, blurb] : commands) {
    CLI::App* cmd = app.add_subcommand(name, blurb);
    cmd->add_option("input", opt.input, "metric file or catalog:<name>")
        ->required();
    cmd->add_option("--points", opt.points, "sample points per run")
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "sampling seed")->capture_default_str();
    cmd->add_option("--order", opt.order, "metric jet order (2..6)")
        ->capture_default_str();
    cmd->add_option("--k", opt.k, "deepest grad^k Riemann tested (needs order >= k+2)");
    cmd->add_option("--tol-rel", opt.tol_rel, "relative tolerance")
        ->capture_default_str();
    cmd->add_option("--tol-abs", opt.tol_abs, "absolute tolerance")
        ->capture_default_str();
    cmd->add_flag("--json", opt.json, "machine-readable report");
    cmd->add_flag("--force", opt.force,
                  "run the identity suite even off two-symmetric inputs");
    analysis.push_back(cmd);
  }

  CLI::App* catalog = app.add_subcommand("catalog", "built-in metric fixtures");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "list built-in metrics");
  CLI::App* emit = catalog->add_subcommand("emit", "print a metric file");
  std::string emit_name;
  emit->add_option("name", emit_name, "catalog metric name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (size_t i = 0; i < analysis.size(); ++i)
      if (analysis[i]->parsed()) return run_analysis(commands[i].first, opt);
    if (catalog->parsed())
      return emit->parsed() ? run_catalog_emit(emit_name) : run_catalog_list();
  } catch (const curv::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const curv::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const curv::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
