#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "cache.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "dirlab/error.hpp"

namespace fs = std::filesystem;
using dirlab::app::json;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kCompute = 2, kAcceptance = 3 };

struct Flag {
  const char* name;
  const char* field;
  const char* help;
  bool boolean = false;
};

const Flag kFlags[] = {
    {"--series", "series", "series descriptor: eta, chi:q:i, poly:c1,c2,..."},
    {"--k", "k", "moment orders, e.g. 1,2"},
    {"--alpha", "alpha", "weight exponents (list or grid)"},
    {"--unweighted", "unweighted", "include the unweighted moment", true},
    {"--sigma", "sigma", "sigma value(s) or grid lo:hi:step"},
    {"--T", "T", "moment horizons, e.g. geom:500:5000:10"},
    {"--t", "t", "ordinates, list or grid"},
    {"--step", "step", "t-grid spacing of moment scans"},
    {"--tol", "tol", "evaluation tolerance"},
    {"--x-max", "x_max", "upper limit of Riesz-kernel integrals"},
    {"--threshold", "threshold", "divergence threshold on the growth exponent"},
    {"--mu0", "mu0", "mu(0) override"},
    {"--sigma-L", "sigma_L", "sigma_L override"},
    {"--table", "table", "diagnose input: CSV path or 'lindelof'"},
    {"--cache-dir", "cache_dir", "cache directory (DIRLAB_CACHE wins)"},
    {"--output,-o", "output", "CSV output path"},
    {"--svg", "emit_svg", "write an SVG chart next to the output", true},
};

struct Sub {
  CLI::App* app = nullptr;
  std::string config;
  std::vector<std::pair<const Flag*, CLI::Option*>> opts;
  std::vector<std::string> values;
  std::vector<bool> switches;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc | std::ios::binary);
  out << text;
  if (!out.good()) throw dirlab::ConfigError("config field 'output': cannot write " + p.string());
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw dirlab::ConfigError("config file " + path + " cannot be opened");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw dirlab::ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

int run_sub(const std::string& name, Sub& sub) {
  json cfg = load_config(sub.config);
  for (std::size_t i = 0; i < sub.opts.size(); ++i) {
    const auto& [flag, opt] = sub.opts[i];
    if (opt->count() == 0) continue;
    if (flag->boolean) cfg[flag->field] = static_cast<bool>(sub.switches[i]);
    else cfg[flag->field] = sub.values[i];
  }
  const auto c = dirlab::app::ExperimentConfig::from_json(name, cfg);
  if (c.emit_svg && c.output.empty()) throw dirlab::ConfigError("config field 'emit_svg': needs an output path");
  const auto cache = dirlab::app::Cache::open(c.cache_dir);
  const auto out = dirlab::app::run_command(c, cache ? &*cache : nullptr);

  const bool text_only = name == "eval" || name == "diagnose";
  if (c.output.empty()) {
    if (text_only) {
      std::cout << out.text;
    } else {
      std::cout << out.csv;
      std::cerr << out.text;
    }
    return kOk;
  }
  const fs::path target(c.output);
  write_file(target, out.csv);
  fs::path stem = target;
  stem.replace_extension();
  for (const auto& [suffix, csv] : out.extra) write_file(stem.string() + suffix + ".csv", csv);
  if (c.emit_svg) write_file(stem.string() + ".svg", out.svg);
  std::cout << out.text;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirlab: Dirichlet series moments, abscissae and order-function experiments"};
  app.require_subcommand(1);

  const char* names[] = {"eval", "moments", "abscissa", "mu", "parseval", "diagnose"};
  const char* blurbs[] = {"pointwise values f(sigma + i t)",
                          "moment scans to CSV",
                          "sigma_k(alpha) and sigma_k tables to CSV",
                          "order-function profile to CSV",
                          "Parseval gap report",
                          "sequence checks and theorem pipeline"};
  std::vector<Sub> subs(std::size(names));
  for (std::size_t s = 0; s < subs.size(); ++s) {
    Sub& sub = subs[s];
    sub.app = app.add_subcommand(names[s], blurbs[s]);
    sub.app->add_option("--config", sub.config, "JSON config; flags override its fields");
    sub.values.resize(std::size(kFlags));
    sub.switches.resize(std::size(kFlags));
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      const Flag& f = kFlags[i];
      CLI::Option* o = nullptr;
      if (f.boolean) {
        o = sub.app->add_flag_function(
            f.name, [&sub, i](std::int64_t n) { sub.switches[i] = n > 0; }, f.help);
      } else {
        o = sub.app->add_option(f.name, sub.values[i], f.help);
      }
      sub.opts.emplace_back(&f, o);
    }
  }

  CLI::App* accept = app.add_subcommand("accept", "run the acceptance suite");
  std::vector<int> only;
  std::string scratch;
  accept->add_option("--only", only, "criterion ids to run")->delimiter(',');
  accept->add_option("--scratch", scratch, "scratch cache directory for the determinism check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (accept->parsed()) {
      dirlab::app::AcceptanceOptions opts;
      opts.only = {only.begin(), only.end()};
      opts.scratch = scratch;
      opts.on_result = [](const dirlab::app::CriterionResult& r) {
        std::cout << dirlab::app::format_result(r) << std::endl;
      };
      bool all = true;
      for (const auto& r : dirlab::app::run_acceptance(opts)) all = all && r.pass;
      return all ? kOk : kAcceptance;
    }
    for (std::size_t s = 0; s < subs.size(); ++s) {
      if (subs[s].app->parsed()) return run_sub(names[s], subs[s]);
    }
  } catch (const dirlab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const dirlab::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCompute;
  }
  return kInvalid;
}
