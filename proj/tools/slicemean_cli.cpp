// Command-line front end. Links only the C API.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config/IO or
// module error.

#include "slicemean/slicemean.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitError = 2;

struct Options {
  std::string config_path;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  std::string csv_path;
  std::string svg_path;
  std::uint64_t slice_n = 0;
};

struct StringDeleter {
  void operator()(char* s) const { slm_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ConfigDeleter {
  void operator()(slm_config* c) const { slm_config_destroy(c); }
};
struct SweepDeleter {
  void operator()(slm_sweep* s) const { slm_sweep_destroy(s); }
};
struct ReportDeleter {
  void operator()(slm_report* r) const { slm_report_destroy(r); }
};

// Carries a failed status out of a subcommand.
struct Failure {
  slm_status status;
};

void check(slm_status status) {
  if (status != SLM_OK) throw Failure{status};
}

std::unique_ptr<slm_config, ConfigDeleter> load(const Options& opt) {
  slm_config* raw = nullptr;
  if (opt.config_path.empty()) {
    check(slm_config_parse("{}", &raw));
  } else {
    check(slm_config_load(opt.config_path.c_str(), &raw));
  }
  std::unique_ptr<slm_config, ConfigDeleter> cfg(raw);
  if (opt.seed) slm_config_set_seed(cfg.get(), *opt.seed);
  if (!opt.csv_path.empty()) slm_config_set_csv_path(cfg.get(), opt.csv_path.c_str());
  if (!opt.svg_path.empty()) slm_config_set_svg_path(cfg.get(), opt.svg_path.c_str());
  return cfg;
}

unsigned thread_count(const Options& opt) {
  if (opt.threads > 0) return opt.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_owned(char* s) {
  OwnedString owned(s);
  std::cout << owned.get();
  if (owned && *owned.get() && owned.get()[std::char_traits<char>::length(owned.get()) - 1] != '\n') {
    std::cout << '\n';
  }
}

int cmd_validate(const Options& opt) {
  auto cfg = load(opt);
  char* json = nullptr;
  check(slm_run_validate_json(cfg.get(), &json));
  print_owned(json);
  return kExitOk;
}

int cmd_slice(const Options& opt) {
  auto cfg = load(opt);
  char* json = nullptr;
  check(slm_run_slice_json(cfg.get(), opt.slice_n, thread_count(opt), &json));
  print_owned(json);
  return kExitOk;
}

int cmd_limit(const Options& opt) {
  auto cfg = load(opt);
  char* json = nullptr;
  check(slm_run_limit_json(cfg.get(), thread_count(opt), &json));
  print_owned(json);
  return kExitOk;
}

int cmd_sweep(const Options& opt) {
  auto cfg = load(opt);
  slm_sweep* raw = nullptr;
  check(slm_run_sweep(cfg.get(), thread_count(opt), &raw));
  std::unique_ptr<slm_sweep, SweepDeleter> sweep(raw);
  for (std::size_t i = 0; i < slm_sweep_note_count(sweep.get()); ++i) {
    std::cerr << "note: " << slm_sweep_note(sweep.get(), i) << '\n';
  }
  std::cerr << "limit (" << slm_sweep_limit_source(sweep.get()) << "): " << slm_sweep_limit_value(sweep.get())
            << '\n';
  const std::string csv_path = slm_config_csv_path(cfg.get());
  const std::string svg_path = slm_config_svg_path(cfg.get());
  if (csv_path.empty()) {
    char* csv = nullptr;
    check(slm_sweep_csv(sweep.get(), &csv));
    print_owned(csv);
  } else {
    check(slm_sweep_write_csv(sweep.get(), csv_path.c_str()));
  }
  if (!svg_path.empty()) check(slm_sweep_write_svg(sweep.get(), svg_path.c_str()));
  return kExitOk;
}

int cmd_verify(const Options& opt) {
  auto cfg = load(opt);
  slm_report* raw = nullptr;
  check(slm_run_verify(cfg.get(), thread_count(opt), &raw));
  std::unique_ptr<slm_report, ReportDeleter> report(raw);
  for (std::size_t i = 0; i < slm_report_check_count(report.get()); ++i) {
    slm_check c{};
    check(slm_report_check_get(report.get(), i, &c));
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << "  worst=" << c.worst_violation
              << " tol=" << c.tolerance << " trials=" << c.trials;
    if (c.detail && *c.detail) std::cerr << "  (" << c.detail << ')';
    std::cerr << '\n';
  }
  const std::string csv_path = slm_config_csv_path(cfg.get());
  if (csv_path.empty()) {
    char* json = nullptr;
    check(slm_report_json(report.get(), &json));
    print_owned(json);
  } else {
    check(slm_report_write_csv(report.get(), csv_path.c_str()));
  }
  return slm_report_all_passed(report.get()) ? kExitOk : kExitVerifyFailed;
}

int cmd_counterexample(const Options& opt) {
  auto cfg = load(opt);
  char* summary = nullptr;
  char* csv = nullptr;
  const std::string csv_path = slm_config_csv_path(cfg.get());
  check(slm_run_counterexample(cfg.get(), csv_path.empty() ? nullptr : csv_path.c_str(),
                               csv_path.empty() ? &csv : nullptr, &summary));
  if (csv) print_owned(csv);
  print_owned(summary);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine slices of high-dimensional spheres and their Gaussian limits"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "JSON configuration file");
  app.add_option("--threads", opt.threads, "Worker threads (default: hardware concurrency)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "RNG seed (overrides the config)");
  app.add_option("--csv", opt.csv_path, "CSV output path (overrides the config)");
  app.add_option("--svg", opt.svg_path, "SVG chart path for sweep (overrides the config)");

  struct Sub {
    CLI::App* app;
    int (*run)(const Options&);
  };
  auto* slice = app.add_subcommand("slice", "Geometry and slice means at one N");
  slice->add_option("--n", opt.slice_n, "Dimension N")->required()->check(CLI::PositiveNumber);
  const Sub subs[] = {
      {app.add_subcommand("validate", "Validate the problem and report z0, n_min, ranks"), cmd_validate},
      {slice, cmd_slice},
      {app.add_subcommand("limit", "Gaussian limit of the configured function"), cmd_limit},
      {app.add_subcommand("sweep", "Convergence sweep over the N schedule"), cmd_sweep},
      {app.add_subcommand("verify", "Run the invariant suite; exit 1 on any failure"), cmd_verify},
      {app.add_subcommand("counterexample", "Truncated integrals of the non-L^p counterexample"),
       cmd_counterexample},
  };
  // Global flags are accepted after the subcommand name too.
  for (const Sub& s : subs) s.app->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    for (const Sub& s : subs) {
      if (s.app->parsed()) return s.run(opt);
    }
  } catch (const Failure& f) {
    std::cerr << "error [" << slm_status_string(f.status) << "]: " << slm_last_error() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
