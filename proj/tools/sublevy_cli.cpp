#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sublevy/config.hpp"

namespace fs = std::filesystem;
using namespace sublevy;

namespace {

// 17 significant digits: doubles round-trip exactly.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  int threads = 1;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_format = true) {
  cmd->add_option("--config", opts.config_path, "experiment config file")
      ->required();
  cmd->add_option("--seed", opts.seed_override, "override the config seed");
  cmd->add_option("--out", opts.out_override, "override the output directory");
  cmd->add_option("--threads", opts.threads, "worker threads")
      ->check(CLI::PositiveNumber);
  if (with_format)
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

struct Loaded {
  ExperimentConfig config;
  std::uint64_t seed;
  fs::path out_dir;
};

Loaded load(const CommonOptions& opts) {
  Loaded l{ExperimentConfig::load(opts.config_path), 0, {}};
  l.seed = opts.seed_override ? *opts.seed_override : l.config.run.seed;
  l.out_dir = opts.out_override ? fs::path(*opts.out_override)
                                : fs::path(l.config.output.dir);
  return l;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::ios_base::failure("cannot create output directory: " +
                                 dir.string());
  std::ofstream out(dir / name, std::ios::binary);
  if (!out)
    throw std::ios_base::failure("cannot write output file: " +
                                 (dir / name).string());
  return out;
}

int cmd_exponent(const CommonOptions& opts, const std::vector<std::string>& us) {
  const Loaded l = load(opts);
  if (us.empty()) throw ConfigError("exponent: at least one --u is required");

  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream table;
  table << "u,re_rho,im_rho\n";
  for (const auto& text : us) {
    const Vector u = parse_probe(l.config.spec.base.layout, text);
    const Complex rho = subordinated_exponent(l.config.spec, u);
    table << '"' << text << "\"," << fmt17(rho.real()) << ','
          << fmt17(rho.imag()) << '\n';
    const Eigen::VectorXd flat = u.flat();
    rows.push_back({{"u", std::vector<double>(flat.data(), flat.data() + flat.size())},
                    {"re", rho.real()},
                    {"im", rho.imag()}});
  }
  if (opts.format == "json")
    std::cout << rows.dump(2) << "\n";
  else
    std::cout << table.str();
  if (opts.out_override || !l.config.output.dir.empty()) {
    if (opts.format == "json") {
      auto out = open_output(l.out_dir, "exponent.json");
      out << rows.dump(2) << "\n";
    } else {
      auto out = open_output(l.out_dir, "exponent.csv");
      out << table.str();
    }
  }
  return 0;
}

void write_draw_rows(std::ostream& out, long sample_id, const Vector& x) {
  for (int j = 0; j < x.d(); ++j)
    for (int k = 0; k < x.comp(j).size(); ++k)
      out << sample_id << ',' << j << ',' << k << ',' << fmt17(x.comp(j)(k))
          << '\n';
}

int cmd_simulate(const CommonOptions& opts) {
  const Loaded l = load(opts);
  const auto& run = l.config.run;

  if (run.grid) {
    // One file per path, header: t, component, coeff_index, value.
    for (long p = 0; p < run.samples; ++p) {
      char name[64];
      std::snprintf(name, sizeof(name), "path_%05ld.csv", p);
      auto out = open_output(l.out_dir, name);
      out << "t,component,coeff_index,value\n";
      Rng rng(l.seed, static_cast<std::uint64_t>(p));
      const std::vector<Vector> path =
          simulate_path(l.config.spec, *run.grid, rng);
      for (std::size_t k = 0; k < path.size(); ++k) {
        const double t = (*run.grid)[k];
        for (int j = 0; j < path[k].d(); ++j)
          for (int c = 0; c < path[k].comp(j).size(); ++c)
            out << fmt17(t) << ',' << j << ',' << c << ','
                << fmt17(path[k].comp(j)(c)) << '\n';
      }
    }
    std::cout << "wrote " << run.samples << " path file(s) to "
              << l.out_dir.string() << "\n";
    return 0;
  }

  auto out = open_output(l.out_dir, "draws.csv");
  out << "sample_id,component,coeff_index,value\n";
  const Eigen::MatrixXd draws = sample_X_matrix(
      l.config.spec, run.t, run.samples, l.seed, 0, opts.threads);
  for (long r = 0; r < draws.rows(); ++r)
    write_draw_rows(out, r,
                    Vector::from_flat(l.config.spec.base.layout, draws.row(r)));
  std::cout << "wrote " << draws.rows() << " draw(s) to "
            << (l.out_dir / "draws.csv").string() << "\n";
  return 0;
}

int cmd_verify(const CommonOptions& opts) {
  const Loaded l = load(opts);
  if (l.config.checks.empty())
    throw ConfigError("verify: the config has no checks");

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<VerificationReport> reports =
      run_checks(l.config, l.seed, opts.threads);
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  bool all_pass = true;
  nlohmann::json check_array = nlohmann::json::array();
  for (const auto& rep : reports) {
    check_array.push_back(rep.to_json());
    if (rep.skipped) {
      std::cout << "[SKIP] " << rep.check_id;
      for (const auto& note : rep.notes) std::cout << " | " << note;
      std::cout << "\n";
      continue;
    }
    all_pass = all_pass && rep.pass;
    std::cout << (rep.pass ? "[PASS] " : "[FAIL] ") << rep.check_id;
    if (!rep.pass)
      for (const auto& note : rep.notes) std::cout << " | " << note;
    std::cout << " (" << rep.runtime_seconds << "s)\n";
  }

  const nlohmann::json report{{"config", l.config.echo},
                              {"seed", l.seed},
                              {"threads", opts.threads},
                              {"checks", check_array},
                              {"total_runtime_seconds", total},
                              {"pass", all_pass}};
  auto out = open_output(l.out_dir, "report.json");
  out << report.dump(2) << "\n";
  std::cout << (all_pass ? "PASS" : "FAIL") << " (" << reports.size()
            << " checks, report: " << (l.out_dir / "report.json").string()
            << ")\n";
  return all_pass ? 0 : 1;
}

int cmd_classify(const CommonOptions& opts) {
  const Loaded l = load(opts);
  const IntegrabilityReport report = classify_integrability(l.config.spec);

  if (opts.format == "json") {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : report.components)
      comps.push_back({{"label", to_string(c.label)},
                       {"rule", c.governing_rule},
                       {"square_integrable", c.square_integrable()}});
    const nlohmann::json doc{{"components", comps},
                             {"x_integrable", to_string(report.x_integrable)},
                             {"x_mean_zero", to_string(report.x_mean_zero)},
                             {"x_square_integrable",
                              to_string(report.x_square_integrable)}};
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  for (std::size_t j = 0; j < report.components.size(); ++j) {
    const auto& c = report.components[j];
    std::cout << "component " << j << ": " << to_string(c.label) << "  ["
              << c.governing_rule << "]\n";
  }
  std::cout << "X integrable: " << to_string(report.x_integrable)
            << " | mean zero: " << to_string(report.x_mean_zero)
            << " | square integrable: " << to_string(report.x_square_integrable)
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sublevy: simulation and statistical verification of multivariate-"
      "subordinated Hilbert-space Levy processes"};
  app.require_subcommand(1);

  CommonOptions exponent_opts, simulate_opts, verify_opts, classify_opts;
  std::vector<std::string> probes;

  auto* exponent = app.add_subcommand(
      "exponent", "evaluate the Levy exponent rho(u) at probe vectors");
  add_common(exponent, exponent_opts);
  exponent->add_option("--u", probes,
                       "probe vector, components ';'-separated, coefficients "
                       "','-separated (repeatable)");

  auto* simulate =
      app.add_subcommand("simulate", "draw samples or paths of X to CSV");
  add_common(simulate, simulate_opts);

  auto* verify = app.add_subcommand(
      "verify", "run the configured verification battery and write a report");
  add_common(verify, verify_opts, /*with_format=*/false);

  auto* classify = app.add_subcommand(
      "classify", "print the integrability classification of the spec");
  add_common(classify, classify_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (exponent->parsed()) return cmd_exponent(exponent_opts, probes);
    if (simulate->parsed()) return cmd_simulate(simulate_opts);
    if (verify->parsed()) return cmd_verify(verify_opts);
    if (classify->parsed()) return cmd_classify(classify_opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
