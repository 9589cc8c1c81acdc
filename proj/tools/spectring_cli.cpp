#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectring/experiment.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t workers = 0;
};

void add_common(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config_path, "JSON config file");
  app->add_option("--out", flags.out, "output file (stdout when omitted)");
  app->add_option("--format", flags.format, "csv or json");
  app->add_option("--seed", flags.seed, "RNG seed")
      ->each([&](const std::string&) { flags.seed_set = true; });
  app->add_option("--workers", flags.workers, "Monte Carlo worker threads");
}

int dispatch(const std::string& subcommand, const CommonFlags& flags,
             const json& extra) {
  json body = json::object();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      std::cerr << json{{"error", "validation"},
                        {"message",
                         "cannot open config file " + flags.config_path}}
                       .dump()
                << '\n';
      return 2;
    }
    try {
      in >> body;
    } catch (const json::exception& e) {
      std::cerr << json{{"error", "validation"}, {"message", e.what()}}.dump()
                << '\n';
      return 2;
    }
  }
  // Flag overrides win over the config file.
  for (const auto& item : extra.items())
    body[item.key()] = item.value();
  if (flags.seed_set)
    body["seed"] = flags.seed;
  if (!flags.out.empty())
    body["out"] = flags.out;
  if (!flags.format.empty())
    body["format"] = flags.format;
  if (flags.workers > 0)
    body["workers"] = flags.workers;

  spectring::ExperimentConfig cfg{subcommand, body};
  return spectring::run(cfg, std::cout, std::cerr);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectring: spectra of generalized second-order operators "
               "built from nearest-neighbor walks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", spectring::version_string);

  struct Sub {
    CLI::App* app = nullptr;
    CommonFlags flags;
    json extra = json::object();
  };

  Sub eig, converge, count, anneal, psi;

  eig.app = app.add_subcommand("eig", "eigenvalues of a model string");
  add_common(eig.app, eig.flags);
  {
    auto& e = eig.extra;
    eig.app->add_option_function<std::string>(
        "--model", [&e](const std::string& v) { e["model"] = v; });
    eig.app->add_option_function<std::size_t>(
        "--n", [&e](std::size_t v) { e["n"] = v; });
    eig.app->add_option_function<std::size_t>(
        "--k", [&e](std::size_t v) { e["k"] = v; });
    eig.app->add_option_function<std::string>(
        "--bc", [&e](const std::string& v) { e["bc"] = v; });
    eig.app->add_option_function<double>(
        "--alpha", [&e](double v) { e["alpha"] = v; });
    eig.app->add_option_function<double>(
        "--epsilon", [&e](double v) { e["epsilon"] = v; });
    eig.app->add_option_function<std::string>(
        "--string", [&e](const std::string& v) { e["string"] = v; });
    eig.app->add_option_function<std::string>(
        "--rates", [&e](const std::string& v) { e["rates"] = v; });
    eig.app->add_option_function<double>(
        "--gauge", [&e](double v) { e["gauge"] = v; });
  }

  converge.app =
      app.add_subcommand("converge", "eigenvalue convergence across n");
  add_common(converge.app, converge.flags);
  {
    auto& e = converge.extra;
    converge.app->add_option_function<std::string>(
        "--model", [&e](const std::string& v) { e["model"] = v; });
    converge.app->add_option_function<std::size_t>(
        "--k", [&e](std::size_t v) { e["k"] = v; });
    converge.app->add_option_function<std::vector<std::size_t>>(
        "--n-list", [&e](const std::vector<std::size_t>& v) {
          e["n_list"] = v;
        });
    converge.app->add_option_function<double>(
        "--alpha", [&e](double v) { e["alpha"] = v; });
    converge.app->add_option_function<double>(
        "--epsilon", [&e](double v) { e["epsilon"] = v; });
  }

  count.app = app.add_subcommand(
      "count", "Dirichlet/Neumann counting functions and bracketing");
  add_common(count.app, count.flags);
  {
    auto& e = count.extra;
    count.app->add_option_function<std::string>(
        "--model", [&e](const std::string& v) { e["model"] = v; });
    count.app->add_option_function<std::size_t>(
        "--n", [&e](std::size_t v) { e["n"] = v; });
    count.app->add_option_function<double>(
        "--alpha", [&e](double v) { e["alpha"] = v; });
    count.app->add_option_function<std::string>(
        "--string", [&e](const std::string& v) { e["string"] = v; });
    count.app->add_option_function<std::vector<double>>(
        "--cuts", [&e](const std::vector<double>& v) { e["cuts"] = v; });
    count.app->add_option_function<std::vector<double>>(
        "--x-grid", [&e](const std::vector<double>& v) { e["x_grid"] = v; });
  }

  anneal.app =
      app.add_subcommand("anneal", "annealed eigenvalue counting exponent");
  add_common(anneal.app, anneal.flags);
  {
    auto& e = anneal.extra;
    anneal.app->add_option_function<std::string>(
        "--model", [&e](const std::string& v) { e["model"] = v; });
    anneal.app->add_option_function<double>(
        "--alpha", [&e](double v) { e["alpha"] = v; });
    anneal.app->add_option_function<std::size_t>(
        "--samples", [&e](std::size_t v) { e["samples"] = v; });
    anneal.app->add_option_function<double>(
        "--epsilon", [&e](double v) { e["epsilon"] = v; });
    anneal.app->add_option_function<std::string>(
        "--mode", [&e](const std::string& v) { e["mode"] = v; });
  }

  psi.app = app.add_subcommand("psi", "psi(ell, lambda) table");
  add_common(psi.app, psi.flags);
  {
    auto& e = psi.extra;
    psi.app->add_option_function<std::string>(
        "--model", [&e](const std::string& v) { e["model"] = v; });
    psi.app->add_option_function<std::size_t>(
        "--n", [&e](std::size_t v) { e["n"] = v; });
    psi.app->add_option_function<double>(
        "--alpha", [&e](double v) { e["alpha"] = v; });
    psi.app->add_option_function<std::string>(
        "--string", [&e](const std::string& v) { e["string"] = v; });
    psi.app->add_option_function<std::vector<double>>(
        "--lambda-grid",
        [&e](const std::vector<double>& v) { e["lambda_grid"] = v; });
  }

  CLI11_PARSE(app, argc, argv);

  for (Sub* sub : {&eig, &converge, &count, &anneal, &psi})
    if (sub->app->parsed())
      return dispatch(sub->app->get_name(), sub->flags, sub->extra);
  return 2;
}
