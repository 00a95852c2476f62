// tnum: command-line front end for the translation-number toolkit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "tnum/run.hpp"

namespace {

const std::map<std::string, std::string> kDescriptions = {
    {"rot-local", "translation number rot_x(g) along one orbit"},
    {"rot-mean", "mean translation number against an invariant measure"},
    {"rot-homovec", "translation number from the homological vector of an isotopy"},
    {"gk-eval", "Gal-Kedra cocycle at one point, closed form and quadrature"},
    {"gk-check", "coboundary and cocycle residuals over random draws"},
    {"split-check", "additivity of the mean translation number on a generated group"},
    {"seminorm", "sup-norm of rho over the torus"},
    {"distortion-cert", "lower bound on the stable word length"},
    {"word-norm", "exact word norms in a finitely generated affine group"},
    {"seifert-class", "fiber class homomorphism of a Seifert manifold"},
    {"sweep", "evaluate a base config over a parameter grid"},
};

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iterations;
  std::optional<std::size_t> grid;
  std::string format = "table";
  std::string out;
};

nlohmann::json read_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw tnum::ValidationError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw tnum::ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

int execute(const std::string& command, const Flags& flags) {
  using namespace tnum::cli;
  Format format;
  RunConfig config;
  try {
    format = parse_format(flags.format);
    Overrides ov{flags.seed, flags.tolerance, flags.max_iterations, flags.grid};
    config = load_config(read_config(flags.config_path), command, ov);
  } catch (const tnum::Error& e) {
    std::cerr << "tnum " << command << ": " << to_string(e.kind()) << " error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }

  const Report report = run(config);
  const std::string text = render(report, format);
  if (flags.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(flags.out);
    if (!os || !(os << text)) {
      std::cerr << "tnum " << command << ": cannot write '" << flags.out << "'\n";
      return kExitValidation;
    }
  }
  if (report.payload.contains("error")) {
    std::cerr << "tnum " << command << ": " << report.payload["error"]["kind"].get<std::string>()
              << " error: " << report.payload["error"]["message"].get<std::string>() << '\n';
  }
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translation numbers of bundle automorphisms over tori"};
  app.set_version_flag("--version", std::string(TNUM_VERSION));
  app.require_subcommand(1);

  Flags flags;
  std::string chosen;
  for (const auto& name : tnum::cli::commands()) {
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "random seed (overrides the config)");
    sub->add_option("--tolerance", flags.tolerance, "convergence tolerance");
    sub->add_option("--max-iterations", flags.max_iterations, "iteration cap");
    sub->add_option("--grid", flags.grid, "grid resolution or quadrature points per axis");
    sub->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"table", "record", "csv"}));
    sub->add_option("--out", flags.out, "write the report here instead of stdout");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return tnum::cli::kExitValidation;
  }

  try {
    return execute(chosen, flags);
  } catch (const std::exception& e) {
    std::cerr << "tnum: internal error: " << e.what() << '\n';
    return tnum::cli::kExitInternal;
  }
}
