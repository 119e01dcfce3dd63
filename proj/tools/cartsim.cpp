#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cart/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cartsim - CAR T-cell / leukemia / B-cell dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<double> rel_tol, abs_tol;

  app.add_option("--config", config_path, "JSON configuration (comments allowed)")->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory");
  app.add_option("--set", sets, "Override one key, e.g. --set I0=2e9 --set pawn.n_conditional=200")
      ->take_all()
      ->allow_extra_args(false);
  app.add_option("--seed", seed, "Random seed for the sensitivity analysis");
  app.add_option("--workers", workers, "Worker threads for sweeps and sensitivity (0: all cores)");
  app.add_option("--rel-tol", rel_tol, "Relative integration tolerance");
  app.add_option("--abs-tol", abs_tol, "Absolute integration tolerance (cells)");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"simulate", "Integrate one trajectory"},
      {"equilibria", "Equilibria, eigenvalues and region"},
      {"region", "Region map over I0 and tau_C rho_C"},
      {"sweep", "Peak surface over a two-parameter grid"},
      {"peaks", "Successive maxima of the leukemic population"},
      {"pawn", "PAWN sensitivity indices of the peak outputs"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cart::kExitConfig;
  }

  cart::RunConfig config;
  try {
    std::string text;
    cart::Json doc = cart::Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        std::cerr << "i/o error: cannot read '" << config_path << "'\n";
        return cart::kExitIo;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      text = buf.str();
      doc = cart::parse_config_text(text, config_path);
    }
    for (const auto& s : sets) cart::apply_override(doc, s);
    if (!doc.is_object()) throw cart::ConfigError(config_path, "configuration root must be an object");
    doc["command"] = app.get_subcommands().front()->get_name();
    if (out) doc["out"] = *out;
    if (seed) doc["seed"] = *seed;
    if (workers) doc["workers"] = *workers;
    if (rel_tol) doc["integration"]["rel_tol"] = *rel_tol;
    if (abs_tol) doc["integration"]["abs_tol"] = *abs_tol;
    config = cart::resolve_config(doc, config_path.empty() ? std::string("--set") : config_path, text);
  } catch (const cart::RangeError& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return cart::kExitRange;
  } catch (const cart::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cart::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cart::kExitConfig;
  } catch (const cart::Json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cart::kExitConfig;
  }
  return cart::run(config, std::cerr);
}
