// Command-line experiment runner.
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ballslep/error.hpp"
#include "ballslep/experiment.hpp"

namespace ex = ballslep::experiment;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

ex::Json load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ex::ConfigError("--config", "cannot open '" + path + "'");
  ex::Json j = ex::Json::parse(f, nullptr, false, true);
  if (j.is_discarded()) throw ex::ConfigError("--config", "'" + path + "' is not valid JSON");
  if (!j.is_object()) throw ex::ConfigError("--config", "top level must be an object");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slepian concentration experiments on the unit ball"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-presets", "print the builtin presets");

  std::string preset;
  std::string config_path;
  std::string out_dir;
  int threads = -1;
  bool force = false;
  bool print_only = false;
  std::vector<std::string> sets;

  std::vector<CLI::App*> kinds;
  for (const char* name : {"spectrum", "shannon", "kernel-scan", "conjecture", "optics", "bounds", "verify"}) {
    auto* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
    sub->add_option("--preset", preset, "builtin preset name");
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)");
    sub->add_flag("--force", force, "lift the default problem-size limits");
    sub->add_option("--set", sets, "override a config key, e.g. --set basis.index=poly(10)");
    sub->add_flag("--print-config", print_only, "print the resolved config and exit");
    kinds.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (list->parsed()) {
    for (const auto& p : ex::presets())
      std::cout << p.name << "\t" << ex::to_string(p.config.kind) << "\t" << p.description << "\n";
    return kExitOk;
  }

  std::string kind_name;
  for (auto* k : kinds)
    if (k->parsed()) kind_name = k->get_name();

  try {
    const ex::Kind kind = ex::kind_from_string(kind_name);
    ex::Json cfg;
    if (!preset.empty()) {
      const auto& p = ex::find_preset(preset);
      if (p.config.kind != kind) {
        throw ex::ConfigError("--preset", "preset '" + preset + "' is a " + ex::to_string(p.config.kind) +
                                              " experiment, not " + kind_name);
      }
      cfg = ex::to_json(p.config);
    } else {
      cfg = {{"experiment", kind_name}};
    }
    if (!config_path.empty()) {
      const auto file = load_file(config_path);
      if (file.contains("experiment") && file.at("experiment") != kind_name)
        throw ex::ConfigError("experiment", "config file names a different experiment than the command");
      ex::merge_into(cfg, file);
    }
    for (const auto& s : sets) ex::apply_override(cfg, s);
    if (!out_dir.empty()) cfg["output"]["dir"] = out_dir;
    if (threads >= 0) cfg["numeric"]["threads"] = threads;
    cfg["experiment"] = kind_name;

    const auto config = ex::from_json(cfg);
    if (print_only) {
      std::cout << ex::to_json(config).dump(2) << "\n";
      return kExitOk;
    }
    const auto res = ex::run(config, force);
    for (const auto& f : res.files) std::cout << f.string() << "\n";
    return kExitOk;
  } catch (const ballslep::NumericalQualityError& e) {
    std::cerr << "ballslep: numerical quality abort: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ballslep::Error& e) {
    std::cerr << "ballslep: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "ballslep: internal error: " << e.what() << "\n";
    return 1;
  }
}
