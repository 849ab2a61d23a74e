#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "heightlab/error.hpp"
#include "heightlab/harness.hpp"

namespace hh = heightlab::harness;

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw heightlab::Error(heightlab::ErrorCode::ConfigInvalid, "cannot write " + path.string());
  out << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heights, twisted heights and exceptional sets over number fields"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  unsigned precision = 0, jobs = 1;
  for (const auto& name : hh::commands()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--precision", precision, "decimal digits (default: config value or 40)");
    sub->add_option("--jobs", jobs, "worker threads for enumeration")->check(CLI::Range(1u, 256u));
    sub->add_option("--out", out_dir, "directory for <command>.json and <command>.csv");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    hh::RunOptions opt;
    opt.precision = precision;
    opt.jobs = jobs;
    hh::RunResult res = hh::run_experiment(command, hh::load_config(config_path), opt);
    const std::string text = hh::render(res.report);
    if (out_dir.empty()) {
      std::cout << text;
    } else {
      std::filesystem::create_directories(out_dir);
      write_file(std::filesystem::path(out_dir) / (command + ".json"), text);
      if (!res.csv.empty()) write_file(std::filesystem::path(out_dir) / (command + ".csv"), res.csv);
    }
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
