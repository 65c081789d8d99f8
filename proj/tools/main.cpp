#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "corner/corner.h"

namespace {

int report(corner_status st) {
  if (st == CORNER_OK) return 0;
  std::fprintf(stderr, "cornerctl: %s\n", corner_last_error());
  switch (st) {
    case CORNER_VERIFY_FAILED: return 1;
    case CORNER_USAGE_ERROR:
    case CORNER_IO_ERROR: return 2;
    default: return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corner process experiments: edge, bulk, bead, verify, sample"};
  app.set_version_flag("--version", std::string(corner_version()));

  std::optional<std::string> command;
  std::optional<std::string> config_path;
  std::vector<std::pair<std::string, std::optional<std::string>>> flags = {
      {"n", {}},      {"k-levels", {}}, {"ell", {}},   {"beta", {}},  {"dist", {}},
      {"energy", {}}, {"window", {}},   {"trials", {}}, {"steps", {}}, {"seed", {}},
      {"out", {}},    {"format", {}},   {"side", {}},  {"engine", {}},
  };
  app.add_option("command", command, "edge | bulk | bead | verify | sample");
  app.add_option("--config", config_path, "key = value file; flags override it");
  for (auto& [name, slot] : flags) app.add_option("--" + name, slot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : 2;
  }

  corner_config* cfg = nullptr;
  if (int rc = report(corner_config_create(&cfg))) return rc;
  int rc = 0;
  if (config_path) rc = report(corner_config_load_file(cfg, config_path->c_str()));
  if (rc == 0 && command) rc = report(corner_config_set(cfg, "command", command->c_str()));
  for (const auto& [name, slot] : flags) {
    if (rc != 0) break;
    if (slot) rc = report(corner_config_set(cfg, name.c_str(), slot->c_str()));
  }
  if (rc == 0 && !command && !config_path) {
    std::fprintf(stderr, "cornerctl: command: missing (edge, bulk, bead, verify or sample)\n");
    rc = 2;
  }
  if (rc == 0) rc = report(corner_execute(cfg, 0));
  corner_config_destroy(cfg);
  return rc;
}
