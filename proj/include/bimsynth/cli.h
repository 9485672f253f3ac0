#ifndef BIMSYNTH_CLI_H_
#define BIMSYNTH_CLI_H_

#include <filesystem>
#include <string>
#include <vector>

namespace bimsynth {

// Entry point for the `bimsynth` tool. Returns the process exit status;
// diagnostics go to stderr.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);  // args[0] = program

// Directory holding the bundled demo scene.
std::filesystem::path fixture_dir();

}  // namespace bimsynth

#endif  // BIMSYNTH_CLI_H_
