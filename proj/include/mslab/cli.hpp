#pragma once

#include <string>

namespace mslab {

// exit codes: 0 horizon reached / all checks pass, 1 error, 2 monitored
// breakdown. MSLAB_OUTPUT_ROOT overrides the root of relative output
// directories.
int cli_main(int argc, const char* const* argv);

int cmd_run(const std::string& config_path);
int cmd_verify(const std::string& suite);
int cmd_verify_seeded(const std::string& suite, unsigned seed);
int cmd_linearize(const std::string& config_path);

std::string resolve_output_dir(const std::string& configured);

} // namespace mslab
