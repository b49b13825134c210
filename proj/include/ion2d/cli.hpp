#pragma once

namespace ion2d {
namespace cli {

// exit codes: 0 ok, 2 config error, 3 numeric guard tripped, 4 I/O error
int run_cli(int argc, const char* const* argv);

}  // namespace cli
}  // namespace ion2d
