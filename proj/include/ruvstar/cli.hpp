#ifndef RUVSTAR_CLI_HPP
#define RUVSTAR_CLI_HPP

namespace ruvstar {

// Full command-line surface. Returns the process exit code:
// 0 ok, 2 malformed input or usage, 3 model or numerical failure.
int run_cli(int argc, char** argv);

}  // namespace ruvstar

#endif  // RUVSTAR_CLI_HPP
