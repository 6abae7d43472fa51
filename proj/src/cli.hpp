#ifndef GTLC_CLI_HPP
#define GTLC_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace gtlc::cli {

// Exit codes: 0 success, 2 static type error, 3 runtime cast/germ error,
// 4 other runtime error, 64 usage error.
int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace gtlc::cli

#endif
