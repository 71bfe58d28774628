#ifndef BOUNDPOP_CLI_HPP
#define BOUNDPOP_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace boundpop::cli {

// Runs one invocation; args excludes the program name. Returns the exit
// status: 0 on success, 1 on input or estimation failure, 2 on usage errors.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace boundpop::cli

#endif
