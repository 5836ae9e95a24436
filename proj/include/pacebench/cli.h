#ifndef PACEBENCH_CLI_H_
#define PACEBENCH_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace pacebench {

// Runs one subcommand (pace, bench, bd, report). |args| excludes the program
// name. Returns 0 on success, 1 for computation errors, 2 for usage and
// configuration errors and 3 when a child process or consumer fails. Errors
// also produce one "error: kind=<name> message=<text>" line on |err|.
int Dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pacebench

#endif  // PACEBENCH_CLI_H_
