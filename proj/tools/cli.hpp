#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symsage::cli {

enum ExitCode : int {
    kSuccess = 0,
    kNegative = 1,  // verification failed, not SAGE, or no bound exists
    kUsage = 2,
    kNumerical = 3,
};

/// Runs one command line (args excludes the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symsage::cli
