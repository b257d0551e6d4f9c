#pragma once

#include <ostream>

namespace pswm::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsage = 1,
    kData = 2,
    kCheckFailure = 3,
};

/// Entry point shared by the `pswm` binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pswm::cli
