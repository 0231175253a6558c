#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coco::cli {

enum ExitCode : int
{
    Ok = 0,
    UsageOrIo = 1,
    Inconsistent = 2,
    InputInvalid = 3,
};

/// `args` excludes the program name. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, char **argv);

}  // namespace coco::cli
