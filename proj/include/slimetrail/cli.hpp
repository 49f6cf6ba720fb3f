#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slimetrail::cli {

// Runs one `slimetrail` invocation. `args` excludes the program name.
// Returns 0 on success, 1 on a domain failure (bad input, disagreement,
// exhausted budget, failing scenario) and 2 on a usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace slimetrail::cli
