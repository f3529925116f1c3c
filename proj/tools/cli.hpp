#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dcr::cli {

/// Exit statuses: 0 success, 1 domain failure (validation error, rejected
/// run, failing step), 2 usage, I/O or parse failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dcr::cli
