#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace adme::cli {

/// Exit codes: 0 success, 1 error, 2 no solution / constraints violated,
/// 3 the autonomic run ended in a constraint error.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace adme::cli
