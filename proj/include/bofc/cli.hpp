#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bofc {

/// Entry point behind the `bofc` binary. Exit codes: 0 on success or a
/// passing verdict, 1 on a failing verdict or computation error, 2 on usage
/// or input parse errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bofc
