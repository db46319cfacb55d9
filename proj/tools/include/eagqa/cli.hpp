//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_CLI_HPP_
#define EAGQA_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace eagqa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;

// Runs one subcommand. args excludes the program name. Results go to out,
// diagnostics (one JSON object per line) to err. Failures return the exit
// code of the error's family; malformed command lines return kExitUsage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eagqa::cli

#endif  // EAGQA_CLI_HPP_
