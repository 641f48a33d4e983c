#pragma once

// The `cptree` command-line surface.
//
// Exit codes: 0 success, 1 domain error (message from the failing module on
// stderr), 2 usage error.

#include <iosfwd>
#include <string>
#include <vector>

namespace cptree {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

/// CSV behind figure 1 (E{log2 ln f}, E{H}, n = 2..20), 2 (E{f}, n = 2..10)
/// or 3 (V{f}, n = 2..10), for the three distinct models.
void write_figure_csv(int which, std::ostream& out);

}  // namespace cptree
