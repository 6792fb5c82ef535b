#pragma once

#include <ostream>

namespace ggmdir {

/// Entry point of the ggmdir executable. Returns 0 on success, 2 on invalid
/// input and 3 on numerical failure; messages name the failing stage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ggmdir
