#pragma once

namespace nids {

/// Batch command-line entry point. Exit codes: 0 success, 1 usage or
/// configuration error, 2 data error, 3 model or training error.
int run_cli(int argc, const char* const* argv);

}  // namespace nids
