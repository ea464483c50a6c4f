#pragma once

namespace expderiv {

// Command-line front-end. Returns the process exit code: 0 on success,
// 1 when a computation ran but the verdict was negative, 2 on input errors.
int run_cli(int argc, const char* const* argv);

}  // namespace expderiv
