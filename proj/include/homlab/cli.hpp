#ifndef HOMLAB_CLI_HPP
#define HOMLAB_CLI_HPP

#include <string>
#include <vector>

namespace homlab {

/// Entry point behind the homlab binary. Exit codes: 0 success/affirmative,
/// 1 negative finding (no homomorphism, not certified), 2 usage or input
/// error.
int cli_dispatch(int argc, const char* const* argv);

/// Convenience overload for tests; args excludes the program name.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace homlab

#endif  // HOMLAB_CLI_HPP
