#ifndef HPEZ_CLI_HPP
#define HPEZ_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace hpez::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// hpez {compress|decompress|evaluate|sweep|transfer-est} [flags]
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, const char *const *argv);

}  // namespace hpez::cli

#endif
