#ifndef LOCARAY_TOOLS_CLI_H_
#define LOCARAY_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace locaray::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFails = 1;
inline constexpr int kExitNoArray = 2;
inline constexpr int kExitCapacity = 3;
inline constexpr int kExitUsage = 64;

// Entry point shared by the binary and the tests. args[0] is the program name.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace locaray::cli

#endif  // LOCARAY_TOOLS_CLI_H_
