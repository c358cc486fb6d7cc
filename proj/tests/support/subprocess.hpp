#pragma once

// Minimal subprocess capture for CLI tests.

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace testutil {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

inline RunResult run(const std::string& command) {
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    RunResult res{-1, {}};
    if (!pipe) return res;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

}  // namespace testutil
