// Acceptance runner: one line per criterion, nonzero exit if any fails.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "reslim/acceptance.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> ids(argv + 1, argv + argc);
    if (ids.empty()) ids = reslim::acceptance::ids();
    int failed = 0;
    for (const auto& id : ids) {
        try {
            auto r = reslim::acceptance::run(id);
            std::printf("%-4s %s  %7.2fs  %s\n", id.c_str(), r.pass ? "PASS" : "FAIL", r.seconds, r.summary.c_str());
            if (!r.pass) ++failed;
        } catch (const std::exception& e) {
            std::printf("%-4s FAIL  error: %s\n", id.c_str(), e.what());
            ++failed;
        }
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, ids.size());
    return failed == 0 ? 0 : 1;
}
