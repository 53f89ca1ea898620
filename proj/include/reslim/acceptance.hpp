#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace reslim::acceptance {

struct Result {
    std::string id;
    bool pass = false;
    std::string summary;
    nlohmann::json details;
    double seconds = 0.0;
};

/// A1 .. A10.
std::vector<std::string> ids();

/// Runs one criterion with its fixed sizes and seeds.
Result run(const std::string& id);

}  // namespace reslim::acceptance
