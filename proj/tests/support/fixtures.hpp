#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace provcurate::fuzz {

inline std::string read_fixture(const std::string& name)
{
    std::ifstream in(std::string(PROVCURATE_FIXTURES) + "/" + name);
    if (!in) {
        throw std::runtime_error("missing fixture " + name);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace provcurate::fuzz
