#pragma once

#include <string>

#include "levyht/errors.hpp"

namespace levyht {

// One of the four worlds {00, 01, 10, 11}; i indexes coordinate 1,
// j coordinate 2, digit 1 = signal present.
struct WorldIndex {
    int i = 0;
    int j = 0;

    void validate() const {
        if ((i != 0 && i != 1) || (j != 0 && j != 1))
            throw parameter_error("world index digits must be 0 or 1");
    }
    std::string label() const { return std::string(1, char('0' + i)) + char('0' + j); }
    bool operator==(const WorldIndex&) const = default;
};

}  // namespace levyht
