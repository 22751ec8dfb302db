#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace levyht {

// One realized trajectory on an increasing time grid. Jump epochs are part
// of the grid and recorded in jump_indices; values are right limits, so
// values[jump_indices[k]] already includes that jump.
struct SamplePath {
    std::vector<double> times;
    std::vector<double> values;
    double dt = 0.0;  // base Euler step (0 for purely event-driven paths)
    std::vector<std::size_t> jump_indices;

    std::size_t size() const { return times.size(); }
    double terminal() const { return values.back(); }
    void validate() const;
};

// Two coordinates sharing one time grid (the union of both coordinates'
// jump epochs and the Euler grid).
struct SamplePath2D {
    std::vector<double> times;
    std::vector<double> values1;
    std::vector<double> values2;
    double dt = 0.0;
    std::vector<std::size_t> jump_indices1;
    std::vector<std::size_t> jump_indices2;

    std::size_t size() const { return times.size(); }
    void validate() const;
};

// CSV with columns time,value,is_jump (1-D) or time,value,value2,is_jump.
// For 2-D paths is_jump is a bitmask: bit 0 = coordinate 1, bit 1 = coordinate 2.
std::string to_csv(const SamplePath& path);
std::string to_csv(const SamplePath2D& path);

}  // namespace levyht
