#include "levyht/sample_path.hpp"

#include <charconv>
#include <sstream>

#include "levyht/errors.hpp"

namespace levyht {

namespace {

void check_time_grid(const std::vector<double>& times) {
    if (times.empty()) throw parameter_error("sample path: empty time grid");
    if (times.front() != 0.0) throw parameter_error("sample path: grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw parameter_error("sample path: times must be strictly increasing");
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

}  // namespace

void SamplePath::validate() const {
    check_time_grid(times);
    if (values.size() != times.size())
        throw parameter_error("sample path: times/values size mismatch");
}

void SamplePath2D::validate() const {
    check_time_grid(times);
    if (values1.size() != times.size() || values2.size() != times.size())
        throw parameter_error("sample path: times/values size mismatch");
}

std::string to_csv(const SamplePath& path) {
    std::string out = "time,value,is_jump\n";
    std::size_t j = 0;
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        append_double(out, path.times[i]);
        out.push_back(',');
        append_double(out, path.values[i]);
        out.push_back(',');
        const bool jump = j < path.jump_indices.size() && path.jump_indices[j] == i;
        if (jump) ++j;
        out.push_back(jump ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

std::string to_csv(const SamplePath2D& path) {
    std::string out = "time,value,value2,is_jump\n";
    std::size_t j1 = 0, j2 = 0;
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        append_double(out, path.times[i]);
        out.push_back(',');
        append_double(out, path.values1[i]);
        out.push_back(',');
        append_double(out, path.values2[i]);
        out.push_back(',');
        int mask = 0;
        if (j1 < path.jump_indices1.size() && path.jump_indices1[j1] == i) {
            mask |= 1;
            ++j1;
        }
        if (j2 < path.jump_indices2.size() && path.jump_indices2[j2] == i) {
            mask |= 2;
            ++j2;
        }
        out.push_back(static_cast<char>('0' + mask));
        out.push_back('\n');
    }
    return out;
}

}  // namespace levyht
