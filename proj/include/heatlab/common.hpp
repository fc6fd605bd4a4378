#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatlab {

using Vec = std::vector<double>;

// Error taxonomy used across the library.  The CLI maps these onto its
// exit-code contract: config/parameter problems -> 2, resource and
// resolution problems -> 3.  Invariant violations are ordinary data in
// reports, not exceptions.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_parameter(msg);
}

// Number of worker threads.  Resolution order: explicit argument,
// HEATLAB_THREADS environment variable, hardware default.
int resolve_threads(int requested = 0);
void set_threads(int n);

}  // namespace heatlab
