#include "heatlab/common.hpp"

#include <omp.h>

#include <cstdlib>

namespace heatlab {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HEATLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
}

void set_threads(int n) {
    omp_set_num_threads(resolve_threads(n));
}

}  // namespace heatlab
