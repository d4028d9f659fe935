#include "beurlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace beurlab {

unsigned thread_cap() {
    const char* env = std::getenv("BEURLAB_THREADS");
    if (env && *env) {
        try {
            const long v = std::stol(env);
            return v <= 1 ? 1u : static_cast<unsigned>(v);
        } catch (const std::exception&) {
            return 1u;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

}  // namespace beurlab
