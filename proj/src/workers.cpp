#include "primeifs/workers.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace primeifs {

std::size_t default_workers()
{
    if (const char* env = std::getenv("PRIME_IFS_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1)
                return static_cast<std::size_t>(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace primeifs
