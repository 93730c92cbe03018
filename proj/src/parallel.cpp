#include "dofseg/parallel.hpp"

#include <cstdlib>
#include <string>

namespace dofseg {

unsigned thread_count()
{
    if (const char* env = std::getenv("DOFSEG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace dofseg
