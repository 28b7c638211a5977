#include "kgenfit/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace kgenfit::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops* select(const std::string& name) {
    if (name == "scalar") return &scalar_ops();
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2") {
        if (!avx2_available())
            throw std::invalid_argument("avx2 kernels requested but the CPU lacks AVX2/FMA");
        return &avx2_ops();
    }
#endif
    if (name == "avx2")
        throw std::invalid_argument("avx2 kernels are not built on this architecture");
    throw std::invalid_argument("unknown kernel implementation: " + name);
}

const Ops* default_ops() {
    if (const char* env = std::getenv("KGENFIT_KERNEL"); env && *env) return select(env);
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) return &avx2_ops();
#endif
    return &scalar_ops();
}

std::atomic<const Ops*>& active_slot() {
    static std::atomic<const Ops*> slot{default_ops()};
    return slot;
}

}  // namespace

const Ops& active_ops() { return *active_slot().load(std::memory_order_relaxed); }

void force_kernels(const std::string& name) {
    active_slot().store(name.empty() ? default_ops() : select(name),
                        std::memory_order_relaxed);
}

}  // namespace kgenfit::kernels
