#include "uavsec/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace uavsec::kernels {

namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* pick_default() {
    if (const char* env = std::getenv("UAVSEC_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_backend();
        if (want == "avx2" && avx2_backend()) return avx2_backend();
        // "auto" or anything unrecognized falls through.
    }
    if (const Backend* simd = avx2_backend()) return simd;
    return &scalar_backend();
}

} // namespace

const Backend& active_backend() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        b = pick_default();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void set_backend(const Backend& backend) {
    g_active.store(&backend, std::memory_order_release);
}

bool select_backend(std::string_view name) {
    if (name == "scalar") {
        set_backend(scalar_backend());
        return true;
    }
    if (name == "avx2") {
        if (const Backend* b = avx2_backend()) {
            set_backend(*b);
            return true;
        }
        return false;
    }
    if (name == "auto") {
        set_backend(avx2_backend() ? *avx2_backend() : scalar_backend());
        return true;
    }
    return false;
}

} // namespace uavsec::kernels
