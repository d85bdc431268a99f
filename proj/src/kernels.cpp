#include "qrob/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qrob::kern {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp

namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* g_active = nullptr;

const Ops* pick_default() {
  if (const char* env = std::getenv("QROB_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_ops() != nullptr) return avx2_ops();
  }
  if (const Ops* v = avx2_ops()) return v;
  return &scalar_ops();
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops* ops = cpu_has_avx2() ? avx2_ops_impl() : nullptr;
  return ops;
}

const Ops& active() {
  if (g_active == nullptr) g_active = pick_default();
  return *g_active;
}

bool set_active(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_active = &scalar_ops();
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (const Ops* v = avx2_ops()) {
      g_active = v;
      return true;
    }
    return false;
  }
  return false;
}

}  // namespace qrob::kern
