#include "mmslab/kernels.hpp"

#include <cstdlib>

namespace mmslab::kernels {

const Impl& active() {
  static const Impl* chosen = [] {
    const char* force = std::getenv("MMSLAB_FORCE_SCALAR");
    if (force && force[0] == '1') return &scalar();
    if (const Impl* v = avx2()) return v;
    return &scalar();
  }();
  return *chosen;
}

}  // namespace mmslab::kernels
