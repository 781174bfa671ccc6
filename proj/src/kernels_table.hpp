#pragma once

#include <cstddef>

namespace agmmh::kernels {

// Raw-pointer kernel signatures shared by all backends. The public span API
// in kernels.hpp validates sizes and forwards here.
struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  double (*max)(const double*, std::size_t);
  void (*add_scaled)(double*, double, const double*, std::size_t);
  void (*mul)(const double*, const double*, double*, std::size_t);
};

const KernelTable& scalar_table();

// Return nullptr when the backend is not compiled in or the CPU lacks the
// required features.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace agmmh::kernels
