#pragma once

#include <functional>

namespace mtdsim {

// Worker-count control for the OpenMP kernels. 0 selects the hardware
// default; 1 forces the serial reference path. Results are identical either
// way because every loop iteration owns an independent RNG stream.
void set_max_threads(int n);
int max_threads();
bool openmp_enabled();

// Runs f(i) for i in [0, n). Parallel when OpenMP is available and the
// configured thread count allows it; plain loop otherwise.
void parallel_for(int n, const std::function<void(int)>& f);

// Serial reference implementation, kept for testing and benchmarking
// against the parallel path.
void serial_for(int n, const std::function<void(int)>& f);

}  // namespace mtdsim
