#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace conelab {

/// Worker count used by sweeps and reductions (default 1).
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, count) on the worker pool.  Bodies write only to
/// their own slot i; reducing the slots afterwards in index order keeps the
/// result independent of the thread count.  The first exception is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Sum of values in a fixed pairwise-tree order.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace conelab
