#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sobex {

/// Worker count: hardware concurrency, capped by the SOBEX_THREADS env var.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Chunks are contiguous, so any per-index
/// output written by body is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation; the order is fixed by the input layout.
double pairwise_sum(std::span<const double> values);

/// Evaluates f on [0, n) in parallel and reduces with pairwise_sum.
double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& f);

}  // namespace sobex
