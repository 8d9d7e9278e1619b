#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace curvlab {

/// Worker cap: CURVLAB_THREADS when set (>=1), otherwise hardware concurrency.
int thread_cap();

/// Runs fn(i) for i in [0, count) across worker threads. Exceptions are
/// rethrown on the calling thread (first one wins). Callers reduce results
/// from per-index storage in a fixed order, so parallelism never perturbs
/// output.
void parallel_for(int count, const std::function<void(int)>& fn);

/// FNV-1a 64-bit hash, hex-encoded; used to fingerprint configs in reports.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace curvlab
