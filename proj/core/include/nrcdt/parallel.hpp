#pragma once

#include <cstddef>
#include <functional>

namespace nrcdt {

/// Worker count from NRCDT_THREADS; 0 or unset means hardware concurrency.
[[nodiscard]] std::size_t threads_from_env();

/// Runs body(i) for i in [0, n) on up to `threads` workers (0 = automatic).
/// Indices are handed out dynamically, so body must not depend on ordering.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace nrcdt
