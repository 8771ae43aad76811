#pragma once

#include <functional>

// Internal work-sharing helper. thread_budget() is part of the public
// experiments interface; the loop runner is library-internal.

namespace corrqec {

int thread_budget();

namespace detail {

// Runs fn(0..n-1) on up to thread_budget() workers. Tasks must be
// independent; any callee exception is rethrown on the calling thread.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace detail
}  // namespace corrqec
