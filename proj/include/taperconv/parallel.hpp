#pragma once

namespace taperconv {

// Worker count for parallel kernels: `requested` when positive, otherwise
// TAPERCONV_THREADS when set to a positive value, otherwise the OpenMP
// default.
int resolve_thread_count(int requested = 0);

} // namespace taperconv
