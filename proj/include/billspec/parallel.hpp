#pragma once

namespace billspec {

/// Every data-parallel kernel has a serial reference path and an OpenMP
/// path. Both reduce partial results in a fixed order, so they return
/// bit-identical values for the same inputs.
enum class Execution { Serial, Parallel };

/// Threads used by the OpenMP paths; 0 means the OpenMP default.
void set_thread_count(int n);
int thread_count();

}  // namespace billspec
