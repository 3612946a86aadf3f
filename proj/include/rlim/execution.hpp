#pragma once

namespace rlim {

// Kernel selection: Parallel uses the OpenMP implementations, Serial the
// plain reference loops. Both must produce bit-identical output; tests and
// bench_kernels rely on that.
enum class Execution { Serial, Parallel };

}  // namespace rlim
