#pragma once

namespace linkwatch {

// Worker count for the OpenMP kernels. Kernels write results by index, so
// outputs do not depend on this value.
void set_jobs(int jobs);
int jobs();

}  // namespace linkwatch
