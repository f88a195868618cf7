#include "linkwatch/core/parallel.hpp"

#include <omp.h>

namespace linkwatch {

void set_jobs(int jobs) { omp_set_num_threads(jobs < 1 ? 1 : jobs); }

int jobs() { return omp_get_max_threads(); }

}  // namespace linkwatch
