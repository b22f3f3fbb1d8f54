#ifndef MOREAUW2_PARALLEL_HPP
#define MOREAUW2_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace mw2 {

// Worker count for independent sweep rows: min(hardware, MOREAU_W2_THREADS).
std::size_t worker_count(std::size_t jobs);

// Runs fn(i) for i in [0, jobs) on up to worker_count(jobs) threads. Results
// must be written to preallocated slots; the first exception is rethrown.
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mw2

#endif
