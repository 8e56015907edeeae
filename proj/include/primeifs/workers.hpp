#ifndef PRIMEIFS_WORKERS_HPP
#define PRIMEIFS_WORKERS_HPP

#include <cstddef>

namespace primeifs {

// Worker count from PRIME_IFS_THREADS, else hardware concurrency (at least 1).
std::size_t default_workers();

} // namespace primeifs

#endif // PRIMEIFS_WORKERS_HPP
