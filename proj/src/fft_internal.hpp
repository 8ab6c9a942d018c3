#pragma once

#include <mutex>

namespace qrad::detail {

// FFTW planning is not thread-safe; every plan is created under this lock.
std::mutex& fft_planner_mutex();

}  // namespace qrad::detail
