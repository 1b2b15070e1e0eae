#pragma once

#include <cstddef>
#include <memory>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace rsapi {

/// Runs index-parallel loops on a fixed number of worker threads.
///
/// Loop bodies must write only to per-index slots; that (plus per-task RNG
/// streams) is what keeps results independent of the thread count.
class Executor {
 public:
  explicit Executor(std::size_t threads = 1)
      : threads_(threads == 0 ? 1 : threads) {
    if (threads_ > 1) {
      // Lift TBB's default cap (the core count) so the requested threads exist
      // even when they oversubscribe the machine.
      limit_ = std::make_unique<tbb::global_control>(
          tbb::global_control::max_allowed_parallelism, threads_);
      arena_ = std::make_unique<tbb::task_arena>(static_cast<int>(threads_));
    }
  }

  std::size_t threads() const noexcept { return threads_; }

  template <class Fn>
  void for_each_index(std::size_t count, Fn&& fn) const {
    if (!arena_ || count < 2) {
      for (std::size_t i = 0; i < count; ++i) fn(i);
      return;
    }
    arena_->execute([&] {
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, count),
                        [&](const tbb::blocked_range<std::size_t>& r) {
                          for (std::size_t i = r.begin(); i != r.end(); ++i) fn(i);
                        });
    });
  }

 private:
  std::size_t threads_;
  std::unique_ptr<tbb::global_control> limit_;
  std::unique_ptr<tbb::task_arena> arena_;
};

}  // namespace rsapi
