#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pentakit {

/// Fixed-size worker pool running statically chunked index ranges.
///
/// Work is split into chunks of `chunk` consecutive indices; every index is
/// processed by exactly one call of the body, so any body that writes only
/// to index-owned memory produces the same bytes for every worker count.
class Executor {
 public:
  explicit Executor(unsigned workers = 1, std::size_t chunk = 32);
  ~Executor();
  Executor(const Executor&) = delete;
  Executor& operator=(const Executor&) = delete;

  unsigned workers() const noexcept { return workers_; }
  std::size_t chunk() const noexcept { return chunk_; }

  /// Calls body(begin, end) over [0, count) in chunks. Blocks until done.
  /// The first exception thrown by any chunk is rethrown here.
  void for_chunks(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body) const;

  /// Same, with an explicit chunk size.
  void for_chunks(std::size_t count, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body) const;

  /// Shared single-threaded executor.
  static const Executor& serial();

 private:
  void worker_loop();

  unsigned workers_;
  std::size_t chunk_;
  std::vector<std::thread> threads_;

  mutable std::mutex mutex_;
  mutable std::condition_variable wake_;
  mutable std::condition_variable done_;
  mutable std::mutex submit_mutex_;
  mutable const std::function<void(std::size_t, std::size_t)>* body_ = nullptr;
  mutable std::size_t count_ = 0;
  mutable std::size_t job_chunk_ = 0;
  mutable std::size_t next_ = 0;
  mutable std::size_t active_ = 0;
  mutable unsigned long generation_ = 0;
  mutable std::exception_ptr error_;
  bool stop_ = false;
};

}  // namespace pentakit
