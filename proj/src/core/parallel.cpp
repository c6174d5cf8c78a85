#include "pentakit/parallel.hpp"

#include <algorithm>

namespace pentakit {

Executor::Executor(unsigned workers, std::size_t chunk)
    : workers_(std::max(1u, workers)), chunk_(std::max<std::size_t>(1, chunk)) {
  for (unsigned i = 1; i < workers_; ++i) threads_.emplace_back([this] { worker_loop(); });
}

Executor::~Executor() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

const Executor& Executor::serial() {
  static const Executor instance(1);
  return instance;
}

void Executor::for_chunks(std::size_t count,
                          const std::function<void(std::size_t, std::size_t)>& body) const {
  for_chunks(count, chunk_, body);
}

void Executor::for_chunks(std::size_t count, std::size_t chunk,
                          const std::function<void(std::size_t, std::size_t)>& body) const {
  if (count == 0) return;
  chunk = std::max<std::size_t>(1, chunk);
  if (threads_.empty() || count <= chunk) {
    for (std::size_t b = 0; b < count; b += chunk) body(b, std::min(count, b + chunk));
    return;
  }

  std::lock_guard<std::mutex> submit(submit_mutex_);
  std::unique_lock<std::mutex> lock(mutex_);
  body_ = &body;
  count_ = count;
  job_chunk_ = chunk;
  next_ = 0;
  active_ = threads_.size() + 1;
  error_ = nullptr;
  ++generation_;
  lock.unlock();
  wake_.notify_all();

  // The calling thread participates.
  for (;;) {
    lock.lock();
    const std::size_t b = next_;
    if (b >= count_) break;
    next_ = b + job_chunk_;
    lock.unlock();
    try {
      body(b, std::min(count, b + chunk));
    } catch (...) {
      lock.lock();
      if (!error_) error_ = std::current_exception();
      next_ = count_;
      lock.unlock();
    }
  }
  --active_;
  done_.wait(lock, [this] { return active_ == 0; });
  body_ = nullptr;
  std::exception_ptr err = error_;
  error_ = nullptr;
  lock.unlock();
  if (err) std::rethrow_exception(err);
}

void Executor::worker_loop() {
  unsigned long seen = 0;
  std::unique_lock<std::mutex> lock(mutex_);
  for (;;) {
    wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
    if (stop_) return;
    seen = generation_;
    for (;;) {
      const std::size_t b = next_;
      if (b >= count_) break;
      next_ = b + job_chunk_;
      const std::size_t e = std::min(count_, b + job_chunk_);
      const auto* body = body_;
      lock.unlock();
      try {
        (*body)(b, e);
      } catch (...) {
        lock.lock();
        if (!error_) error_ = std::current_exception();
        next_ = count_;
        lock.unlock();
      }
      lock.lock();
    }
    if (--active_ == 0) done_.notify_all();
  }
}

}  // namespace pentakit
