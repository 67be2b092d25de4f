// Copyright 2026 The qstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSTREAM_CHANNEL_H
#define QSTREAM_CHANNEL_H

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>

namespace qstream {

/// Bounded multi-producer multi-consumer queue. push blocks while full;
/// pop blocks while empty and returns nullopt once closed and drained.
template <typename T>
class BoundedChannel {
   public:
    explicit BoundedChannel(size_t capacity) : capacity_(capacity ? capacity : 1) {
    }

    /// False if the channel was closed.
    bool push(T v) {
        std::unique_lock<std::mutex> lock(mu_);
        not_full_.wait(lock, [&] {
            return closed_ || q_.size() < capacity_;
        });
        if (closed_) {
            return false;
        }
        q_.push_back(std::move(v));
        if (q_.size() > high_) {
            high_ = q_.size();
        }
        not_empty_.notify_one();
        return true;
    }

    std::optional<T> pop() {
        std::unique_lock<std::mutex> lock(mu_);
        not_empty_.wait(lock, [&] {
            return closed_ || !q_.empty();
        });
        if (q_.empty()) {
            return std::nullopt;
        }
        T v = std::move(q_.front());
        q_.pop_front();
        not_full_.notify_one();
        return v;
    }

    void close() {
        std::lock_guard<std::mutex> lock(mu_);
        closed_ = true;
        not_full_.notify_all();
        not_empty_.notify_all();
    }

    size_t high_watermark() const {
        std::lock_guard<std::mutex> lock(mu_);
        return high_;
    }
    size_t capacity() const {
        return capacity_;
    }

   private:
    size_t capacity_;
    mutable std::mutex mu_;
    std::condition_variable not_full_, not_empty_;
    std::deque<T> q_;
    size_t high_ = 0;
    bool closed_ = false;
};

}  // namespace qstream

#endif
