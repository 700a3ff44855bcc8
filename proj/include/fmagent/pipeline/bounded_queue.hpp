#ifndef FMAGENT_PIPELINE_BOUNDED_QUEUE_HPP
#define FMAGENT_PIPELINE_BOUNDED_QUEUE_HPP

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <stdexcept>

namespace fmagent {

    class QueueClosed : public std::runtime_error {
    public:
        QueueClosed() : std::runtime_error("queue is shut down") {}
    };

    /// Multi-producer multi-consumer FIFO with a hard capacity. push blocks
    /// while full; nothing is ever dropped.
    template <typename T>
    class BoundedQueue {
    public:
        explicit BoundedQueue(std::size_t capacity) : _capacity(capacity)
        {
            if (capacity == 0)
                throw std::invalid_argument("queue capacity must be positive");
        }

        /// Throws QueueClosed if the queue is (or becomes) closed while waiting.
        void push(T item)
        {
            std::unique_lock lock(_mutex);
            _not_full.wait(lock, [&] { return _closed || _items.size() < _capacity; });
            if (_closed)
                throw QueueClosed();
            _items.push_back(std::move(item));
            _not_empty.notify_one();
        }

        /// Non-blocking push; false when full.
        bool try_push(T& item)
        {
            std::lock_guard lock(_mutex);
            if (_closed)
                throw QueueClosed();
            if (_items.size() >= _capacity)
                return false;
            _items.push_back(std::move(item));
            _not_empty.notify_one();
            return true;
        }

        /// Blocks for an item; empty once the queue is closed and drained.
        std::optional<T> pop()
        {
            std::unique_lock lock(_mutex);
            _not_empty.wait(lock, [&] { return _closed || !_items.empty(); });
            if (_items.empty())
                return std::nullopt;
            T item = std::move(_items.front());
            _items.pop_front();
            _not_full.notify_one();
            return item;
        }

        /// Rejects further pushes; queued items still drain.
        void close()
        {
            std::lock_guard lock(_mutex);
            _closed = true;
            _not_full.notify_all();
            _not_empty.notify_all();
        }

        bool closed() const
        {
            std::lock_guard lock(_mutex);
            return _closed;
        }

        std::size_t size() const
        {
            std::lock_guard lock(_mutex);
            return _items.size();
        }

        std::size_t capacity() const { return _capacity; }

    private:
        const std::size_t _capacity;
        mutable std::mutex _mutex;
        std::condition_variable _not_full;
        std::condition_variable _not_empty;
        std::deque<T> _items;
        bool _closed = false;
    };

} // namespace fmagent

#endif
