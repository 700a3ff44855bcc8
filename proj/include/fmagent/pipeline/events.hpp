#ifndef FMAGENT_PIPELINE_EVENTS_HPP
#define FMAGENT_PIPELINE_EVENTS_HPP

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmagent/core/serialize.hpp>

namespace fmagent {

    enum class EventType {
        run_started,
        candidate_generated,
        candidate_evaluated,
        generation_completed,
        migration,
        intervention_applied,
        task_failed,
        run_finished,
    };

    std::string_view to_string(EventType t);
    EventType parse_event_type(std::string_view text);

    struct Event {
        std::uint64_t seq = 0;
        std::int64_t timestamp_ms = 0; ///< UTC milliseconds
        std::string run_id;
        EventType type = EventType::run_started;
        json payload;
    };

    /// One line: {"seq", "timestamp", "run_id", "type", "payload"}.
    json to_json(const Event& e);
    Event event_from_json(const json& j);

    class CorruptLog : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Append-only, gapless event sequence of one run, optionally mirrored to
    /// a JSONL file. Appends are serialized; readers may block for new events.
    class EventLog {
    public:
        explicit EventLog(std::string run_id, std::optional<std::filesystem::path> file = std::nullopt);

        EventLog(const EventLog&) = delete;
        EventLog& operator=(const EventLog&) = delete;

        /// Assigns the next seq and a timestamp; returns the stored event.
        Event append(EventType type, json payload);

        const std::string& run_id() const { return _run_id; }
        std::uint64_t last_seq() const;
        std::size_t size() const;

        std::vector<Event> events() const;

        /// Serialized lines with seq >= from.
        std::vector<std::string> lines_from(std::uint64_t from) const;

        /// Waits up to `timeout` for a line with seq >= from; returns whatever
        /// is available (possibly nothing).
        std::vector<std::string> wait_lines(std::uint64_t from, std::chrono::milliseconds timeout) const;

        /// No more appends will happen; wakes all waiters.
        void close();
        bool closed() const;

    private:
        std::string _run_id;
        mutable std::mutex _mutex;
        mutable std::condition_variable _changed;
        std::vector<Event> _events;
        std::vector<std::string> _lines;
        std::optional<std::ofstream> _file;
        bool _closed = false;
    };

    /// Parses a JSONL log. A trailing line without a newline that fails to
    /// parse is treated as a torn write and ignored; any other malformed line
    /// throws CorruptLog.
    std::vector<Event> read_event_log(const std::filesystem::path& path);
    std::vector<Event> parse_event_lines(const std::string& text);

    /// Throws CorruptLog naming the first missing seq if the sequence does
    /// not run 1, 2, 3, ... without gaps.
    void check_gapless(const std::vector<Event>& events);

} // namespace fmagent

#endif
