#include <fmagent/pipeline/events.hpp>

#include <sstream>

namespace fmagent {

    namespace {
        constexpr EventType kAllTypes[] = {
            EventType::run_started,          EventType::candidate_generated, EventType::candidate_evaluated, EventType::generation_completed,
            EventType::migration,            EventType::intervention_applied, EventType::task_failed,        EventType::run_finished,
        };

        std::int64_t now_ms()
        {
            return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch()).count();
        }
    } // namespace

    std::string_view to_string(EventType t)
    {
        switch (t) {
        case EventType::run_started: return "run_started";
        case EventType::candidate_generated: return "candidate_generated";
        case EventType::candidate_evaluated: return "candidate_evaluated";
        case EventType::generation_completed: return "generation_completed";
        case EventType::migration: return "migration";
        case EventType::intervention_applied: return "intervention_applied";
        case EventType::task_failed: return "task_failed";
        case EventType::run_finished: return "run_finished";
        }
        return "run_started";
    }

    EventType parse_event_type(std::string_view text)
    {
        for (EventType t : kAllTypes)
            if (to_string(t) == text)
                return t;
        throw SchemaError("unknown event type '" + std::string(text) + "'");
    }

    json to_json(const Event& e)
    {
        return {{"seq", e.seq}, {"timestamp", e.timestamp_ms}, {"run_id", e.run_id}, {"type", to_string(e.type)}, {"payload", e.payload}};
    }

    Event event_from_json(const json& j)
    {
        Event e;
        e.seq = field<std::uint64_t>(j, "seq");
        e.timestamp_ms = field_or<std::int64_t>(j, "timestamp", 0);
        e.run_id = field<std::string>(j, "run_id");
        e.type = parse_event_type(field<std::string>(j, "type"));
        e.payload = require(j, "payload");
        return e;
    }

    EventLog::EventLog(std::string run_id, std::optional<std::filesystem::path> file) : _run_id(std::move(run_id))
    {
        if (file) {
            if (file->has_parent_path())
                std::filesystem::create_directories(file->parent_path());
            _file.emplace(*file, std::ios::out | std::ios::trunc);
            if (!*_file)
                throw std::runtime_error("cannot open event log " + file->string());
        }
    }

    Event EventLog::append(EventType type, json payload)
    {
        std::lock_guard lock(_mutex);
        if (_closed)
            throw std::logic_error("append to a closed event log");
        Event e{_events.size() + 1, now_ms(), _run_id, type, std::move(payload)};
        std::string line = to_json(e).dump();
        if (_file) {
            *_file << line << '\n';
            _file->flush();
        }
        _events.push_back(e);
        _lines.push_back(std::move(line));
        _changed.notify_all();
        return e;
    }

    std::uint64_t EventLog::last_seq() const
    {
        std::lock_guard lock(_mutex);
        return _events.size();
    }

    std::size_t EventLog::size() const { return last_seq(); }

    std::vector<Event> EventLog::events() const
    {
        std::lock_guard lock(_mutex);
        return _events;
    }

    std::vector<std::string> EventLog::lines_from(std::uint64_t from) const
    {
        std::lock_guard lock(_mutex);
        const std::size_t start = from == 0 ? 0 : static_cast<std::size_t>(from - 1);
        if (start >= _lines.size())
            return {};
        return {_lines.begin() + static_cast<std::ptrdiff_t>(start), _lines.end()};
    }

    std::vector<std::string> EventLog::wait_lines(std::uint64_t from, std::chrono::milliseconds timeout) const
    {
        const std::size_t start = from == 0 ? 0 : static_cast<std::size_t>(from - 1);
        std::unique_lock lock(_mutex);
        _changed.wait_for(lock, timeout, [&] { return _closed || _lines.size() > start; });
        if (start >= _lines.size())
            return {};
        return {_lines.begin() + static_cast<std::ptrdiff_t>(start), _lines.end()};
    }

    void EventLog::close()
    {
        std::lock_guard lock(_mutex);
        _closed = true;
        if (_file)
            _file->flush();
        _changed.notify_all();
    }

    bool EventLog::closed() const
    {
        std::lock_guard lock(_mutex);
        return _closed;
    }

    std::vector<Event> parse_event_lines(const std::string& text)
    {
        std::vector<Event> out;
        std::size_t pos = 0;
        std::size_t line_no = 0;
        while (pos < text.size()) {
            const std::size_t nl = text.find('\n', pos);
            const bool terminated = nl != std::string::npos;
            const std::string line = text.substr(pos, terminated ? nl - pos : std::string::npos);
            pos = terminated ? nl + 1 : text.size();
            ++line_no;
            if (line.empty())
                continue;
            const json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                if (!terminated)
                    break;
                throw CorruptLog("malformed event at line " + std::to_string(line_no));
            }
            try {
                out.push_back(event_from_json(j));
            }
            catch (const SchemaError& e) {
                throw CorruptLog("invalid event at line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return out;
    }

    std::vector<Event> read_event_log(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot read event log " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_event_lines(buf.str());
    }

    void check_gapless(const std::vector<Event>& events)
    {
        std::uint64_t expected = 1;
        for (const Event& e : events) {
            if (e.seq != expected) {
                if (e.seq > expected)
                    throw CorruptLog("event log gap: missing seq " + std::to_string(expected));
                throw CorruptLog("event log out of order: seq " + std::to_string(e.seq) + " after " + std::to_string(expected - 1));
            }
            ++expected;
        }
    }

} // namespace fmagent
