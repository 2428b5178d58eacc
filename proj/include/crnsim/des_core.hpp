#pragma once

#include <cstdint>
#include <vector>

namespace crnsim {

enum class EventKind : std::uint8_t {
  ExternalArrival = 0,
  ServiceCompletion = 1,
  EndOfWarmup = 2,
  EndOfRun = 3,
};

const char* event_kind_name(EventKind k) noexcept;

// One entry of the future-event calendar.  Payload fields are owned by the
// model; the engine only reads time/seq.
struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;  // insertion sequence, assigned by the engine
  EventKind kind = EventKind::EndOfRun;
  std::int32_t station = -1;
  std::int32_t server = -1;
  std::int64_t job = -1;
  std::uint8_t job_class = 0;
  std::uint64_t generation = 0;  // stale-completion guard
};

// Min-heap keyed by (time, seq): equal timestamps dispatch in insertion
// order, which is what makes zero-duration event chains deterministic.
class EventCalendar {
 public:
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }
  void push(const Event& e);
  const Event& top() const;
  Event pop();

 private:
  std::vector<Event> heap_;
};

class Engine;

struct EventHandler {
  virtual void on_event(Engine& engine, const Event& e) = 0;

 protected:
  ~EventHandler() = default;
};

struct TraceSink {
  virtual void on_event(const Event& e) = 0;
  virtual ~TraceSink() = default;
};

// Drives the calendar: pops events in timestamp order, advances the clock,
// and hands each event to the handler until the horizon is crossed, a stop
// is requested, or the calendar drains.
class Engine {
 public:
  explicit Engine(std::uint64_t max_events = 0) : max_events_(max_events) {}

  double now() const noexcept { return clock_; }
  std::uint64_t dispatched() const noexcept { return dispatched_; }
  std::size_t pending() const noexcept { return calendar_.size(); }

  // Places e on the calendar at time t (>= now, else logic_error) and
  // returns the insertion sequence number.
  std::uint64_t schedule(double t, Event e);

  // Runs until the next event would lie strictly beyond the horizon.
  // Returns the clock value at exit.
  double run(EventHandler& handler, double horizon);

  void request_stop() noexcept { stop_ = true; }
  void set_trace(TraceSink* sink) noexcept { trace_ = sink; }

 private:
  EventCalendar calendar_;
  double clock_ = 0.0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t max_events_ = 0;
  bool stop_ = false;
  TraceSink* trace_ = nullptr;
};

}  // namespace crnsim
