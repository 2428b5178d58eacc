#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "crnsim/des_core.hpp"
#include "crnsim/ge_dist.hpp"
#include "crnsim/rng.hpp"

using namespace crnsim;

namespace {

struct RecordingSink final : TraceSink {
  std::vector<Event> events;
  void on_event(const Event& e) override { events.push_back(e); }
};

// Handler that does nothing; useful for pure ordering tests.
struct NullHandler final : EventHandler {
  void on_event(Engine&, const Event&) override {}
};

}  // namespace

TEST_CASE("calendar orders by time") {
  EventCalendar cal;
  for (const double t : {5.0, 1.0, 3.0}) {
    Event e;
    e.time = t;
    e.seq = static_cast<std::uint64_t>(t);  // unique tags
    cal.push(e);
  }
  CHECK(cal.pop().time == 1.0);
  CHECK(cal.pop().time == 3.0);
  CHECK(cal.pop().time == 5.0);
  CHECK(cal.empty());
  CHECK_THROWS_AS(cal.pop(), std::logic_error);
  CHECK_THROWS_AS(cal.top(), std::logic_error);
}

TEST_CASE("equal timestamps dispatch in insertion order") {
  Engine eng;
  RecordingSink sink;
  eng.set_trace(&sink);
  NullHandler h;
  for (int i = 0; i < 5; ++i) {
    Event e;
    e.kind = EventKind::ExternalArrival;
    e.station = i;  // tag
    eng.schedule(2.5, e);
  }
  eng.schedule(2.5, Event{.kind = EventKind::EndOfRun});
  eng.run(h, 10.0);
  REQUIRE(sink.events.size() == 6);
  for (int i = 0; i < 5; ++i) {
    CHECK(sink.events[static_cast<std::size_t>(i)].station == i);
    CHECK(sink.events[static_cast<std::size_t>(i)].seq ==
          static_cast<std::uint64_t>(i));
  }
  CHECK(sink.events.back().kind == EventKind::EndOfRun);
}

TEST_CASE("scheduling into the past is a fatal logic error") {
  Engine eng;
  struct PastScheduler final : EventHandler {
    void on_event(Engine& e, const Event&) override {
      e.schedule(e.now() - 1.0, Event{.kind = EventKind::EndOfRun});
    }
  } h;
  eng.schedule(5.0, Event{.kind = EventKind::ExternalArrival});
  CHECK_THROWS_AS(eng.run(h, 10.0), std::logic_error);
  CHECK_THROWS_AS(eng.schedule(std::nan(""), Event{}), std::logic_error);
}

TEST_CASE("a lone end-of-run event defines the horizon") {
  Engine eng;
  NullHandler h;
  eng.schedule(100.0, Event{.kind = EventKind::EndOfRun});
  const double t = eng.run(h, 100.0);
  CHECK(t == 100.0);
  CHECK(eng.dispatched() == 1);
}

TEST_CASE("events beyond the horizon stay on the calendar") {
  Engine eng;
  NullHandler h;
  eng.schedule(1.0, Event{.kind = EventKind::ExternalArrival});
  eng.schedule(42.0, Event{.kind = EventKind::ExternalArrival});
  eng.run(h, 10.0);
  CHECK(eng.dispatched() == 1);
  CHECK(eng.pending() == 1);
  CHECK(eng.now() == 1.0);
}

TEST_CASE("event budget aborts a runaway run") {
  Engine eng(50);
  struct SelfFeeder final : EventHandler {
    void on_event(Engine& e, const Event&) override {
      e.schedule(e.now(), Event{.kind = EventKind::ExternalArrival});
    }
  } h;
  eng.schedule(0.0, Event{.kind = EventKind::ExternalArrival});
  CHECK_THROWS_AS(eng.run(h, 1.0), std::runtime_error);
}

TEST_CASE("request_stop halts the loop") {
  Engine eng;
  struct Stopper final : EventHandler {
    int seen = 0;
    void on_event(Engine& e, const Event&) override {
      if (++seen == 5) e.request_stop();
    }
  } h;
  for (int i = 0; i < 20; ++i) {
    eng.schedule(static_cast<double>(i), Event{.kind = EventKind::ExternalArrival});
  }
  eng.run(h, 100.0);
  CHECK(h.seen == 5);
  CHECK(eng.pending() == 15);
}

namespace {

// Minimal self-scheduling Poisson source.
struct PoissonSource final : EventHandler {
  RngStream rng;
  double rate;
  std::uint64_t count = 0;
  PoissonSource(std::uint64_t seed, double r) : rng(seed, 1), rate(r) {}
  void start(Engine& e) {
    e.schedule(exp_sample(rate, rng), Event{.kind = EventKind::ExternalArrival});
  }
  void on_event(Engine& e, const Event&) override {
    ++count;
    e.schedule(e.now() + exp_sample(rate, rng), Event{.kind = EventKind::ExternalArrival});
  }
};

}  // namespace

TEST_CASE("poisson source event count matches its rate") {
  Engine eng;
  PoissonSource src(99, 13.0);
  src.start(eng);
  eng.run(src, 10000.0);
  const double expected = 13.0 * 10000.0;
  CHECK(std::abs(static_cast<double>(src.count) - expected) / expected < 0.02);
}

namespace {

// Random scheduler that mixes zero-delay and positive-delay events.
struct ChaoticHandler final : EventHandler {
  RngStream rng{7, 7};
  void on_event(Engine& e, const Event&) override {
    const double u = rng.next_uniform();
    if (u < 0.3) {
      e.schedule(e.now(), Event{.kind = EventKind::ExternalArrival});  // zero delay
    } else if (u < 0.8) {
      e.schedule(e.now() + rng.next_uniform(), Event{.kind = EventKind::ExternalArrival});
      if (rng.next_uniform() < 0.5) {
        e.schedule(e.now() + 2.0 * rng.next_uniform(),
                   Event{.kind = EventKind::ServiceCompletion});
      }
    }
  }
};

}  // namespace

TEST_CASE("clock is monotone under chaotic schedules") {
  Engine eng;
  RecordingSink sink;
  eng.set_trace(&sink);
  ChaoticHandler h;
  for (int i = 0; i < 10; ++i) {
    eng.schedule(0.1 * i, Event{.kind = EventKind::ExternalArrival});
  }
  eng.run(h, 50.0);
  REQUIRE(sink.events.size() > 100);
  for (std::size_t i = 1; i < sink.events.size(); ++i) {
    REQUIRE(sink.events[i].time >= sink.events[i - 1].time);
    if (sink.events[i].time == sink.events[i - 1].time) {
      REQUIRE(sink.events[i].seq > sink.events[i - 1].seq);
    }
  }
}

TEST_CASE("identical runs produce identical traces") {
  const auto run_once = []() {
    Engine eng;
    RecordingSink sink;
    eng.set_trace(&sink);
    ChaoticHandler h;
    for (int i = 0; i < 10; ++i) {
      eng.schedule(0.1 * i, Event{.kind = EventKind::ExternalArrival});
    }
    eng.run(h, 25.0);
    std::uint64_t hash = 0xABCD;
    for (const Event& e : sink.events) {
      hash = hash_combine(hash, std::hash<double>{}(e.time));
      hash = hash_combine(hash, e.seq);
      hash = hash_combine(hash, static_cast<std::uint64_t>(e.kind));
    }
    return std::pair(sink.events.size(), hash);
  };
  const auto a = run_once();
  const auto b = run_once();
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}
