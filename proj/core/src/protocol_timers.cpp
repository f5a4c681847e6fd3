#include "ntn/protocol_timers.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>

namespace ntn {

void TimerConfig::validate() const {
    if (!(ra_response_window_ms > 0.0) || !(mac_contention_resolution_ms > 0.0) ||
        !(sr_period_ms > 0.0) || !(t_reordering_ms > 0.0))
        throw std::invalid_argument("TimerConfig: durations must be > 0");
    if (sr_prohibit_periods < 1)
        throw std::invalid_argument("TimerConfig: sr_prohibit_periods must be >= 1");
}

void DrxConfig::validate() const {
    if (!(cycle_ms > 0.0) || !(on_duration_ms > 0.0) || on_duration_ms > cycle_ms ||
        offset_ms < 0.0 || offset_ms >= cycle_ms)
        throw std::invalid_argument(
            "DrxConfig: need 0 < on_duration <= cycle and 0 <= offset < cycle");
}

bool DrxConfig::covers(double t_ms) const {
    validate();
    double phase = std::fmod(t_ms - offset_ms, cycle_ms);
    if (phase < 0.0) phase += cycle_ms;
    return phase < on_duration_ms;
}

namespace {

// Same-timestamp resolution order: expirations fire before deliveries so a
// message landing exactly at window end is too late; deliveries precede
// transmissions so a response landing exactly at a retransmit occasion
// suppresses the duplicate.
enum Phase { kPhaseExpiry = 0, kPhaseDelivery = 1, kPhaseTransmit = 2 };

class Engine {
  public:
    using Action = std::function<void(double)>;

    void schedule(double t, int phase, Action action) {
        queue_.push(Item{t, phase, seq_++, std::move(action)});
    }

    void run() {
        while (!queue_.empty()) {
            Item item = queue_.top();
            queue_.pop();
            item.action(item.t);
        }
    }

  private:
    struct Item {
        double t;
        int phase;
        std::uint64_t seq;
        Action action;
    };
    struct Later {
        bool operator()(const Item& a, const Item& b) const {
            if (a.t != b.t) return a.t > b.t;
            if (a.phase != b.phase) return a.phase > b.phase;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Item, std::vector<Item>, Later> queue_;
    std::uint64_t seq_ = 0;
};

void record(EventTrace& trace, double t, const char* actor, const std::string& event) {
    trace.events.push_back(TraceEvent{t, actor, event});
}

}  // namespace

// ============================================================
// Random access
// ============================================================

EventTrace run_random_access(const TimerConfig& cfg, double rtt_ms,
                             int preamble_attempts_max,
                             const std::optional<DrxConfig>& drx) {
    cfg.validate();
    if (rtt_ms < 0.0)
        throw std::invalid_argument("run_random_access: rtt must be >= 0");
    if (preamble_attempts_max < 1)
        throw std::invalid_argument("run_random_access: need at least one attempt");
    if (drx) drx->validate();

    EventTrace trace;
    Engine engine;

    struct State {
        int attempt = 0;
        bool ra_window_open = false;
        bool rar_received = false;
        bool cr_timer_open = false;
        bool done = false;
    } state;

    const double offset = cfg.rtt_offset_enabled ? rtt_ms : 0.0;

    std::function<void(double)> start_attempt = [&](double t0) {
        state.attempt += 1;
        state.ra_window_open = false;
        state.rar_received = false;
        const int this_attempt = state.attempt;
        record(trace, t0, "ue", "preamble_tx");

        engine.schedule(t0 + rtt_ms / 2.0, kPhaseDelivery, [&](double t) {
            if (state.done) return;
            record(trace, t, "enb", "preamble_rx");
        });
        engine.schedule(t0 + rtt_ms / 2.0, kPhaseTransmit, [&](double t) {
            if (state.done) return;
            record(trace, t, "enb", "rar_tx");
        });

        const double window_start = t0 + offset;
        const double window_end = window_start + cfg.ra_response_window_ms;
        engine.schedule(window_start, kPhaseExpiry, [&, this_attempt](double t) {
            if (state.done || state.attempt != this_attempt || state.rar_received) return;
            state.ra_window_open = true;
            record(trace, t, "ue", "ra_window_start");
        });
        engine.schedule(window_end, kPhaseExpiry, [&, this_attempt](double t) {
            if (state.done || state.attempt != this_attempt || state.rar_received ||
                !state.ra_window_open)
                return;
            state.ra_window_open = false;
            record(trace, t, "ue", "ra_window_expiry");
            if (state.attempt < preamble_attempts_max) {
                start_attempt(t);
            } else {
                state.done = true;
                trace.outcome = preamble_attempts_max == 1 ? SimOutcome::TimerExpiry
                                                           : SimOutcome::MaxAttempts;
            }
        });

        // The RAR for this preamble lands one RTT after it was sent. A RAR
        // belonging to an abandoned attempt is not accepted later.
        engine.schedule(t0 + rtt_ms, kPhaseDelivery, [&, this_attempt](double t) {
            if (state.done) return;
            if (state.attempt != this_attempt) {
                record(trace, t, "ue", "rar_ignored_stale");
                return;
            }
            if (drx && !drx->covers(t)) {
                record(trace, t, "ue", "rar_missed_drx");
                return;
            }
            if (!state.ra_window_open) {
                record(trace, t, "ue", "rar_missed_window_closed");
                return;
            }
            state.rar_received = true;
            state.ra_window_open = false;
            record(trace, t, "ue", "rar_rx");
            record(trace, t, "ue", "ra_window_stop");

            // Contention resolution: msg3 now, msg4 one RTT later.
            engine.schedule(t, kPhaseTransmit, [&](double t3) {
                record(trace, t3, "ue", "msg3_tx");
                engine.schedule(t3 + rtt_ms / 2.0, kPhaseDelivery, [&](double tm) {
                    if (state.done) return;
                    record(trace, tm, "enb", "msg3_rx");
                });
                engine.schedule(t3 + rtt_ms / 2.0, kPhaseTransmit, [&](double tm) {
                    if (state.done) return;
                    record(trace, tm, "enb", "msg4_tx");
                });

                const double cr_start = t3 + offset;
                const double cr_end = cr_start + cfg.mac_contention_resolution_ms;
                engine.schedule(cr_start, kPhaseExpiry, [&](double tc) {
                    if (state.done) return;
                    state.cr_timer_open = true;
                    record(trace, tc, "ue", "cr_timer_start");
                });
                engine.schedule(cr_end, kPhaseExpiry, [&](double tc) {
                    if (state.done || !state.cr_timer_open) return;
                    state.cr_timer_open = false;
                    record(trace, tc, "ue", "cr_timer_expiry");
                    state.done = true;
                    trace.outcome = SimOutcome::TimerExpiry;
                });
                engine.schedule(t3 + rtt_ms, kPhaseDelivery, [&](double tc) {
                    if (state.done) return;
                    if (drx && !drx->covers(tc)) {
                        record(trace, tc, "ue", "msg4_missed_drx");
                        return;
                    }
                    if (!state.cr_timer_open) {
                        record(trace, tc, "ue", "msg4_missed_timer_not_running");
                        return;
                    }
                    state.cr_timer_open = false;
                    record(trace, tc, "ue", "msg4_rx");
                    record(trace, tc, "ue", "cr_timer_stop");
                    state.done = true;
                    trace.outcome = SimOutcome::Success;
                });
            });
        });
    };

    start_attempt(0.0);
    engine.run();
    return trace;
}

// ============================================================
// Scheduling request sequence
// ============================================================

SrResult run_sr_sequence(const TimerConfig& cfg, double rtt_ms,
                         double grant_issue_delay_ms) {
    cfg.validate();
    if (rtt_ms < 0.0 || grant_issue_delay_ms < 0.0)
        throw std::invalid_argument("run_sr_sequence: delays must be >= 0");

    SrResult result;
    Engine engine;

    struct State {
        bool grant_received = false;
        bool grant_scheduled = false;
        bool prohibit_running = false;
    } state;

    std::function<void(double)> send_sr = [&](double t) {
        result.sr_transmissions += 1;
        if (result.sr_transmissions > 1) result.duplicate_srs += 1;
        record(result.trace, t, "ue", "sr_tx");
        state.prohibit_running = true;
        record(result.trace, t, "ue", "sr_prohibit_start");

        if (!state.grant_scheduled) {
            // The first SR already suffices: the grant answers it after one
            // RTT plus the network-side issue delay.
            state.grant_scheduled = true;
            engine.schedule(t + rtt_ms / 2.0, kPhaseDelivery, [&](double tg) {
                record(result.trace, tg, "enb", "sr_rx");
            });
            engine.schedule(t + rtt_ms / 2.0 + grant_issue_delay_ms, kPhaseTransmit,
                            [&](double tg) { record(result.trace, tg, "enb", "grant_tx"); });
            engine.schedule(t + rtt_ms + grant_issue_delay_ms, kPhaseDelivery,
                            [&](double tg) {
                                state.grant_received = true;
                                record(result.trace, tg, "ue", "grant_rx");
                                if (state.prohibit_running) {
                                    state.prohibit_running = false;
                                    record(result.trace, tg, "ue", "sr_prohibit_stop");
                                }
                            });
        }

        engine.schedule(t + cfg.sr_prohibit_ms(), kPhaseExpiry, [&](double te) {
            if (state.grant_received) return;
            state.prohibit_running = false;
            record(result.trace, te, "ue", "sr_prohibit_expiry");
            // Retransmit in the transmit phase so a grant landing at this
            // exact instant suppresses the duplicate.
            engine.schedule(te, kPhaseTransmit, [&](double tr) {
                if (state.grant_received) return;
                send_sr(tr);
            });
        });
    };

    send_sr(0.0);
    engine.run();
    result.trace.outcome = SimOutcome::Success;
    return result;
}

// ============================================================
// RLC reordering
// ============================================================

ReorderingResult run_rlc_reordering(const TimerConfig& cfg, double rtt_ms,
                                    const std::set<int>& loss_pattern, int n_pdus) {
    cfg.validate();
    if (n_pdus < 2)
        throw std::invalid_argument("run_rlc_reordering: need at least 2 PDUs");
    if (rtt_ms < 0.0)
        throw std::invalid_argument("run_rlc_reordering: rtt must be >= 0");
    for (int sn : loss_pattern)
        if (sn < 0 || sn >= n_pdus)
            throw std::invalid_argument("run_rlc_reordering: loss SN out of range");
    if (!loss_pattern.empty() && loss_pattern.count(n_pdus - 1)) {
        // A trailing loss is never followed by an arrival that exposes the
        // gap, so the reordering logic cannot see it.
        throw std::invalid_argument(
            "run_rlc_reordering: loss of the final PDU is undetectable by t-Reordering");
    }

    ReorderingResult result;
    Engine engine;

    struct State {
        std::set<int> missing;        // lost and not yet retransmitted
        std::set<int> waiting_timer;  // detected gaps awaiting a timer run
        bool timer_running = false;
        int timer_generation = 0;
        std::set<int> timer_covers;
        int highest_delivered = -1;
    } state;

    const double tti_ms = 1.0;

    // Single t-Reordering instance: it guards the earliest detected gaps and
    // restarts for later ones once resolved.
    std::function<void(double)> start_timer_if_needed = [&](double t) {
        if (state.timer_running || state.waiting_timer.empty()) return;
        state.timer_running = true;
        state.timer_generation += 1;
        state.timer_covers = state.waiting_timer;
        state.waiting_timer.clear();
        record(result.trace, t, "ue", "t_reordering_start");
        const int generation = state.timer_generation;
        engine.schedule(t + cfg.t_reordering_ms, kPhaseExpiry, [&, generation](double te) {
            if (!state.timer_running || state.timer_generation != generation) return;
            state.timer_running = false;
            state.timer_covers.clear();
            record(result.trace, te, "ue", "t_reordering_expiry");
            // The expiry declares the covered PDUs lost and asks for an RLC
            // retransmission that the in-flight MAC copy makes redundant.
            result.spurious_status_reports += 1;
            record(result.trace, te, "ue", "status_report_tx");
            start_timer_if_needed(te);
        });
    };

    std::function<void(double, int, bool)> deliver_fn = [&](double t, int sn,
                                                            bool is_retx) {
        record(result.trace, t, "ue",
               (is_retx ? "pdu_rx_retx sn=" : "pdu_rx sn=") + std::to_string(sn));
        state.missing.erase(sn);
        if (sn > state.highest_delivered) {
            // Newly exposed gaps: everything undelivered below sn.
            for (int gap_sn = state.highest_delivered + 1; gap_sn < sn; ++gap_sn) {
                if (!state.missing.count(gap_sn)) continue;
                if (state.timer_covers.count(gap_sn) || state.waiting_timer.count(gap_sn))
                    continue;
                state.waiting_timer.insert(gap_sn);
                record(result.trace, t, "ue", "gap_detected sn=" + std::to_string(gap_sn));
                // MAC retransmission lands one RTT after detection.
                engine.schedule(t + rtt_ms, kPhaseDelivery,
                                [&, gap_sn](double tr) { deliver_fn(tr, gap_sn, true); });
            }
            state.highest_delivered = sn;
        }
        if (state.timer_running && is_retx) {
            bool all_arrived = true;
            for (int covered : state.timer_covers)
                if (state.missing.count(covered)) all_arrived = false;
            if (all_arrived) {
                state.timer_running = false;
                state.timer_covers.clear();
                record(result.trace, t, "ue", "t_reordering_stop");
            }
        }
        start_timer_if_needed(t);
    };

    for (int sn = 0; sn < n_pdus; ++sn) {
        const double t_tx = sn * tti_ms;
        engine.schedule(t_tx, kPhaseTransmit, [&, sn](double t) {
            record(result.trace, t, "enb", "pdu_tx sn=" + std::to_string(sn));
        });
        if (!loss_pattern.count(sn)) {
            engine.schedule(t_tx + rtt_ms / 2.0, kPhaseDelivery,
                            [&, sn](double t) { deliver_fn(t, sn, false); });
        } else {
            state.missing.insert(sn);
        }
    }

    engine.run();
    result.recovered = state.missing.empty();
    result.trace.outcome = result.recovered ? SimOutcome::Success : SimOutcome::TimerExpiry;
    return result;
}

}  // namespace ntn
