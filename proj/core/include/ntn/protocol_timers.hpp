#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ntn {

// Discrete-event models of the timer-controlled procedures that break under
// satellite round-trip times: random access response window + contention
// resolution, SR prohibit, and RLC t-Reordering. One-way message latency is
// exactly rtt/2 with no jitter. Same-timestamp events resolve in a fixed
// phase order: timer expiries, then message deliveries, then transmissions.

struct TimerConfig {
    double ra_response_window_ms = 10.0;  // fixture value; no legacy default asserted
    double mac_contention_resolution_ms = 10.0;
    int sr_prohibit_periods = 7;
    double sr_period_ms = 10.0;
    double t_reordering_ms = 200.0;
    bool rtt_offset_enabled = false;  // delay RA window / CR timer start by RTT

    double sr_prohibit_ms() const { return sr_prohibit_periods * sr_period_ms; }
    void validate() const;
};

enum class SimOutcome { Success, TimerExpiry, MaxAttempts };

struct TraceEvent {
    double t_ms = 0.0;
    std::string actor;  // "ue" or "enb"
    std::string event;
};

struct EventTrace {
    std::vector<TraceEvent> events;
    SimOutcome outcome = SimOutcome::Success;
};

// Minimal DRX: reception is possible only inside periodic on-durations.
struct DrxConfig {
    double cycle_ms = 0.0;
    double on_duration_ms = 0.0;
    double offset_ms = 0.0;

    void validate() const;
    bool covers(double t_ms) const;
};

// Four-step random access. The RAR arrives one RTT after the preamble; the
// response window opens at the preamble (plus RTT when the offset is
// enabled). Contention resolution repeats the pattern one RTT later. A
// single failed attempt reports TimerExpiry; exhausting a multi-attempt
// budget reports MaxAttempts.
EventTrace run_random_access(const TimerConfig& cfg, double rtt_ms,
                             int preamble_attempts_max = 1,
                             const std::optional<DrxConfig>& drx = std::nullopt);

struct SrResult {
    int sr_transmissions = 0;
    int duplicate_srs = 0;  // SRs re-sent while the first grant was in flight
    EventTrace trace;
};

SrResult run_sr_sequence(const TimerConfig& cfg, double rtt_ms,
                         double grant_issue_delay_ms);

struct ReorderingResult {
    int spurious_status_reports = 0;
    bool recovered = false;
    EventTrace trace;
};

// PDUs are sent at 1 ms spacing; MAC-lost PDUs are retransmitted one RTT
// after the receiver detects the gap. A t-Reordering expiry that beats the
// retransmission counts as a spurious status report. Losing the final PDU is
// rejected: no later arrival ever exposes that gap to the reordering logic.
ReorderingResult run_rlc_reordering(const TimerConfig& cfg, double rtt_ms,
                                    const std::set<int>& loss_pattern, int n_pdus);

}  // namespace ntn
