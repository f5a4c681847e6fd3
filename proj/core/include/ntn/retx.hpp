#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ntn {

// Retransmission-strategy models over a parametric logistic BLER curve.
// Three schemes: HARQ with chase combining, plain ARQ (independent retries),
// and fixed blind repetitions cleaned up by RLC ARQ rounds.

struct BlerCurve {
    double snr50_db = 0.0;  // SNR at 50% BLER
    double slope = 1.0;     // logistic steepness, 1/dB

    void validate() const;
};

// BLER(s) = 1 / (1 + exp(slope * (s - snr50)))
double bler(const BlerCurve& curve, double snr_db);

// Chooses snr50 so that bler(ref_snr_db) == target_bler for the given slope.
BlerCurve calibrate_snr50(double slope, double ref_snr_db, double target_bler);

enum class RetxKind { HarqCombining, PlainArq, BlindPlusArq };

struct RetxPolicy {
    RetxKind kind = RetxKind::HarqCombining;
    int max_transmissions = 1;  // cap for HarqCombining / PlainArq
    int n_blind = 4;            // BlindPlusArq: subframes per blind round
    int max_rlc_rounds = 1;     // BlindPlusArq: ARQ round cap

    void validate() const;
};

// Residual BLER after n subframes.
//   PlainArq:      bler(s)^n
//   HarqCombining: bler(s + 10log10 n)           (equal-gain accumulation)
//   BlindPlusArq:  bler(s + 10log10 n_blind)^(n/n_blind), n a multiple of n_blind
double residual_bler(const RetxPolicy& policy, const BlerCurve& curve,
                     double snr_db, int n);

struct ExpectedUsage {
    double subframes = 0.0;
    double residual_after_cap = 0.0;
    bool converged = true;  // false when the cap leaves residual > 0.5
};

// Expected subframes until success, truncated at the policy caps.
ExpectedUsage expected_subframes(const RetxPolicy& policy, const BlerCurve& curve,
                                 double snr_db);

struct McResult {
    double residual_bler = 0.0;
    double mean_subframes = 0.0;
    double confidence_halfwidth = 0.0;  // 3-sigma halfwidth on residual_bler
    double subframes_halfwidth = 0.0;   // 3-sigma halfwidth on mean_subframes
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
};

// Per-trial counter-based random streams derived from (seed, trial index), so
// results are bit-identical for a given seed regardless of worker count.
// HARQ combining uses a single uniform draw per trial (monotone coupling);
// ARQ attempts and RLC rounds draw independently.
McResult monte_carlo_retx(const RetxPolicy& policy, const BlerCurve& curve,
                          double snr_db, std::uint64_t trials, std::uint64_t seed,
                          unsigned workers = 1);

struct HarqConfig {
    int n_processes = 10;
    double tbs_bits = 1000.0;
    double rtt_ms = 541.0;
    double tti_ms = 1.0;

    void validate() const;
};

// min(n_processes * tbs / RTT, tbs / TTI) in bits/s: stop-and-wait pipeline
// limited by processes per RTT.
double peak_rate(const HarqConfig& cfg);

// ceil(RTT / TTI): processes needed to keep the pipeline full.
int harq_processes_for_peak(double rtt_ms, double tti_ms = 1.0);

// {1, 2, 4, ..., 2048}
const std::vector<int>& default_repetition_set();

// ceil(tbs/rate) in 1 ms subframes, rounded up to the next allowed repetition
// count. Throws std::out_of_range when the duration exceeds the set maximum.
int required_repetitions(double tbs_bits, double rate_bps,
                         const std::vector<int>& repetition_set = default_repetition_set());

struct CePreset {
    RetxPolicy policy;
    HarqConfig harq;
};

// "ce_mode_a": up to 32 repetitions, 10 HARQ processes.
// "ce_mode_b": up to 2048 repetitions, 2 HARQ processes.
CePreset ce_preset(std::string_view name);

}  // namespace ntn
