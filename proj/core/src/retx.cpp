#include "ntn/retx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace ntn {

void BlerCurve::validate() const {
    if (!(slope > 0.0))
        throw std::invalid_argument("BlerCurve: slope must be > 0");
    if (!std::isfinite(snr50_db))
        throw std::invalid_argument("BlerCurve: snr50_db must be finite");
}

double bler(const BlerCurve& curve, double snr_db) {
    curve.validate();
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("bler: snr must be finite");
    return 1.0 / (1.0 + std::exp(curve.slope * (snr_db - curve.snr50_db)));
}

BlerCurve calibrate_snr50(double slope, double ref_snr_db, double target_bler) {
    if (!(target_bler > 0.0 && target_bler < 1.0))
        throw std::invalid_argument("calibrate_snr50: target_bler must be in (0,1)");
    BlerCurve curve;
    curve.slope = slope;
    curve.snr50_db = ref_snr_db + std::log(target_bler / (1.0 - target_bler)) / slope;
    curve.validate();
    return curve;
}

void RetxPolicy::validate() const {
    if (max_transmissions < 1 || n_blind < 1 || max_rlc_rounds < 1)
        throw std::invalid_argument("RetxPolicy: counts must be >= 1");
}

namespace {

double combining_gain_db(int n) { return 10.0 * std::log10(static_cast<double>(n)); }

}  // namespace

double residual_bler(const RetxPolicy& policy, const BlerCurve& curve,
                     double snr_db, int n) {
    policy.validate();
    if (n < 1) throw std::invalid_argument("residual_bler: n must be >= 1");
    switch (policy.kind) {
        case RetxKind::PlainArq:
            return std::pow(bler(curve, snr_db), n);
        case RetxKind::HarqCombining:
            return bler(curve, snr_db + combining_gain_db(n));
        case RetxKind::BlindPlusArq: {
            if (n % policy.n_blind != 0)
                throw std::invalid_argument(
                    "residual_bler: n must be a multiple of n_blind for BlindPlusArq");
            const double p_round = bler(curve, snr_db + combining_gain_db(policy.n_blind));
            return std::pow(p_round, n / policy.n_blind);
        }
    }
    throw std::logic_error("residual_bler: unhandled policy kind");
}

ExpectedUsage expected_subframes(const RetxPolicy& policy, const BlerCurve& curve,
                                 double snr_db) {
    policy.validate();
    ExpectedUsage usage;
    switch (policy.kind) {
        case RetxKind::HarqCombining: {
            // E[transmissions] = sum over m of P(first m all fail), truncated.
            double total = 1.0;
            for (int m = 1; m < policy.max_transmissions; ++m)
                total += bler(curve, snr_db + combining_gain_db(m));
            usage.subframes = total;
            usage.residual_after_cap =
                bler(curve, snr_db + combining_gain_db(policy.max_transmissions));
            break;
        }
        case RetxKind::PlainArq: {
            const double p = bler(curve, snr_db);
            double total = 0.0;
            double pm = 1.0;
            for (int m = 0; m < policy.max_transmissions; ++m) {
                total += pm;
                pm *= p;
            }
            usage.subframes = total;
            usage.residual_after_cap = pm;
            break;
        }
        case RetxKind::BlindPlusArq: {
            const double p_round = bler(curve, snr_db + combining_gain_db(policy.n_blind));
            const double p_cap = std::pow(p_round, policy.max_rlc_rounds);
            // n_blind * (1 - p^R) / (1 - p), the truncated geometric mean
            usage.subframes = p_round < 1.0
                                  ? policy.n_blind * (1.0 - p_cap) / (1.0 - p_round)
                                  : static_cast<double>(policy.n_blind) * policy.max_rlc_rounds;
            usage.residual_after_cap = p_cap;
            break;
        }
    }
    usage.converged = usage.residual_after_cap <= 0.5;
    return usage;
}

// ============================================================
// Monte Carlo
// ============================================================

namespace {

// SplitMix64 finalizer; bijective with strong avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct TrialRng {
    std::uint64_t state;
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : state(mix64(seed + 0x9E3779B97F4A7C15ull * (trial + 1))) {}
    double uniform() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        return static_cast<double>(mix64(z) >> 11) * 0x1.0p-53;  // [0, 1)
    }
};

struct TrialOutcome {
    bool failed;
    std::uint32_t subframes;
};

TrialOutcome run_trial(const RetxPolicy& policy, double p_single, double p_round,
                       const std::vector<double>& harq_thresholds, TrialRng& rng) {
    switch (policy.kind) {
        case RetxKind::HarqCombining: {
            // One draw; combined attempts share it, so success is monotone in m.
            // harq_thresholds[m-1] = bler(s + 10log10 m) is decreasing; the
            // first index with threshold <= u is the winning transmission.
            const double u = rng.uniform();
            const auto it =
                std::lower_bound(harq_thresholds.begin(), harq_thresholds.end(), u,
                                 [](double thr, double draw) { return thr > draw; });
            if (it == harq_thresholds.end())
                return {true, static_cast<std::uint32_t>(policy.max_transmissions)};
            return {false,
                    static_cast<std::uint32_t>(it - harq_thresholds.begin() + 1)};
        }
        case RetxKind::PlainArq: {
            for (int m = 1; m <= policy.max_transmissions; ++m) {
                if (rng.uniform() >= p_single)
                    return {false, static_cast<std::uint32_t>(m)};
            }
            return {true, static_cast<std::uint32_t>(policy.max_transmissions)};
        }
        case RetxKind::BlindPlusArq: {
            for (int r = 1; r <= policy.max_rlc_rounds; ++r) {
                if (rng.uniform() >= p_round)
                    return {false, static_cast<std::uint32_t>(r * policy.n_blind)};
            }
            return {true,
                    static_cast<std::uint32_t>(policy.max_rlc_rounds * policy.n_blind)};
        }
    }
    throw std::logic_error("run_trial: unhandled policy kind");
}

struct Accumulator {
    std::uint64_t failures = 0;
    std::uint64_t subframes = 0;
    std::uint64_t subframes_sq = 0;

    void add(const TrialOutcome& o) {
        failures += o.failed ? 1 : 0;
        subframes += o.subframes;
        subframes_sq += static_cast<std::uint64_t>(o.subframes) * o.subframes;
    }
    void merge(const Accumulator& other) {
        failures += other.failures;
        subframes += other.subframes;
        subframes_sq += other.subframes_sq;
    }
};

}  // namespace

McResult monte_carlo_retx(const RetxPolicy& policy, const BlerCurve& curve,
                          double snr_db, std::uint64_t trials, std::uint64_t seed,
                          unsigned workers) {
    policy.validate();
    curve.validate();
    if (trials < 1000)
        throw std::invalid_argument("monte_carlo_retx: need at least 1000 trials");
    if (workers < 1) workers = 1;

    const double p_single = bler(curve, snr_db);
    const double p_round = bler(curve, snr_db + combining_gain_db(policy.n_blind));
    std::vector<double> harq_thresholds;
    if (policy.kind == RetxKind::HarqCombining) {
        harq_thresholds.reserve(policy.max_transmissions);
        for (int m = 1; m <= policy.max_transmissions; ++m)
            harq_thresholds.push_back(bler(curve, snr_db + combining_gain_db(m)));
    }

    auto run_range = [&](std::uint64_t first, std::uint64_t last, Accumulator& acc) {
        for (std::uint64_t t = first; t < last; ++t) {
            TrialRng rng(seed, t);
            acc.add(run_trial(policy, p_single, p_round, harq_thresholds, rng));
        }
    };

    Accumulator total;
    if (workers == 1) {
        run_range(0, trials, total);
    } else {
        // Contiguous trial chunks; per-trial streams make the partition
        // irrelevant to the result.
        std::vector<Accumulator> accs(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t first = std::min<std::uint64_t>(w * chunk, trials);
            const std::uint64_t last = std::min<std::uint64_t>(first + chunk, trials);
            pool.emplace_back(run_range, first, last, std::ref(accs[w]));
        }
        for (auto& th : pool) th.join();
        for (const auto& acc : accs) total.merge(acc);
    }

    McResult result;
    result.trials = trials;
    result.failures = total.failures;
    const double n = static_cast<double>(trials);
    const double p_hat = static_cast<double>(total.failures) / n;
    result.residual_bler = p_hat;
    result.confidence_halfwidth = 3.0 * std::sqrt(p_hat * (1.0 - p_hat) / n);
    const double mean = static_cast<double>(total.subframes) / n;
    result.mean_subframes = mean;
    const double var =
        std::max(0.0, static_cast<double>(total.subframes_sq) / n - mean * mean);
    result.subframes_halfwidth = 3.0 * std::sqrt(var / n);
    return result;
}

// ============================================================
// HARQ process / repetition arithmetic
// ============================================================

void HarqConfig::validate() const {
    if (n_processes < 1 || !(tbs_bits > 0.0) || !(rtt_ms > 0.0) || !(tti_ms > 0.0))
        throw std::invalid_argument("HarqConfig: all fields must be positive");
}

double peak_rate(const HarqConfig& cfg) {
    cfg.validate();
    const double per_rtt = cfg.n_processes * cfg.tbs_bits * 1000.0 / cfg.rtt_ms;
    const double per_tti = cfg.tbs_bits * 1000.0 / cfg.tti_ms;
    return std::min(per_rtt, per_tti);
}

int harq_processes_for_peak(double rtt_ms, double tti_ms) {
    if (!(rtt_ms > 0.0) || !(tti_ms > 0.0))
        throw std::invalid_argument("harq_processes_for_peak: rtt and tti must be > 0");
    return static_cast<int>(std::ceil(rtt_ms / tti_ms));
}

const std::vector<int>& default_repetition_set() {
    static const std::vector<int> set = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048};
    return set;
}

int required_repetitions(double tbs_bits, double rate_bps,
                         const std::vector<int>& repetition_set) {
    if (!(tbs_bits > 0.0) || !(rate_bps > 0.0))
        throw std::invalid_argument("required_repetitions: tbs and rate must be > 0");
    if (repetition_set.empty() ||
        !std::is_sorted(repetition_set.begin(), repetition_set.end()))
        throw std::invalid_argument("required_repetitions: set must be sorted ascending");
    const double duration_ms = std::ceil(tbs_bits / rate_bps * 1000.0);
    for (int reps : repetition_set)
        if (reps >= duration_ms) return reps;
    throw std::out_of_range("required_repetitions: duration " +
                            std::to_string(duration_ms) +
                            " ms exceeds the largest repetition count");
}

CePreset ce_preset(std::string_view name) {
    CePreset preset;
    preset.policy.kind = RetxKind::HarqCombining;
    preset.harq.tbs_bits = 1000.0;  // CAT-M1 DL max TBS
    preset.harq.rtt_ms = 541.0;
    preset.harq.tti_ms = 1.0;
    if (name == "ce_mode_a") {
        preset.policy.max_transmissions = 32;
        preset.harq.n_processes = 10;
    } else if (name == "ce_mode_b") {
        preset.policy.max_transmissions = 2048;
        preset.harq.n_processes = 2;
    } else {
        throw std::invalid_argument("unknown CE preset: " + std::string(name));
    }
    return preset;
}

}  // namespace ntn
