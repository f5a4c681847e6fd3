// ntncalc: command line front end over the ntn core library. Every command
// loads one scenario, writes CSV artifacts into --out, prints a RunReport as
// JSON on stdout, and exits 0 only when its embedded reference checks pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ntn/io.hpp>
#include <ntn/linkbudget.hpp>
#include <ntn/mobility.hpp>
#include <ntn/orbit.hpp>
#include <ntn/protocol_timers.hpp>
#include <ntn/retx.hpp>
#include <ntn/scenario.hpp>
#include <ntn/sync.hpp>

namespace {

using nlohmann::json;

struct Options {
    std::string scenario_path;
    std::string out_dir = ".";
    std::uint64_t seed = 12345;
    std::uint64_t trials = 200000;
    std::string grid;  // "start:stop:step" override, dB
};

// Collects outputs and pass/fail checks for the RunReport.
class Runner {
  public:
    Runner(std::string command, const ntn::Scenario& scenario, const Options& opt)
        : command_(std::move(command)), scenario_(scenario), opt_(opt),
          t0_(std::chrono::steady_clock::now()) {}

    const ntn::Scenario& scenario() const { return scenario_; }
    const Options& options() const { return opt_; }

    void add_output(const std::string& filename, const std::string& content) {
        std::filesystem::create_directories(opt_.out_dir);
        const std::string path =
            (std::filesystem::path(opt_.out_dir) / filename).string();
        ntn::write_text_file(path, content);
        outputs_.push_back({{"path", path}, {"fnv1a64", ntn::fnv1a64_hex(content)}});
    }

    bool check_target(const std::string& name, double computed, double reference,
                      double tolerance) {
        const bool ok = std::abs(computed - reference) <= tolerance;
        checks_.push_back({{"name", name},
                           {"status", ok ? "ok" : "fail"},
                           {"computed", computed},
                           {"reference", reference},
                           {"tolerance", tolerance}});
        all_ok_ = all_ok_ && ok;
        return ok;
    }

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        json entry{{"name", name}, {"status", ok ? "ok" : "fail"}};
        if (!detail.empty()) entry["detail"] = detail;
        checks_.push_back(std::move(entry));
        all_ok_ = all_ok_ && ok;
    }

    void annotate(const std::string& key, json value) { extra_[key] = std::move(value); }

    // Prints the RunReport and converts check state into the exit code.
    int finish() {
        json report{{"command", command_},
                    {"scenario", scenario_.name},
                    {"duration_s",
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
                         .count()},
                    {"outputs", outputs_},
                    {"checks", checks_},
                    {"ok", all_ok_}};
        for (auto& [key, value] : extra_.items()) report[key] = value;
        std::printf("%s\n", report.dump(2).c_str());
        return all_ok_ ? 0 : 1;
    }

    std::string artifact(const std::string& stem) const {
        return stem + "_" + scenario_.name + ".csv";
    }

  private:
    std::string command_;
    const ntn::Scenario& scenario_;
    Options opt_;
    std::chrono::steady_clock::time_point t0_;
    json outputs_ = json::array();
    json checks_ = json::array();
    json extra_ = json::object();
    bool all_ok_ = true;
};

std::string fmt(double v) { return ntn::format_double(v); }

// table1: propagation geometry against the published delay/Doppler table.
int cmd_table1(Runner& run) {
    const ntn::Scenario& s = run.scenario();
    ntn::Csv csv({"case", "quantity", "computed", "reference", "tolerance", "status"});

    const auto row = [&](const std::string& name, const std::string& quantity,
                         double computed, double reference, double tolerance) {
        const bool ok = run.check_target(name + " " + quantity, computed, reference,
                                         tolerance);
        csv.row({name, quantity, fmt(computed), fmt(reference), fmt(tolerance),
                 ok ? "ok" : "fail"});
    };

    struct Ref {
        const char* key;
        double distance_km, rtt_zenith_ms, rtt_mask_ms;
        double tol_delay;
    };
    const Ref refs[] = {{"leo600", 1932.0, 8.0, 25.8, 0.2},
                        {"leo1200", 3131.0, 16.0, 41.8, 0.2},
                        {"geo", 40581.0, 477.0, 541.0, 1.0}};
    for (const Ref& r : refs) {
        const ntn::OrbitScenario& orbit = s.orbit(r.key);
        row(r.key, "distance_km", ntn::slant_range(orbit, orbit.min_elevation_deg),
            r.distance_km, 1.0);
        row(r.key, "rtt_zenith_ms", ntn::rtt_transparent(orbit, 90.0), r.rtt_zenith_ms,
            r.tol_delay);
        row(r.key, "rtt_mask_ms", ntn::rtt_transparent(orbit, orbit.min_elevation_deg),
            r.rtt_mask_ms, r.tol_delay);
    }

    row("leo600", "doppler_ppm", ntn::max_doppler_ppm(s.orbit("leo600")), 24.0, 1.5);
    row("leo1200", "doppler_ppm", ntn::max_doppler_ppm(s.orbit("leo1200")), 21.0, 1.5);
    row("geo", "doppler_ppm", ntn::max_doppler_ppm(s.orbit("geo")), 0.0, 1.0);

    const auto rate = [&](const char* key) {
        return ntn::analyze_pass(ntn::propagate_pass(s.orbit(key), true, s.pass_step_s))
            .max_doppler_rate_ppm_s;
    };
    row("leo600", "doppler_rate_ppm_s", rate("leo600"), 0.27, 0.27 * 0.25);
    row("leo1200", "doppler_rate_ppm_s", rate("leo1200"), 0.13, 0.13 * 0.25);

    run.add_output(run.artifact("table1"), csv.str());
    return run.finish();
}

// table2: link budgets against the published SNR table, breakdown included.
int cmd_table2(Runner& run) {
    const ntn::Scenario& s = run.scenario();
    ntn::Csv csv({"case", "quantity", "computed", "reference", "tolerance", "status"});
    json breakdowns = json::object();

    const std::pair<const char*, double> refs[] = {
        {"geo_dl", -3.04}, {"geo_ul", -3.19}, {"leo_dl", 3.6}, {"leo_ul", 10.6}};
    for (const auto& [key, reference] : refs) {
        const ntn::LinkBudgetResult r = ntn::snr(s.budget(key));
        const bool ok = run.check_target(std::string(key) + " snr_db", r.snr_db,
                                         reference, 0.05);
        csv.row({key, "snr_db", fmt(r.snr_db), fmt(reference), "0.05",
                 ok ? "ok" : "fail"});
        json terms = json::array();
        for (const auto& [term, db] : r.breakdown)
            terms.push_back({{"term", term}, {"db", db}});
        breakdowns[key] = std::move(terms);
    }

    const double path_loss = ntn::fspl(40581.0, 2.0e9);
    const bool ok = run.check_target("fspl_40581km_2GHz_db", path_loss, 190.63, 0.02);
    csv.row({"geo", "fspl_db", fmt(path_loss), "190.63", "0.02", ok ? "ok" : "fail"});

    run.annotate("breakdown", breakdowns);
    run.add_output(run.artifact("table2"), csv.str());
    return run.finish();
}

// subprb: narrowband allocation sweep for the two uplink budgets.
int cmd_subprb(Runner& run) {
    const ntn::Scenario& s = run.scenario();

    struct Sweep {
        const char* key;
        std::vector<double> bandwidths_hz;
        std::vector<double> reference_db;
    };
    const Sweep sweeps[] = {
        {"geo_ul", {30.0e3, 45.0e3, 90.0e3, 180.0e3}, {-3.19, -4.95, -7.96, -10.97}},
        {"leo_ul", {30.0e3, 45.0e3, 90.0e3}, {10.6, 8.8, 5.8}}};

    for (const Sweep& sweep : sweeps) {
        const auto points = ntn::sub_prb_sweep(s.budget(sweep.key), sweep.bandwidths_hz);
        ntn::Csv csv({"bandwidth_hz", "snr_db"});
        for (std::size_t i = 0; i < points.size(); ++i) {
            csv.row({fmt(points[i].first), fmt(points[i].second)});
            run.check_target(std::string(sweep.key) + " @ " + fmt(points[i].first) +
                                 " Hz",
                             points[i].second, sweep.reference_db[i], 0.05);
        }
        run.add_output(run.artifact(std::string("subprb_") + sweep.key), csv.str());
    }
    return run.finish();
}

std::vector<double> resolve_grid(const Runner& run) {
    if (run.options().grid.empty()) return run.scenario().snr_grid();
    double start = 0.0, stop = 0.0, step = 0.0;
    if (std::sscanf(run.options().grid.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
        throw std::invalid_argument("--grid expects start:stop:step");
    ntn::Scenario g = run.scenario();
    g.retx.grid_start_db = start;
    g.retx.grid_stop_db = stop;
    g.retx.grid_step_db = step;
    return g.snr_grid();
}

// figures: residual-BLER and resource-usage curves over the SNR grid.
int cmd_figures(Runner& run) {
    const ntn::Scenario& s = run.scenario();
    const ntn::BlerCurve curve = s.curve();
    const std::vector<double> grid = resolve_grid(run);

    const auto harq = [](int cap) {
        return ntn::RetxPolicy{ntn::RetxKind::HarqCombining, cap, 4, 1};
    };
    const auto arq = [](int cap) {
        return ntn::RetxPolicy{ntn::RetxKind::PlainArq, cap, 4, 1};
    };
    const auto blind = [](int nb, int rounds) {
        return ntn::RetxPolicy{ntn::RetxKind::BlindPlusArq, 1, nb, rounds};
    };

    const auto emit = [&](ntn::Csv& csv, const char* token, const ntn::RetxPolicy& p,
                          int n, double snr_db) {
        const ntn::ExpectedUsage usage = ntn::expected_subframes(p, curve, snr_db);
        std::string policy = token;
        if (!usage.converged) policy += "_nonconvergent";
        csv.row({fmt(snr_db), policy, std::to_string(n), fmt(usage.residual_after_cap),
                 fmt(usage.subframes)});
        return usage;
    };

    ntn::Csv fig1({"snr_db", "policy", "n", "residual_bler", "expected_subframes"});
    bool ordering_ok = true;
    for (double snr_db : grid) {
        for (int n : {1, 2, 4}) emit(fig1, "harq", harq(n), n, snr_db);
        for (int n : {2, 4}) emit(fig1, "arq", arq(n), n, snr_db);
        ordering_ok = ordering_ok &&
                      ntn::residual_bler(harq(4), curve, snr_db, 4) <=
                          ntn::residual_bler(arq(4), curve, snr_db, 4) + 1e-15;
    }
    run.check("fig1 combining beats plain repetition at n=4", ordering_ok);
    run.add_output(run.artifact("fig1"), fig1.str());

    ntn::Csv fig2({"snr_db", "policy", "n", "residual_bler", "expected_subframes"});
    bool equal_ok = true;
    for (double snr_db : grid) {
        emit(fig2, "harq", harq(4), 4, snr_db);
        emit(fig2, "blind", blind(4, 1), 4, snr_db);
        equal_ok = equal_ok && ntn::residual_bler(harq(4), curve, snr_db, 4) ==
                                   ntn::residual_bler(blind(4, 1), curve, snr_db, 4);
    }
    run.check("fig2 blind-4 equals combining-4 under this model", equal_ok);
    run.add_output(run.artifact("fig2"), fig2.str());

    ntn::Csv fig3({"snr_db", "policy", "n", "residual_bler", "expected_subframes"});
    for (double snr_db : grid) {
        emit(fig3, "harq", harq(s.retx.harq_max_transmissions),
             s.retx.harq_max_transmissions, snr_db);
        emit(fig3, "blind", blind(s.retx.blind_n, s.retx.blind_max_rlc_rounds),
             s.retx.blind_n, snr_db);
    }
    const double blind_floor =
        ntn::expected_subframes(blind(4, s.retx.blind_max_rlc_rounds), curve, 20.0)
            .subframes;
    const double harq_floor =
        ntn::expected_subframes(harq(s.retx.harq_max_transmissions), curve, 20.0)
            .subframes;
    run.check_target("fig3 blind usage floor", blind_floor, 4.0, 1e-6);
    run.check_target("fig3 combining usage floor", harq_floor, 1.0, 1e-3);
    run.add_output(run.artifact("fig3"), fig3.str());

    // cross-check one closed-form point against the trial simulator
    const ntn::McResult mc =
        ntn::monte_carlo_retx(arq(4), curve, -4.0, run.options().trials,
                              run.options().seed, 2);
    const double exact = ntn::residual_bler(arq(4), curve, -4.0, 4);
    run.check("monte carlo agrees with closed form",
              std::abs(mc.residual_bler - exact) <= mc.confidence_halfwidth,
              "mc " + fmt(mc.residual_bler) + " vs " + fmt(exact) + " +/- " +
                  fmt(mc.confidence_halfwidth));
    return run.finish();
}

std::string trace_csv(const ntn::EventTrace& trace) {
    ntn::Csv csv({"t_ms", "actor", "event"});
    for (const ntn::TraceEvent& e : trace.events)
        csv.row({fmt(e.t_ms), e.actor, e.event});
    return csv.str();
}

int sim_ra(Runner& run) {
    const ntn::TimerSettings& t = run.scenario().timers;

    ntn::TimerConfig legacy_cfg = t.config;
    legacy_cfg.rtt_offset_enabled = false;
    const ntn::EventTrace legacy =
        ntn::run_random_access(legacy_cfg, t.rtt_ms, t.preamble_attempts_max);
    run.add_output(run.artifact("ra_legacy"), trace_csv(legacy));

    ntn::TimerConfig offset_cfg = t.config;
    offset_cfg.rtt_offset_enabled = true;
    const ntn::EventTrace offset =
        ntn::run_random_access(offset_cfg, t.rtt_ms, t.preamble_attempts_max);
    run.add_output(run.artifact("ra_offset"), trace_csv(offset));

    const bool window_too_short = t.rtt_ms >= legacy_cfg.ra_response_window_ms;
    const ntn::SimOutcome expected_legacy =
        !window_too_short ? ntn::SimOutcome::Success
        : (t.preamble_attempts_max > 1 ? ntn::SimOutcome::MaxAttempts
                                       : ntn::SimOutcome::TimerExpiry);
    run.check("legacy window outcome", legacy.outcome == expected_legacy);
    run.check("offset window reaches success",
              offset.outcome == ntn::SimOutcome::Success);
    return run.finish();
}

int sim_sr(Runner& run) {
    const ntn::TimerSettings& t = run.scenario().timers;
    const ntn::SrResult sr =
        ntn::run_sr_sequence(t.config, t.rtt_ms, t.grant_issue_delay_ms);
    run.add_output(run.artifact("sr"), trace_csv(sr.trace));

    const double prohibit = t.config.sr_prohibit_ms();
    int expected = 0;
    for (int k = 1; static_cast<double>(k) * prohibit < t.rtt_ms + t.grant_issue_delay_ms;
         ++k)
        ++expected;
    run.check("duplicate requests match the prohibit arithmetic",
              sr.duplicate_srs == expected,
              std::to_string(sr.duplicate_srs) + " observed, " +
                  std::to_string(expected) + " expected");
    run.annotate("sr_transmissions", sr.sr_transmissions);
    return run.finish();
}

int sim_reordering(Runner& run) {
    const ntn::TimerSettings& t = run.scenario().timers;

    const ntn::ReorderingResult base = ntn::run_rlc_reordering(
        t.config, t.rtt_ms, t.reordering_losses, t.reordering_n_pdus);
    run.add_output(run.artifact("reordering"), trace_csv(base.trace));

    ntn::TimerConfig extended_cfg = t.config;
    extended_cfg.t_reordering_ms = t.t_reordering_extended_ms;
    const ntn::ReorderingResult extended = ntn::run_rlc_reordering(
        extended_cfg, t.rtt_ms, t.reordering_losses, t.reordering_n_pdus);
    run.add_output(run.artifact("reordering_extended"), trace_csv(extended.trace));

    // each maximal run of consecutive lost SNs opens one gap
    int gaps = 0;
    int prev = -2;
    for (int sn : t.reordering_losses) {
        if (sn != prev + 1) ++gaps;
        prev = sn;
    }
    const int expected = t.config.t_reordering_ms <= t.rtt_ms ? gaps : 0;
    run.check("short timer reports once per gap",
              base.spurious_status_reports == expected,
              std::to_string(base.spurious_status_reports) + " observed, " +
                  std::to_string(expected) + " expected");
    run.check("both runs recover", base.recovered && extended.recovered);
    const int expected_ext = t.t_reordering_extended_ms <= t.rtt_ms ? gaps : 0;
    run.check("extended timer avoids spurious reports",
              extended.spurious_status_reports == expected_ext);
    return run.finish();
}

int sim_ta(Runner& run) {
    const ntn::SyncSettings& s = run.scenario().sync;

    const auto emit = [&](const char* stem, ntn::TaMaintenanceMode mode) {
        const ntn::TaSimResult r = ntn::ta_maintenance_sim(
            s.drift_us_per_s, s.error_budget_us, s.duration_s, mode);
        ntn::Csv csv({"t_s", "error_us", "command_issued"});
        for (const ntn::TaSimSample& sample : r.trace)
            csv.row({fmt(sample.t_s), fmt(sample.error_us),
                     sample.command_issued ? "1" : "0"});
        run.add_output(run.artifact(stem), csv.str());
        return r;
    };

    const ntn::TaSimResult network = emit("ta_network", ntn::TaMaintenanceMode::NetworkCommands);
    const ntn::TaSimResult autonomous = emit("ta_autonomous", ntn::TaMaintenanceMode::Autonomous);

    const int expected =
        s.drift_us_per_s > 0.0
            ? static_cast<int>(std::ceil(s.duration_s * s.drift_us_per_s /
                                         s.error_budget_us))
            : 0;
    run.check("network command count matches the budget arithmetic",
              network.commands_sent == expected,
              std::to_string(network.commands_sent) + " observed, " +
                  std::to_string(expected) + " expected");
    run.check("network error stays within budget",
              network.max_error_us <= s.error_budget_us + 1e-9);
    run.check("autonomous mode sends nothing", autonomous.commands_sent == 0);
    return run.finish();
}

int sim_pass(Runner& run) {
    const ntn::Scenario& s = run.scenario();
    json skipped = json::array();

    for (const auto& [key, orbit] : s.orbits) {
        std::vector<ntn::PassSample> pass;
        try {
            pass = ntn::propagate_pass(orbit, true, s.pass_step_s);
        } catch (const std::invalid_argument& e) {
            // stationary geometry has no pass to trace
            skipped.push_back({{"orbit", key}, {"reason", e.what()}});
            continue;
        }
        ntn::Csv csv({"t_s", "elevation_deg", "slant_range_km", "one_way_delay_ms",
                      "rtt_ms", "doppler_ppm"});
        for (const ntn::PassSample& p : pass)
            csv.row({fmt(p.t_s), fmt(p.elevation_deg), fmt(p.slant_range_km),
                     fmt(p.one_way_delay_ms), fmt(p.rtt_ms), fmt(p.doppler_ppm)});
        run.add_output(run.artifact("pass_" + key), csv.str());

        const ntn::PassStats stats = ntn::analyze_pass(pass);
        run.check("pass " + key + " peaks at the zenith sample",
                  stats.max_elevation_deg >=
                      orbit.min_elevation_deg - 1e-9 &&
                      pass[stats.zenith_index].elevation_deg == stats.max_elevation_deg);
        run.check("pass " + key + " spans the mask-to-mask window",
                  pass.size() >= 10 &&
                      std::abs(stats.duration_s -
                               (static_cast<double>(pass.size()) - 1.0) * s.pass_step_s) <
                          1e-9);
    }
    run.annotate("skipped", skipped);
    return run.finish();
}

int sim_switch(Runner& run) {
    const ntn::MobilitySettings& m = run.scenario().mobility;
    const ntn::ScheduleResult r = ntn::switch_schedule(
        m.plane, m.min_elevation_deg, 0.0, m.horizon_s);

    ntn::Csv csv({"sat_id", "t_start_s", "t_stop_s"});
    for (const ntn::ServingInterval& iv : r.intervals)
        csv.row({std::to_string(iv.sat_id), fmt(iv.t_start_s), fmt(iv.t_stop_s)});
    run.add_output(run.artifact("switch"), csv.str());

    bool consistent = true;
    for (std::size_t i = 0; i < r.intervals.size(); ++i) {
        const ntn::ServingInterval& iv = r.intervals[i];
        consistent = consistent && iv.t_start_s >= 0.0 && iv.t_stop_s <= m.horizon_s &&
                     iv.t_stop_s > iv.t_start_s;
        if (i > 0) consistent = consistent && iv.t_start_s >= r.intervals[i - 1].t_start_s;
    }
    run.check("schedule is time ordered inside the horizon", consistent);

    // Start-time ties put clipped tail stints after longer intervals, so a
    // consecutive pair can name a target that has already set; judge the mask
    // only where the target is still up at the switch instant.
    bool elevations_ok = true;
    for (std::size_t i = 0; i + 1 < r.intervals.size(); ++i) {
        const ntn::AssistanceInfo& ho = r.handovers[i];
        elevations_ok =
            elevations_ok && ho.serving_elevation_deg >= m.min_elevation_deg - 1e-6;
        const double t_eval =
            std::max(r.intervals[i].t_stop_s, r.intervals[i + 1].t_start_s);
        if (r.intervals[i + 1].t_stop_s >= t_eval - 1e-6)
            elevations_ok =
                elevations_ok && ho.target_elevation_deg >= m.min_elevation_deg - 1e-6;
    }
    run.check("handovers happen above the elevation mask", elevations_ok);
    run.check("gap accounting is consistent", r.gap_free == r.gaps.empty());

    json gaps = json::array();
    for (const ntn::CoverageGap& gap : r.gaps)
        gaps.push_back({{"t_start_s", gap.t_start_s}, {"t_stop_s", gap.t_stop_s}});
    run.annotate("gap_free", r.gap_free);
    run.annotate("gaps", gaps);
    return run.finish();
}

int dispatch(const std::string& command, const Options& opt) {
    const ntn::Scenario scenario = opt.scenario_path.empty()
                                       ? ntn::default_scenario()
                                       : ntn::load_scenario(opt.scenario_path);
    Runner run(command, scenario, opt);
    if (command == "table1") return cmd_table1(run);
    if (command == "table2") return cmd_table2(run);
    if (command == "subprb") return cmd_subprb(run);
    if (command == "figures") return cmd_figures(run);
    if (command == "simulate ra") return sim_ra(run);
    if (command == "simulate sr") return sim_sr(run);
    if (command == "simulate reordering") return sim_reordering(run);
    if (command == "simulate ta") return sim_ta(run);
    if (command == "simulate pass") return sim_pass(run);
    if (command == "simulate switch") return sim_switch(run);
    throw std::invalid_argument("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"link, delay, and protocol calculators for LTE-M over satellite"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--scenario", opt.scenario_path, "scenario JSON path");
    app.add_option("--out", opt.out_dir, "output directory for CSV artifacts");
    app.add_option("--seed", opt.seed, "trial simulator seed");
    app.add_option("--trials", opt.trials, "trial count for stochastic checks");
    app.add_option("--grid", opt.grid, "SNR grid override, start:stop:step dB");

    for (const char* name : {"table1", "table2", "subprb", "figures"})
        app.add_subcommand(name)->fallthrough();
    CLI::App* simulate = app.add_subcommand("simulate");
    simulate->fallthrough();
    std::string which;
    simulate->add_option("which", which, "ra | sr | reordering | ta | pass | switch")
        ->required()
        ->check(CLI::IsMember({"ra", "sr", "reordering", "ta", "pass", "switch"}));

    CLI11_PARSE(app, argc, argv);

    std::string command = app.get_subcommands().front()->get_name();
    if (command == "simulate") command += " " + which;

    try {
        return dispatch(command, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ntncalc: %s\n", e.what());
        return 2;
    }
}
