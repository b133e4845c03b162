#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relzkp/errors.hpp"
#include "relzkp/rng.hpp"

namespace relzkp {

inline constexpr double kSpeedOfLightMps = 299792458.0;

// One-way light time in nanoseconds for a separation in meters.
inline double light_time_ns(double distance_m) { return distance_m / kSpeedOfLightMps * 1e9; }

// Distances, delays and clock error budget for the two verifier-prover pairs.
// tau_ns is the check threshold; by default floor(d/c) in ns, overridable.
struct SpacetimeConfig {
    double distance_m = 300.0;
    double tau_ns = 1000.0;
    double clock_skew_ns = 30.0;      // per-verifier bound (Delta)
    double link_latency_ns = 330.0;   // one-way prover<->verifier, fiber + hardware
    double latency_jitter_ns = 25.0;  // uniform +- per message leg
    double compute_ns = 6.4;          // prover response time
    double trigger_offset_ns = 0.0;   // V2 trigger relative to V1
    double trigger_interval_ns = 1000.0;

    void validate() const {
        if (clock_skew_ns < 0 || link_latency_ns < 0 || latency_jitter_ns < 0 || compute_ns < 0 ||
            trigger_interval_ns < 0)
            throw InvalidParameter("spacetime latencies must be non-negative");
        if (!(tau_ns > 0)) throw InvalidParameter("tau must be positive");
    }

    // Reference deployment: 300 m separation (tau 1000 ns), GPS-grade clock
    // accuracy 30 ns, ~330 ns per hop, single-cycle commitment compute.
    static SpacetimeConfig reference() { return SpacetimeConfig{}; }

    // All delays and clock errors zeroed; isolates protocol logic.
    static SpacetimeConfig zero() {
        SpacetimeConfig c;
        c.clock_skew_ns = 0.0;
        c.link_latency_ns = 0.0;
        c.latency_jitter_ns = 0.0;
        c.trigger_offset_ns = 0.0;
        return c;
    }

    static SpacetimeConfig with_derived_tau(double distance_m) {
        SpacetimeConfig c;
        c.distance_m = distance_m;
        c.tau_ns = std::floor(light_time_ns(distance_m));
        return c;
    }

    static SpacetimeConfig profile(const std::string& name) {
        if (name == "reference") return reference();
        if (name == "zero") return zero();
        throw ConfigError("unknown spacetime profile: " + name);
    }

    nlohmann::json to_json() const {
        return {{"distance_m", distance_m},
                {"tau_ns", tau_ns},
                {"clock_skew_ns", clock_skew_ns},
                {"link_latency_ns", link_latency_ns},
                {"latency_jitter_ns", latency_jitter_ns},
                {"compute_ns", compute_ns},
                {"trigger_offset_ns", trigger_offset_ns},
                {"trigger_interval_ns", trigger_interval_ns}};
    }

    static SpacetimeConfig from_json(const nlohmann::json& j) {
        SpacetimeConfig c;
        c.distance_m = j.value("distance_m", c.distance_m);
        c.tau_ns = j.value("tau_ns", c.tau_ns);
        c.clock_skew_ns = j.value("clock_skew_ns", c.clock_skew_ns);
        c.link_latency_ns = j.value("link_latency_ns", c.link_latency_ns);
        c.latency_jitter_ns = j.value("latency_jitter_ns", c.latency_jitter_ns);
        c.compute_ns = j.value("compute_ns", c.compute_ns);
        c.trigger_offset_ns = j.value("trigger_offset_ns", c.trigger_offset_ns);
        c.trigger_interval_ns = j.value("trigger_interval_ns", c.trigger_interval_ns);
        c.validate();
        return c;
    }
};

// The four timestamps of one round as observed by the verifiers' clocks.
struct RoundTimes {
    double t1 = 0, t2 = 0, t3 = 0, t4 = 0;
};

struct EventRecord {
    std::string event;
    std::string role;
    double true_time_ns = 0;
    double observed_time_ns = 0;
};

using EventLog = std::vector<EventRecord>;

// Strict check |t1-t4| < tau and |t2-t3| < tau; worst_case widens each
// observed difference by 2*Delta before comparing.
inline bool timing_check(const RoundTimes& t, double tau_ns, double skew_ns, bool worst_case) {
    double d14 = std::fabs(t.t1 - t.t4);
    double d23 = std::fabs(t.t2 - t.t3);
    if (worst_case) {
        d14 += 2.0 * skew_ns;
        d23 += 2.0 * skew_ns;
    }
    return d14 < tau_ns && d23 < tau_ns;
}

// Deterministic event-loop model of one round's message flight times. Each
// verifier's clock skew is drawn once per run and stays fixed; per-leg
// latency jitter is drawn per message. If an adversary makes P2's reveal
// depend on the query (or P1's commit on the challenge), the response picks
// up the full cross-prover light time d/c, which pushes the corresponding
// difference past tau.
class SpacetimeSimulator {
public:
    SpacetimeSimulator(const SpacetimeConfig& cfg, SeededRng skew_rng) : cfg_(cfg) {
        cfg_.validate();
        v1_skew_ = skew_rng.uniform_symmetric(cfg_.clock_skew_ns);
        v2_skew_ = skew_rng.uniform_symmetric(cfg_.clock_skew_ns);
    }

    double v1_skew() const { return v1_skew_; }
    double v2_skew() const { return v2_skew_; }
    const SpacetimeConfig& config() const { return cfg_; }

    RoundTimes simulate_round(std::uint64_t round_index, SeededRng& rng, bool reveal_depends_on_query,
                              bool commit_depends_on_challenge = false, EventLog* log = nullptr) const {
        const double epoch = static_cast<double>(round_index) * cfg_.trigger_interval_ns;
        const double cross = light_time_ns(cfg_.distance_m);

        double t1_true = epoch;
        double commit_extra = commit_depends_on_challenge ? cross : 0.0;
        double t2_true = t1_true + leg(rng) + cfg_.compute_ns + commit_extra + leg(rng);

        double t3_true = epoch + cfg_.trigger_offset_ns;
        double reveal_extra = reveal_depends_on_query ? cross : 0.0;
        double t4_true = t3_true + leg(rng) + cfg_.compute_ns + reveal_extra + leg(rng);

        RoundTimes t{t1_true + v1_skew_, t2_true + v1_skew_, t3_true + v2_skew_, t4_true + v2_skew_};
        if (log) {
            log->push_back({"query_sent", "V1", t1_true, t.t1});
            log->push_back({"commit_received", "V1", t2_true, t.t2});
            log->push_back({"challenge_sent", "V2", t3_true, t.t3});
            log->push_back({"reveal_received", "V2", t4_true, t.t4});
        }
        return t;
    }

private:
    double leg(SeededRng& rng) const { return cfg_.link_latency_ns + rng.uniform_symmetric(cfg_.latency_jitter_ns); }

    SpacetimeConfig cfg_;
    double v1_skew_ = 0;
    double v2_skew_ = 0;
};

}  // namespace relzkp
