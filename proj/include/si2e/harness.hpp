#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "si2e/agent.hpp"

namespace si2e {

// Everything one experiment launch needs: which environment, which intrinsic
// methods to compare, which seeds, the shared training knobs, and where the
// result files go.
struct ExperimentConfig {
    std::string env = "four_rooms";  // figure1 | empty_room | four_rooms | doorkey
    std::string map_path;            // optional gridworld map file; overrides env lookup
    std::vector<std::string> methods = {"none", "shannon-entropy", "si2e"};
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    TrainConfig train;               // mode field is overwritten per method
    std::string out_dir = "results";
    bool curves = true;              // emit a static learning-curve SVG
    int success_window = 20;         // trailing episodes for the success-rate window
    double success_threshold = 0.9;

    void validate() const;
    Mdp make_env() const;
};

// Maps a method string to the intrinsic mode; throws on unknown names.
IntrinsicMode mode_from_method(const std::string& name);
std::string method_name(IntrinsicMode mode);

// Plain `key = value` config text, `#` comments, unknown keys rejected.
ExperimentConfig load_experiment_config(const std::string& path);
void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Seed lists come as either an inclusive range "0..9" or a comma list "0,3,7".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

// CSV serialization of one training log: header then one row per episode.
std::string episode_csv(const EpisodeLog& log);
std::vector<EpisodeRow> parse_episode_csv(const std::string& text);

// First episode index at which the trailing `window` episodes have a success
// rate of at least `threshold`; -1 when the run never gets there.
int episodes_to_threshold(const std::vector<EpisodeRow>& rows, int window, double threshold);
// Success rate over the final `window` episodes (all episodes when fewer).
double final_success_rate(const std::vector<EpisodeRow>& rows, int window);

// Linear-interpolation quantile (the numpy default); input need not be sorted.
double quantile(std::vector<double> values, double q);
double median_of(std::vector<double> values);
double iqr_of(std::vector<double> values);

struct SeedOutcome {
    std::uint64_t seed = 0;
    int episodes_to_thresh = -1;  // -1 = never reached
    double final_success = 0.0;
    int episode_count = 0;
};

struct MethodSummary {
    std::string method;
    std::vector<SeedOutcome> seeds;
    double median_episodes_to_thresh = 0.0;  // +inf when the median seed never reached it
    double iqr_episodes_to_thresh = 0.0;     // NaN when any quartile is unreached
    double median_final_success = 0.0;
    double iqr_final_success = 0.0;
};

struct ExperimentResult {
    std::vector<MethodSummary> methods;
    std::vector<std::string> csv_paths;
    std::string summary_path;
    std::string curve_path;  // empty when curves are disabled
};

MethodSummary summarize_method(const std::string& method,
                               const std::vector<std::uint64_t>& seeds,
                               const std::vector<const EpisodeLog*>& logs,
                               int window, double threshold);

// Runs every (method, seed) job on a bounded worker pool, writes one CSV per
// job plus summary.json (and optionally curves.svg) into out_dir, and logs
// progress to `out`. Throws on invalid config or unwritable output.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace si2e
