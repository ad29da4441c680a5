#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "si2e/env.hpp"
#include "si2e/exploration.hpp"
#include "si2e/variational.hpp"

namespace si2e {

struct BufferedTransition {
    int state = 0;
    int action = 0;
    int next_state = 0;
    double reward = 0.0;  // extrinsic plus scaled intrinsic, frozen at insertion
    bool terminal = false;
};

// Uniform-sampling replay store with a fixed capacity ring.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    std::size_t size() const noexcept { return store_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    void push(const BufferedTransition& t);

    // Uniform draw without replacement; count must not exceed size().
    std::vector<BufferedTransition> sample(std::size_t count, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t write_ = 0;
    std::vector<BufferedTransition> store_;
};

// Tabular softmax actor plus state-value critic sharing one advantage signal.
class PolicyTable {
public:
    PolicyTable(int states, int actions, double alpha_pi, double alpha_v, double gamma);

    int state_count() const noexcept { return states_; }
    int action_count() const noexcept { return actions_; }

    std::vector<double> action_probabilities(int state) const;
    double action_probability(int state, int action) const;
    double state_value(int state) const { return values_.at(static_cast<std::size_t>(state)); }

    int act(int state, Rng& rng) const;

    // One advantage actor-critic pass over the batch, in order: per
    // transition, delta = r + gamma * V(s') * (1 - terminal) - V(s) moves the
    // critic by alpha_v * delta and the actor logits by alpha_pi * delta
    // along grad log pi.
    void update(std::span<const BufferedTransition> batch);

private:
    int states_, actions_;
    double alpha_pi_, alpha_v_, gamma_;
    std::vector<double> logits_;
    std::vector<double> values_;
};

enum class IntrinsicMode { none, shannon, si2e };

enum class ValueSource {
    policy_prob,  // pi(a|s) of the current policy
    state_value,  // critic estimate V(s), clamped into [0, 1]
};

struct TrainConfig {
    IntrinsicMode mode = IntrinsicMode::none;
    double beta = 0.005;
    int k = 5;
    double gamma = 0.99;
    double alpha_pi = 0.1;
    double alpha_v = 0.1;
    int batch_size = 64;
    int update_interval = 16;
    long long total_steps = 10000;
    std::uint64_t seed = 0;
    std::size_t buffer_capacity = 1u << 17;
    ValueSource value_source = ValueSource::policy_prob;
    bool track_losses = true;  // representation-loss diagnostics per update window
    double eta = 1.0;

    void validate() const;
};

struct EpisodeRow {
    int episode = 0;
    double episode_return = 0.0;  // extrinsic only
    bool success = false;         // ended by reaching a terminal state
    int steps = 0;
    double intrinsic_mean = 0.0;
};

struct LossRow {
    long long step = 0;
    LossBundle bundle;
};

struct EpisodeLog {
    std::vector<EpisodeRow> episodes;
    std::vector<LossRow> losses;
    std::uint64_t seed = 0;
    std::string config_summary;
};

// Called once per environment step with (episode index, 1-based step, state,
// chosen action) before the transition is applied.
using StepObserver = std::function<void(int, long long, int, int)>;

// Runs the full training loop: act, score the fresh transition with the
// configured intrinsic bonus, freeze the combined reward into the replay
// buffer, and update the tables every update_interval steps. Only completed
// episodes are logged. With beta = 0 or mode none the intrinsic machinery is
// skipped entirely, so trajectories match plain actor-critic draw for draw.
EpisodeLog train(const Mdp& env, const TrainConfig& cfg, const StepObserver& observer = {});

// Tabular representation losses of one update window: empirical smoothed
// joints over (z = state-action pair, s) and (z, s'), scored with their own
// true decoders.
LossBundle window_losses(std::span<const BufferedTransition> batch, int action_count, double eta);

}  // namespace si2e
