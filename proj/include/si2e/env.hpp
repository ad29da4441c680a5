#pragma once

#include <optional>
#include <string>
#include <vector>

#include "si2e/rng.hpp"

namespace si2e {

// Parsed rectangular grid map. Legend: '#' wall, '.' floor, 'S' start,
// 'G' goal, 'K' key, 'D' door (passable only after the key was picked up).
// 'K' and 'D' appear together or not at all.
struct GridworldSpec {
    int width = 0;
    int height = 0;
    std::vector<char> cells;  // row-major, holding '.', '#', or 'D'
    int start = 0;            // cell index
    int goal = 0;
    std::optional<int> key;
    std::optional<int> door;

    static GridworldSpec parse(const std::string& map_text);
    bool has_key() const { return key.has_value(); }
    int cell(int row, int col) const { return row * width + col; }
};

// Finite tabular MDP. Transitions are rows of (next state, probability)
// candidates per (state, action) pair; a single candidate row is a
// deterministic move. Rewards attach to transitions and terminal states are
// absorbing goals checked on entry.
class Mdp {
public:
    struct Outcome {
        int next_state = 0;
        double reward = 0.0;
        bool terminal = false;
    };

    int state_count() const noexcept { return state_count_; }
    int action_count() const noexcept { return action_count_; }
    int initial_state() const noexcept { return initial_state_; }
    int step_cap() const noexcept { return step_cap_; }
    const std::string& name() const noexcept { return name_; }
    bool is_terminal(int state) const;

    // One transition draw; rewards are produced by the stored transition
    // table, terminal is evaluated on the state being entered.
    Outcome sample_step(int state, int action, Rng& rng) const;

    // Hand-crafted geometric features of a state (no action component).
    const std::vector<double>& state_features(int state) const;
    int feature_dim() const;

    // Six-state ring with four actions: 0 and 1 both advance one step along
    // the ring, 2 steps backwards, and 3 jumps three positions ahead, which
    // wires states 2 and 5 into a shuttle pair. Entering state 0 pays 1 and
    // ends the episode; every episode starts at state 0 and is capped at 50
    // steps.
    static Mdp figure1();

    static Mdp gridworld(const GridworldSpec& spec, std::string name = "gridworld");
    static Mdp from_map_text(const std::string& map_text, std::string name = "gridworld");

    // Built-in maps: "figure1", "empty_room" (5x5), "four_rooms" (9x9),
    // "doorkey" (6x6 with key and door).
    static Mdp by_name(const std::string& env_name);

private:
    int state_count_ = 0;
    int action_count_ = 0;
    int initial_state_ = 0;
    int step_cap_ = 0;
    std::string name_;
    std::vector<std::vector<std::pair<int, double>>> transitions_;  // [s * A + a]
    std::vector<double> rewards_;                                   // entry-based: reward of landing
    std::vector<char> terminal_;
    std::vector<std::vector<double>> features_;
};

/// Owns per-episode state: current MDP state plus the step counter that
// enforces the cap.
class Rollout {
public:
    struct StepResult {
        int next_state = 0;
        double reward = 0.0;
        bool terminal = false;   // entered a terminal state
        bool truncated = false;  // hit the step cap
        bool done() const { return terminal || truncated; }
    };

    explicit Rollout(const Mdp& env) : env_(&env) { reset(); }

    int state() const noexcept { return state_; }
    int steps_taken() const noexcept { return steps_; }

    void reset() {
        state_ = env_->initial_state();
        steps_ = 0;
    }

    StepResult step(int action, Rng& rng);

private:
    const Mdp* env_;
    int state_ = 0;
    int steps_ = 0;
};

}  // namespace si2e
