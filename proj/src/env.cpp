#include "si2e/env.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace si2e {

namespace {
constexpr double kTau = 6.283185307179586476925286766559;
}

GridworldSpec GridworldSpec::parse(const std::string& map_text) {
    std::vector<std::string> lines;
    std::istringstream in(map_text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw std::invalid_argument("GridworldSpec: empty map");

    GridworldSpec spec;
    spec.height = static_cast<int>(lines.size());
    spec.width = static_cast<int>(lines.front().size());
    spec.cells.assign(static_cast<std::size_t>(spec.width) * spec.height, '.');
    int starts = 0, goals = 0;
    for (int r = 0; r < spec.height; ++r) {
        if (static_cast<int>(lines[r].size()) != spec.width)
            throw std::invalid_argument("GridworldSpec: map rows must share one width");
        for (int c = 0; c < spec.width; ++c) {
            const char ch = lines[r][c];
            const int idx = spec.cell(r, c);
            switch (ch) {
                case '#': spec.cells[idx] = '#'; break;
                case '.': break;
                case 'S': spec.start = idx; ++starts; break;
                case 'G': spec.goal = idx; ++goals; break;
                case 'K':
                    if (spec.key) throw std::invalid_argument("GridworldSpec: multiple keys");
                    spec.key = idx;
                    break;
                case 'D':
                    if (spec.door) throw std::invalid_argument("GridworldSpec: multiple doors");
                    spec.door = idx;
                    spec.cells[idx] = 'D';
                    break;
                default:
                    throw std::invalid_argument("GridworldSpec: unknown map character");
            }
        }
    }
    if (starts != 1 || goals != 1)
        throw std::invalid_argument("GridworldSpec: map needs exactly one start and one goal");
    if (spec.key.has_value() != spec.door.has_value())
        throw std::invalid_argument("GridworldSpec: key and door must appear together");
    if (spec.cells[spec.start] == '#') throw std::invalid_argument("GridworldSpec: start is a wall");
    if (spec.cells[spec.goal] == '#') throw std::invalid_argument("GridworldSpec: goal is a wall");
    return spec;
}

bool Mdp::is_terminal(int state) const {
    if (state < 0 || state >= state_count_) throw std::out_of_range("Mdp::is_terminal: bad state");
    return terminal_[state] != 0;
}

Mdp::Outcome Mdp::sample_step(int state, int action, Rng& rng) const {
    if (state < 0 || state >= state_count_) throw std::out_of_range("Mdp::sample_step: bad state");
    if (action < 0 || action >= action_count_)
        throw std::out_of_range("Mdp::sample_step: bad action");
    const auto& row = transitions_[static_cast<std::size_t>(state) * action_count_ + action];
    int next = row.front().first;
    if (row.size() > 1) {
        // Deterministic rows never consume randomness.
        const double u = rng.uniform01();
        double acc = 0.0;
        for (const auto& [candidate, prob] : row) {
            acc += prob;
            next = candidate;
            if (u < acc) break;
        }
    }
    return {next, rewards_[next], terminal_[next] != 0};
}

const std::vector<double>& Mdp::state_features(int state) const {
    if (state < 0 || state >= state_count_)
        throw std::out_of_range("Mdp::state_features: bad state");
    return features_[state];
}

int Mdp::feature_dim() const { return static_cast<int>(features_.front().size()); }

Mdp Mdp::figure1() {
    Mdp m;
    m.state_count_ = 6;
    m.action_count_ = 4;
    m.initial_state_ = 0;
    m.step_cap_ = 50;
    m.name_ = "figure1";
    m.transitions_.resize(24);
    for (int s = 0; s < 6; ++s) {
        m.transitions_[s * 4 + 0] = {{(s + 1) % 6, 1.0}};
        m.transitions_[s * 4 + 1] = {{(s + 1) % 6, 1.0}};
        m.transitions_[s * 4 + 2] = {{(s + 5) % 6, 1.0}};
        m.transitions_[s * 4 + 3] = {{(s + 3) % 6, 1.0}};
    }
    m.rewards_.assign(6, 0.0);
    m.rewards_[0] = 1.0;
    m.terminal_.assign(6, 0);
    m.terminal_[0] = 1;
    m.features_.resize(6);
    for (int s = 0; s < 6; ++s)
        m.features_[s] = {std::cos(kTau * s / 6.0), std::sin(kTau * s / 6.0)};
    return m;
}

Mdp Mdp::gridworld(const GridworldSpec& spec, std::string name) {
    const int cells = spec.width * spec.height;
    const int planes = spec.has_key() ? 2 : 1;
    Mdp m;
    m.state_count_ = cells * planes;
    m.action_count_ = 4;
    m.step_cap_ = 4 * cells;
    m.name_ = std::move(name);
    m.initial_state_ = spec.start;  // key not yet held

    m.transitions_.resize(static_cast<std::size_t>(m.state_count_) * 4);
    m.rewards_.assign(m.state_count_, 0.0);
    m.terminal_.assign(m.state_count_, 0);
    m.features_.resize(m.state_count_);

    const int dr[4] = {-1, 0, 1, 0};  // N, E, S, W
    const int dc[4] = {0, 1, 0, -1};
    for (int plane = 0; plane < planes; ++plane) {
        for (int cell = 0; cell < cells; ++cell) {
            const int state = cell + plane * cells;
            const int row = cell / spec.width;
            const int col = cell % spec.width;
            for (int a = 0; a < 4; ++a) {
                const int nr = row + dr[a];
                const int nc = col + dc[a];
                int target = cell;
                if (nr >= 0 && nr < spec.height && nc >= 0 && nc < spec.width) {
                    const int tcell = spec.cell(nr, nc);
                    const char terrain = spec.cells[tcell];
                    const bool blocked =
                        terrain == '#' || (terrain == 'D' && plane == 0);
                    if (!blocked) target = tcell;
                }
                int nplane = plane;
                if (spec.has_key() && plane == 0 && target == *spec.key) nplane = 1;
                m.transitions_[static_cast<std::size_t>(state) * 4 + a] = {
                    {target + nplane * cells, 1.0}};
            }
            m.rewards_[state] = cell == spec.goal ? 1.0 : 0.0;
            m.terminal_[state] = cell == spec.goal ? 1 : 0;
            std::vector<double> f = {
                spec.height > 1 ? static_cast<double>(row) / (spec.height - 1) : 0.0,
                spec.width > 1 ? static_cast<double>(col) / (spec.width - 1) : 0.0};
            if (spec.has_key()) f.push_back(static_cast<double>(plane));
            m.features_[state] = std::move(f);
        }
    }

    // Breadth-first sweep over the full state space; a map whose goal cannot
    // be entered from the start is rejected.
    std::vector<char> seen(m.state_count_, 0);
    std::deque<int> queue{m.initial_state_};
    seen[m.initial_state_] = 1;
    bool goal_reached = false;
    while (!queue.empty() && !goal_reached) {
        const int s = queue.front();
        queue.pop_front();
        for (int a = 0; a < 4 && !goal_reached; ++a) {
            const int nxt = m.transitions_[static_cast<std::size_t>(s) * 4 + a].front().first;
            if (m.terminal_[nxt]) goal_reached = true;
            if (!seen[nxt]) {
                seen[nxt] = 1;
                queue.push_back(nxt);
            }
        }
    }
    if (!goal_reached) throw std::invalid_argument("gridworld: goal unreachable from start");
    return m;
}

Mdp Mdp::from_map_text(const std::string& map_text, std::string name) {
    return gridworld(GridworldSpec::parse(map_text), std::move(name));
}

namespace {

const char* kEmptyRoomMap =
    "S....\n"
    ".....\n"
    ".....\n"
    ".....\n"
    "....G\n";

const char* kFourRoomsMap =
    "S...#....\n"
    "....#....\n"
    ".........\n"
    "....#....\n"
    "#.#####.#\n"
    "....#....\n"
    ".........\n"
    "....#....\n"
    "....#...G\n";

const char* kDoorkeyMap =
    "S..#..\n"
    "...#..\n"
    ".K.#..\n"
    "...#..\n"
    "...D..\n"
    "...#.G\n";

}  // namespace

Mdp Mdp::by_name(const std::string& env_name) {
    if (env_name == "figure1") return figure1();
    if (env_name == "empty_room") return from_map_text(kEmptyRoomMap, "empty_room");
    if (env_name == "four_rooms") return from_map_text(kFourRoomsMap, "four_rooms");
    if (env_name == "doorkey") return from_map_text(kDoorkeyMap, "doorkey");
    throw std::invalid_argument("Mdp::by_name: unknown environment '" + env_name + "'");
}

Rollout::StepResult Rollout::step(int action, Rng& rng) {
    const Mdp::Outcome out = env_->sample_step(state_, action, rng);
    ++steps_;
    state_ = out.next_state;
    StepResult res;
    res.next_state = out.next_state;
    res.reward = out.reward;
    res.terminal = out.terminal;
    res.truncated = !out.terminal && steps_ >= env_->step_cap();
    return res;
}

}  // namespace si2e
