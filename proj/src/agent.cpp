#include "si2e/agent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace si2e {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    store_.reserve(std::min<std::size_t>(capacity_, 4096));
}

void ReplayBuffer::push(const BufferedTransition& t) {
    if (store_.size() < capacity_) {
        store_.push_back(t);
    } else {
        store_[write_] = t;  // overwrite the oldest entry
        write_ = (write_ + 1) % capacity_;
    }
}

std::vector<BufferedTransition> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
    if (count > store_.size())
        throw std::invalid_argument("ReplayBuffer::sample: fewer stored transitions than requested");
    const std::vector<std::size_t> picks = rng.sample_indices(store_.size(), count);
    std::vector<BufferedTransition> out;
    out.reserve(count);
    for (std::size_t i : picks) out.push_back(store_[i]);
    return out;
}

PolicyTable::PolicyTable(int states, int actions, double alpha_pi, double alpha_v, double gamma)
    : states_(states),
      actions_(actions),
      alpha_pi_(alpha_pi),
      alpha_v_(alpha_v),
      gamma_(gamma),
      logits_(static_cast<std::size_t>(states) * actions, 0.0),
      values_(static_cast<std::size_t>(states), 0.0) {
    if (states <= 0 || actions <= 0)
        throw std::invalid_argument("PolicyTable: need positive state and action counts");
    if (!(alpha_pi > 0.0) || !(alpha_v > 0.0))
        throw std::invalid_argument("PolicyTable: learning rates must be positive");
    if (gamma < 0.0 || gamma > 1.0)
        throw std::invalid_argument("PolicyTable: gamma must lie in [0, 1]");
}

std::vector<double> PolicyTable::action_probabilities(int state) const {
    if (state < 0 || state >= states_)
        throw std::out_of_range("PolicyTable::action_probabilities: bad state");
    const double* row = logits_.data() + static_cast<std::size_t>(state) * actions_;
    const double peak = *std::max_element(row, row + actions_);
    std::vector<double> probs(actions_);
    double total = 0.0;
    for (int a = 0; a < actions_; ++a) {
        probs[a] = std::exp(row[a] - peak);
        total += probs[a];
    }
    for (double& p : probs) p /= total;
    return probs;
}

double PolicyTable::action_probability(int state, int action) const {
    if (action < 0 || action >= actions_)
        throw std::out_of_range("PolicyTable::action_probability: bad action");
    return action_probabilities(state)[action];
}

int PolicyTable::act(int state, Rng& rng) const {
    const std::vector<double> probs = action_probabilities(state);
    const double u = rng.uniform01();
    double acc = 0.0;
    for (int a = 0; a < actions_; ++a) {
        acc += probs[a];
        if (u < acc) return a;
    }
    return actions_ - 1;  // guard against accumulated rounding
}

void PolicyTable::update(std::span<const BufferedTransition> batch) {
    if (batch.empty()) throw std::invalid_argument("PolicyTable::update: empty batch");
    for (const BufferedTransition& t : batch) {
        if (t.state < 0 || t.state >= states_ || t.next_state < 0 || t.next_state >= states_ ||
            t.action < 0 || t.action >= actions_)
            throw std::invalid_argument("PolicyTable::update: transition out of range");
        const std::vector<double> probs = action_probabilities(t.state);
        const double bootstrap = t.terminal ? 0.0 : gamma_ * values_[t.next_state];
        const double delta = t.reward + bootstrap - values_[t.state];
        values_[t.state] += alpha_v_ * delta;
        double* row = logits_.data() + static_cast<std::size_t>(t.state) * actions_;
        for (int a = 0; a < actions_; ++a) {
            if (a == t.action)
                row[a] += alpha_pi_ * delta * (1.0 - probs[a]);
            else
                row[a] -= alpha_pi_ * delta * probs[a];
        }
    }
}

void TrainConfig::validate() const {
    if (beta < 0.0) throw std::invalid_argument("TrainConfig: beta must be non-negative");
    if (k < 1) throw std::invalid_argument("TrainConfig: k must be at least 1");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("TrainConfig: gamma must lie in [0, 1]");
    if (!(alpha_pi > 0.0) || !(alpha_v > 0.0))
        throw std::invalid_argument("TrainConfig: learning rates must be positive");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch size must be positive");
    if (update_interval < 1)
        throw std::invalid_argument("TrainConfig: update interval must be positive");
    if (total_steps < 1) throw std::invalid_argument("TrainConfig: total steps must be positive");
    if (buffer_capacity == 0) throw std::invalid_argument("TrainConfig: buffer capacity must be positive");
    if (mode != IntrinsicMode::none && batch_size < k)
        throw std::invalid_argument("TrainConfig: batch size must reach k for intrinsic rewards");
    if (eta < 0.0) throw std::invalid_argument("TrainConfig: eta must be non-negative");
}

namespace {

std::vector<double> embed(const Mdp& env, int state, int action) {
    const std::vector<double>& f = env.state_features(state);
    std::vector<double> e;
    e.reserve(f.size() + env.action_count());
    e.insert(e.end(), f.begin(), f.end());
    for (int a = 0; a < env.action_count(); ++a) e.push_back(a == action ? 1.0 : 0.0);
    return e;
}

double record_value(const PolicyTable& policy, const TrainConfig& cfg, int state, int action) {
    if (cfg.value_source == ValueSource::policy_prob)
        return policy.action_probability(state, action);
    return std::clamp(policy.state_value(state), 0.0, 1.0);
}

std::string summarize(const Mdp& env, const TrainConfig& cfg) {
    std::ostringstream out;
    const char* mode = cfg.mode == IntrinsicMode::none ? "none"
                       : cfg.mode == IntrinsicMode::shannon ? "shannon-entropy"
                                                            : "si2e";
    out << "env=" << env.name() << " mode=" << mode << " beta=" << cfg.beta << " k=" << cfg.k
        << " gamma=" << cfg.gamma << " alpha_pi=" << cfg.alpha_pi << " alpha_v=" << cfg.alpha_v
        << " batch=" << cfg.batch_size << " t_up=" << cfg.update_interval
        << " steps=" << cfg.total_steps << " seed=" << cfg.seed;
    return out.str();
}

}  // namespace

LossBundle window_losses(std::span<const BufferedTransition> batch, int action_count, double eta) {
    if (batch.empty()) throw std::invalid_argument("window_losses: empty batch");
    std::vector<int> zs, ss, sps;
    for (const BufferedTransition& t : batch) {
        zs.push_back(t.state * action_count + t.action);
        ss.push_back(t.state);
        sps.push_back(t.next_state);
    }
    auto compact = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    compact(zs);
    compact(ss);
    compact(sps);
    auto index_of = [](const std::vector<int>& v, int key) {
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), key) - v.begin());
    };

    // Laplace-smoothed empirical joints keep every cell strictly positive,
    // which the bound machinery requires.
    auto smoothed = [&](const std::vector<int>& col_alphabet, bool next) {
        std::vector<std::vector<double>> counts(zs.size(),
                                                std::vector<double>(col_alphabet.size(), 1.0));
        for (const BufferedTransition& t : batch) {
            const std::size_t zi = index_of(zs, t.state * action_count + t.action);
            const std::size_t ci = index_of(col_alphabet, next ? t.next_state : t.state);
            counts[zi][ci] += 1.0;
        }
        double total = 0.0;
        for (const auto& row : counts)
            for (double c : row) total += c;
        for (auto& row : counts)
            for (double& c : row) c /= total;
        // Renormalize exactly so the table passes the sum check.
        double sum = 0.0;
        for (const auto& row : counts)
            for (double c : row) sum += c;
        for (auto& row : counts)
            for (double& c : row) c /= sum;
        return JointDistribution(counts);
    };

    const JointDistribution joint_zs_table = smoothed(ss, false);
    const JointDistribution joint_zsp_table = smoothed(sps, true);

    const double up = l_up(joint_zs_table, true_marginal_of_rows(joint_zs_table));
    const double zgs = l_zgs(joint_zs_table, true_rows_given_cols(joint_zs_table));
    const double sgz = l_sgz(joint_zsp_table, true_cols_given_rows(joint_zsp_table));
    return combined_loss(up, zgs, sgz, eta);
}

EpisodeLog train(const Mdp& env, const TrainConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    Rng rng(cfg.seed);
    PolicyTable policy(env.state_count(), env.action_count(), cfg.alpha_pi, cfg.alpha_v, cfg.gamma);
    ReplayBuffer buffer(cfg.buffer_capacity);
    Rollout rollout(env);

    EpisodeLog log;
    log.seed = cfg.seed;
    log.config_summary = summarize(env, cfg);

    const bool use_intrinsic = cfg.mode != IntrinsicMode::none && cfg.beta > 0.0;
    int episode = 0;
    double ep_return = 0.0, ep_intrinsic = 0.0;
    int ep_steps = 0;

    for (long long step = 1; step <= cfg.total_steps; ++step) {
        const int state = rollout.state();
        const int action = policy.act(state, rng);
        if (observer) observer(episode, step, state, action);
        const Rollout::StepResult res = rollout.step(action, rng);

        double intrinsic = 0.0;
        if (use_intrinsic && buffer.size() >= static_cast<std::size_t>(cfg.k)) {
            const std::size_t draw = std::min<std::size_t>(cfg.batch_size, buffer.size());
            std::vector<BufferedTransition> sampled = buffer.sample(draw, rng);
            std::vector<TransitionRecord> records;
            records.reserve(sampled.size() + 1);
            for (const BufferedTransition& t : sampled)
                records.push_back({t.state, t.action, t.next_state, t.reward,
                                   embed(env, t.state, t.action),
                                   record_value(policy, cfg, t.state, t.action)});
            records.push_back({state, action, res.next_state, res.reward,
                               embed(env, state, action), record_value(policy, cfg, state, action)});
            const TransitionBatch tb(std::move(records));
            const CommunityAssignment communities =
                cfg.mode == IntrinsicMode::si2e ? build_hierarchy(tb) : single_community(tb);
            intrinsic = intrinsic_reward_at(tb, communities, cfg.k, tb.size() - 1);
        }

        buffer.push({state, action, res.next_state,
                     combine_reward(res.reward, intrinsic, cfg.beta), res.terminal});
        ep_return += res.reward;
        ep_intrinsic += intrinsic;
        ++ep_steps;

        if (step % cfg.update_interval == 0 && buffer.size() > 0) {
            const std::size_t draw = std::min<std::size_t>(cfg.batch_size, buffer.size());
            const std::vector<BufferedTransition> window = buffer.sample(draw, rng);
            policy.update(window);
            if (cfg.track_losses)
                log.losses.push_back({step, window_losses(window, env.action_count(), cfg.eta)});
        }

        if (res.done()) {
            log.episodes.push_back(
                {episode, ep_return, res.terminal, ep_steps, ep_intrinsic / ep_steps});
            ++episode;
            ep_return = ep_intrinsic = 0.0;
            ep_steps = 0;
            rollout.reset();
        }
    }
    return log;
}

}  // namespace si2e
