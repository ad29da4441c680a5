#include "si2e/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace si2e {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
    if (env.empty() && map_path.empty())
        throw std::invalid_argument("ExperimentConfig: need an environment name or a map path");
    if (methods.empty()) throw std::invalid_argument("ExperimentConfig: no methods selected");
    for (const std::string& m : methods) mode_from_method(m);  // throws on unknown names
    if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: seed list is empty");
    if (out_dir.empty()) throw std::invalid_argument("ExperimentConfig: output directory is empty");
    if (success_window < 1)
        throw std::invalid_argument("ExperimentConfig: success window must be positive");
    if (success_threshold <= 0.0 || success_threshold > 1.0)
        throw std::invalid_argument("ExperimentConfig: success threshold must lie in (0, 1]");
    TrainConfig probe = train;
    probe.mode = IntrinsicMode::si2e;  // strictest validation path
    probe.validate();
}

Mdp ExperimentConfig::make_env() const {
    if (!map_path.empty()) {
        std::ifstream in(map_path);
        if (!in) throw std::runtime_error("cannot open map file: " + map_path);
        std::ostringstream text;
        text << in.rdbuf();
        return Mdp::from_map_text(text.str(), fs::path(map_path).stem().string());
    }
    return Mdp::by_name(env);
}

IntrinsicMode mode_from_method(const std::string& name) {
    if (name == "none") return IntrinsicMode::none;
    if (name == "shannon-entropy") return IntrinsicMode::shannon;
    if (name == "si2e") return IntrinsicMode::si2e;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected none, shannon-entropy, or si2e)");
}

std::string method_name(IntrinsicMode mode) {
    switch (mode) {
        case IntrinsicMode::none: return "none";
        case IntrinsicMode::shannon: return "shannon-entropy";
        case IntrinsicMode::si2e: return "si2e";
    }
    throw std::logic_error("unreachable intrinsic mode");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config key '" + key + "' expects a boolean, got '" + value + "'");
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' expects a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "' expects an integer, got '" + value +
                                    "'");
    }
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    const std::string body = trim(text);
    if (body.empty()) throw std::invalid_argument("empty seed list");
    const std::size_t dots = body.find("..");
    std::vector<std::uint64_t> seeds;
    if (dots != std::string::npos) {
        const long long lo = parse_int(trim(body.substr(0, dots)), "seeds");
        const long long hi = parse_int(trim(body.substr(dots + 2)), "seeds");
        if (lo < 0 || hi < lo) throw std::invalid_argument("bad seed range '" + body + "'");
        for (long long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
        for (const std::string& item : split_list(body)) {
            const long long s = parse_int(item, "seeds");
            if (s < 0) throw std::invalid_argument("seeds must be non-negative");
            seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (seeds.empty()) throw std::invalid_argument("empty seed list");
    return seeds;
}

void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "env") cfg.env = value;
    else if (key == "map") cfg.map_path = value;
    else if (key == "methods") {
        cfg.methods = split_list(value);
        if (cfg.methods.empty()) throw std::invalid_argument("config key 'methods' is empty");
    } else if (key == "seeds") cfg.seeds = parse_seed_list(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "curves") cfg.curves = parse_bool(value, key);
    else if (key == "window") cfg.success_window = static_cast<int>(parse_int(value, key));
    else if (key == "threshold") cfg.success_threshold = parse_double(value, key);
    else if (key == "steps") cfg.train.total_steps = parse_int(value, key);
    else if (key == "beta") cfg.train.beta = parse_double(value, key);
    else if (key == "k") cfg.train.k = static_cast<int>(parse_int(value, key));
    else if (key == "gamma") cfg.train.gamma = parse_double(value, key);
    else if (key == "alpha_pi") cfg.train.alpha_pi = parse_double(value, key);
    else if (key == "alpha_v") cfg.train.alpha_v = parse_double(value, key);
    else if (key == "batch") cfg.train.batch_size = static_cast<int>(parse_int(value, key));
    else if (key == "update_interval")
        cfg.train.update_interval = static_cast<int>(parse_int(value, key));
    else if (key == "buffer")
        cfg.train.buffer_capacity = static_cast<std::size_t>(parse_int(value, key));
    else if (key == "eta") cfg.train.eta = parse_double(value, key);
    else if (key == "track_losses") cfg.train.track_losses = parse_bool(value, key);
    else if (key == "value_source") {
        if (value == "policy_prob") cfg.train.value_source = ValueSource::policy_prob;
        else if (value == "state_value") cfg.train.value_source = ValueSource::state_value;
        else
            throw std::invalid_argument(
                "config key 'value_source' expects policy_prob or state_value, got '" + value +
                "'");
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                                     ": empty config key");
        set_config_key(cfg, key, value);
    }
    return cfg;
}

std::string episode_csv(const EpisodeLog& log) {
    std::ostringstream out;
    out << "episode,return,success,steps,intrinsic_mean\n";
    out << std::setprecision(17);
    for (const EpisodeRow& row : log.episodes)
        out << row.episode << ',' << row.episode_return << ',' << (row.success ? 1 : 0) << ','
            << row.steps << ',' << row.intrinsic_mean << '\n';
    return out.str();
}

std::vector<EpisodeRow> parse_episode_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "episode,return,success,steps,intrinsic_mean")
        throw std::invalid_argument("episode CSV: missing or unexpected header");
    std::vector<EpisodeRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string field;
        EpisodeRow row;
        auto next = [&]() {
            if (!std::getline(ss, field, ','))
                throw std::invalid_argument("episode CSV: short row '" + line + "'");
            return field;
        };
        row.episode = static_cast<int>(parse_int(next(), "episode"));
        row.episode_return = parse_double(next(), "return");
        row.success = parse_int(next(), "success") != 0;
        row.steps = static_cast<int>(parse_int(next(), "steps"));
        row.intrinsic_mean = parse_double(next(), "intrinsic_mean");
        rows.push_back(row);
    }
    return rows;
}

int episodes_to_threshold(const std::vector<EpisodeRow>& rows, int window, double threshold) {
    if (window < 1) throw std::invalid_argument("episodes_to_threshold: window must be positive");
    int successes = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        successes += rows[i].success ? 1 : 0;
        if (i >= static_cast<std::size_t>(window))
            successes -= rows[i - window].success ? 1 : 0;
        const int have = static_cast<int>(std::min<std::size_t>(i + 1, window));
        if (have == window && successes >= threshold * window - 1e-12)
            return static_cast<int>(i);
    }
    return -1;
}

double final_success_rate(const std::vector<EpisodeRow>& rows, int window) {
    if (rows.empty()) return 0.0;
    const std::size_t take = std::min<std::size_t>(rows.size(), static_cast<std::size_t>(window));
    int successes = 0;
    for (std::size_t i = rows.size() - take; i < rows.size(); ++i)
        successes += rows[i].success ? 1 : 0;
    return static_cast<double>(successes) / static_cast<double>(take);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: empty sample");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    if (lo == hi) return values[lo];
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double median_of(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double iqr_of(std::vector<double> values) {
    const double q1 = quantile(values, 0.25);
    const double q3 = quantile(std::move(values), 0.75);
    return q3 - q1;
}

MethodSummary summarize_method(const std::string& method,
                               const std::vector<std::uint64_t>& seeds,
                               const std::vector<const EpisodeLog*>& logs,
                               int window, double threshold) {
    if (seeds.size() != logs.size())
        throw std::invalid_argument("summarize_method: seed/log count mismatch");
    MethodSummary summary;
    summary.method = method;
    std::vector<double> reach, fin;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        SeedOutcome o;
        o.seed = seeds[i];
        o.episodes_to_thresh = episodes_to_threshold(logs[i]->episodes, window, threshold);
        o.final_success = final_success_rate(logs[i]->episodes, window);
        o.episode_count = static_cast<int>(logs[i]->episodes.size());
        summary.seeds.push_back(o);
        // Runs that never reach the threshold rank above every run that does.
        reach.push_back(o.episodes_to_thresh < 0 ? std::numeric_limits<double>::infinity()
                                                 : static_cast<double>(o.episodes_to_thresh));
        fin.push_back(o.final_success);
    }
    summary.median_episodes_to_thresh = median_of(reach);
    summary.iqr_episodes_to_thresh = iqr_of(reach);  // NaN when inf - inf
    summary.median_final_success = median_of(fin);
    summary.iqr_final_success = iqr_of(fin);
    return summary;
}

namespace {

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

json summary_json(const ExperimentConfig& cfg, const std::vector<MethodSummary>& methods,
                  const std::string& env_name) {
    json doc;
    doc["environment"] = env_name;
    doc["threshold"] = cfg.success_threshold;
    doc["window"] = cfg.success_window;
    doc["train"] = {
        {"steps", cfg.train.total_steps},   {"beta", cfg.train.beta},
        {"k", cfg.train.k},                 {"gamma", cfg.train.gamma},
        {"alpha_pi", cfg.train.alpha_pi},   {"alpha_v", cfg.train.alpha_v},
        {"batch", cfg.train.batch_size},    {"update_interval", cfg.train.update_interval},
        {"buffer", cfg.train.buffer_capacity},
        {"eta", cfg.train.eta},
        {"value_source",
         cfg.train.value_source == ValueSource::policy_prob ? "policy_prob" : "state_value"},
    };
    json by_method = json::object();
    for (const MethodSummary& m : methods) {
        json seeds = json::array();
        json reach = json::array();
        json fin = json::array();
        for (const SeedOutcome& o : m.seeds) {
            seeds.push_back(o.seed);
            reach.push_back(o.episodes_to_thresh < 0 ? json(nullptr) : json(o.episodes_to_thresh));
            fin.push_back(o.final_success);
        }
        by_method[m.method] = {
            {"seeds", seeds},
            {"episodes_to_threshold", reach},
            {"final_success_rate", fin},
            {"median_episodes_to_threshold", finite_or_null(m.median_episodes_to_thresh)},
            {"iqr_episodes_to_threshold", finite_or_null(m.iqr_episodes_to_thresh)},
            {"median_final_success_rate", m.median_final_success},
            {"iqr_final_success_rate", m.iqr_final_success},
        };
    }
    doc["methods"] = by_method;
    return doc;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + path.string());
}

// Trailing-window success rate per episode for each method, averaged over
// seeds, rendered as one polyline per method.
std::string curves_svg(const std::vector<MethodSummary>& methods,
                       const std::vector<std::vector<const EpisodeLog*>>& logs_by_method,
                       int window) {
    const int width = 720, height = 420, mleft = 60, mbot = 46, mtop = 24, mright = 16;
    const char* colors[] = {"#888888", "#d62728", "#1f77b4", "#2ca02c", "#9467bd"};

    std::vector<std::vector<double>> series;  // mean windowed success per episode
    std::size_t max_len = 0;
    for (const auto& logs : logs_by_method) {
        std::size_t len = std::numeric_limits<std::size_t>::max();
        for (const EpisodeLog* log : logs) len = std::min(len, log->episodes.size());
        if (len == std::numeric_limits<std::size_t>::max()) len = 0;
        std::vector<double> mean(len, 0.0);
        for (const EpisodeLog* log : logs) {
            int successes = 0;
            for (std::size_t i = 0; i < len; ++i) {
                successes += log->episodes[i].success ? 1 : 0;
                if (i >= static_cast<std::size_t>(window))
                    successes -= log->episodes[i - window].success ? 1 : 0;
                const double have = std::min<double>(static_cast<double>(i + 1), window);
                mean[i] += successes / have;
            }
        }
        for (double& v : mean) v /= logs.empty() ? 1.0 : static_cast<double>(logs.size());
        max_len = std::max(max_len, mean.size());
        series.push_back(std::move(mean));
    }

    std::ostringstream svg;
    svg << std::setprecision(6);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double x0 = mleft, y0 = height - mbot, x1 = width - mright, y1 = mtop;
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double frac = tick / 4.0;
        const double y = y0 + (y1 - y0) * frac;
        svg << "<line x1=\"" << x0 - 4 << "\" y1=\"" << y << "\" x2=\"" << x0 << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x0 - 8 << "\" y=\"" << y + 4
            << "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">" << frac
            << "</text>\n";
    }
    svg << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << height - 10
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">episode</text>\n";
    svg << "<text x=\"16\" y=\"" << (y0 + y1) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 16 "
        << (y0 + y1) / 2 << ")\">success rate (window " << window << ")</text>\n";

    const double denom = max_len > 1 ? static_cast<double>(max_len - 1) : 1.0;
    for (std::size_t m = 0; m < series.size(); ++m) {
        if (series[m].empty()) continue;
        const char* color = colors[m % 5];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[m].size(); ++i) {
            const double x = x0 + (x1 - x0) * (static_cast<double>(i) / denom);
            const double y = y0 + (y1 - y0) * series[m][i];
            svg << x << ',' << y << ' ';
        }
        svg << "\"/>\n";
        const double ly = y1 + 16 + 16 * static_cast<double>(m);
        svg << "<line x1=\"" << x0 + 10 << "\" y1=\"" << ly << "\" x2=\"" << x0 + 34 << "\" y2=\""
            << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << x0 + 40 << "\" y=\"" << ly + 4
            << "\" font-size=\"12\" font-family=\"sans-serif\">" << methods[m].method
            << "</text>\n";
    }
    if (max_len > 0)
        svg << "<text x=\"" << x1 << "\" y=\"" << y0 + 16
            << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
            << max_len << " episodes</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Mdp env = cfg.make_env();  // fail fast on bad names or unreadable maps

    struct Job {
        std::size_t method_index;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m)
        for (std::uint64_t seed : cfg.seeds) jobs.push_back({m, seed});

    std::vector<EpisodeLog> logs(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                TrainConfig tc = cfg.train;
                tc.mode = mode_from_method(cfg.methods[jobs[i].method_index]);
                tc.seed = jobs[i].seed;
                logs[i] = train(env, tc);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t pool = std::min<std::size_t>(hw, jobs.size());
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    for (const std::exception_ptr& e : failures)
        if (e) std::rethrow_exception(e);

    fs::create_directories(cfg.out_dir);
    ExperimentResult result;
    std::vector<std::vector<const EpisodeLog*>> logs_by_method(cfg.methods.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const std::string& method = cfg.methods[jobs[i].method_index];
        std::ostringstream name;
        name << method << "_seed" << jobs[i].seed << ".csv";
        const fs::path path = fs::path(cfg.out_dir) / name.str();
        write_file(path, episode_csv(logs[i]));
        result.csv_paths.push_back(path.string());
        logs_by_method[jobs[i].method_index].push_back(&logs[i]);
        out << "wrote " << path.string() << " (" << logs[i].episodes.size() << " episodes)\n";
    }

    for (std::size_t m = 0; m < cfg.methods.size(); ++m)
        result.methods.push_back(summarize_method(cfg.methods[m], cfg.seeds, logs_by_method[m],
                                                  cfg.success_window, cfg.success_threshold));

    const json doc = summary_json(cfg, result.methods, env.name());
    const fs::path summary_path = fs::path(cfg.out_dir) / "summary.json";
    write_file(summary_path, doc.dump(2) + "\n");
    result.summary_path = summary_path.string();
    out << "wrote " << result.summary_path << '\n';

    if (cfg.curves) {
        const fs::path curve_path = fs::path(cfg.out_dir) / "curves.svg";
        write_file(curve_path, curves_svg(result.methods, logs_by_method, cfg.success_window));
        result.curve_path = curve_path.string();
        out << "wrote " << result.curve_path << '\n';
    }

    for (const MethodSummary& m : result.methods) {
        out << m.method << ": median episodes to " << cfg.success_threshold * 100 << "% = ";
        if (std::isfinite(m.median_episodes_to_thresh)) out << m.median_episodes_to_thresh;
        else out << "unreached";
        out << ", median final success = " << m.median_final_success << '\n';
    }
    return result;
}

}  // namespace si2e
