#include "syknqs/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace syknqs {

std::uint64_t derive_seed(std::uint64_t master_seed, const std::string& stream_name) {
    // FNV-1a over the stream name, then a splitmix64 finalizer.
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : stream_name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ull + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stoi(item));
    }
    return values;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    return values;
}

LearningRateSchedule parse_lr_schedule(const std::string& text) {
    LearningRateSchedule schedule;
    schedule.segments.clear();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("lr_schedule: expected step:rate pairs");
        }
        schedule.segments.emplace_back(std::stoull(item.substr(0, colon)),
                                       std::stod(item.substr(colon + 1)));
    }
    if (schedule.segments.empty() || schedule.segments.front().first != 0) {
        throw std::invalid_argument("lr_schedule: first segment must start at step 0");
    }
    return schedule;
}

namespace {

bool parse_bool(const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("expected boolean, got: " + value);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    ExperimentConfig config;
    config.apply(entries);
    return config;
}

void ExperimentConfig::apply(const std::map<std::string, std::string>& overrides) {
    for (const auto& [key, value] : overrides) {
        if (key == "model") model = value;
        else if (key == "num_sites") num_sites = std::stoi(value);
        else if (key == "master_seed") master_seed = std::stoull(value);
        else if (key == "coupling_seed") coupling_seed = std::stoull(value);
        else if (key == "lanczos_seed") lanczos_seed = std::stoull(value);
        else if (key == "alpha") alpha = std::stoi(value);
        else if (key == "mu") mu = std::stoi(value);
        else if (key == "activation") activation = value;
        else if (key == "skip_blocks") skip_blocks = std::stoi(value);
        else if (key == "loss") loss = value;
        else if (key == "learning_rate") learning_rate = std::stod(value);
        else if (key == "lr_schedule") lr_schedule = value;
        else if (key == "beta1") beta1 = std::stod(value);
        else if (key == "beta2") beta2 = std::stod(value);
        else if (key == "epsilon") epsilon = std::stod(value);
        else if (key == "t_max") t_max = std::stoull(value);
        else if (key == "trunc_interval") trunc_interval = std::stoull(value);
        else if (key == "trunc_floor") trunc_floor = std::stoull(value);
        else if (key == "threshold") threshold = std::stod(value);
        else if (key == "smooth_window") smooth_window = std::stoi(value);
        else if (key == "stop_at_threshold") stop_at_threshold = parse_bool(value);
        else if (key == "sweep_axis") sweep_axis = value;
        else if (key == "sweep_grid") sweep_grid = value;
        else if (key == "network_seeds") network_seeds = std::stoi(value);
        else if (key == "sweep_sizes") sweep_sizes = value;
        else if (key == "coupling_realizations") coupling_realizations = std::stoi(value);
        else if (key == "lambda_svd") lambda_svd = std::stod(value);
        else if (key == "lambda_grid") lambda_grid = value;
        else if (key == "out_dir") out_dir = value;
        else throw std::runtime_error("unknown config key: " + key);
    }
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
    auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    };
    std::map<std::string, std::string> m;
    m["model"] = model;
    m["num_sites"] = std::to_string(num_sites);
    m["master_seed"] = std::to_string(master_seed);
    m["coupling_seed"] = std::to_string(coupling_seed);
    m["lanczos_seed"] = std::to_string(lanczos_seed);
    m["alpha"] = std::to_string(alpha);
    m["mu"] = std::to_string(mu);
    m["activation"] = activation;
    m["skip_blocks"] = std::to_string(skip_blocks);
    m["loss"] = loss;
    m["learning_rate"] = fmt(learning_rate);
    m["lr_schedule"] = lr_schedule;
    m["beta1"] = fmt(beta1);
    m["beta2"] = fmt(beta2);
    m["epsilon"] = fmt(epsilon);
    m["t_max"] = std::to_string(t_max);
    m["trunc_interval"] = std::to_string(trunc_interval);
    m["trunc_floor"] = std::to_string(trunc_floor);
    m["threshold"] = fmt(threshold);
    m["smooth_window"] = std::to_string(smooth_window);
    m["stop_at_threshold"] = stop_at_threshold ? "true" : "false";
    m["sweep_axis"] = sweep_axis;
    m["sweep_grid"] = sweep_grid;
    m["network_seeds"] = std::to_string(network_seeds);
    m["sweep_sizes"] = sweep_sizes;
    m["coupling_realizations"] = std::to_string(coupling_realizations);
    m["lambda_svd"] = fmt(lambda_svd);
    m["lambda_grid"] = lambda_grid;
    m["out_dir"] = out_dir;
    return m;
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [key, value] : to_map()) out << key << " = " << value << "\n";
}

std::uint64_t ExperimentConfig::resolved_coupling_seed() const {
    return coupling_seed != 0 ? coupling_seed : derive_seed(master_seed, "coupling");
}

std::uint64_t ExperimentConfig::resolved_lanczos_seed() const {
    return lanczos_seed != 0 ? lanczos_seed : derive_seed(master_seed, "lanczos-start");
}

Architecture ExperimentConfig::architecture() const {
    Architecture arch;
    arch.num_sites = num_sites;
    arch.alpha = alpha;
    arch.num_layers = mu;
    if (activation == "selu") arch.activation = Activation::Selu;
    else if (activation == "tanh") arch.activation = Activation::Tanh;
    else throw std::runtime_error("unknown activation: " + activation);
    if (skip_blocks > 0) {
        if (mu % skip_blocks != 0) throw std::runtime_error("skip_blocks must divide mu");
        arch.skip = SkipBlocks{skip_blocks, mu / skip_blocks};
    }
    arch.validate();
    return arch;
}

TrainConfig ExperimentConfig::train_config(std::uint64_t init_seed) const {
    TrainConfig tc;
    if (loss == "overlap") tc.loss = LossKind::Overlap;
    else if (loss == "voe") tc.loss = LossKind::Voe;
    else throw std::runtime_error("unknown loss: " + loss);
    tc.t_max = t_max;
    tc.threshold = threshold;
    tc.stop_at_threshold = stop_at_threshold;
    tc.trunc_floor = trunc_floor;
    tc.trunc_interval = trunc_interval;
    tc.enable_truncation = trunc_floor <= t_max;
    tc.smooth_window = smooth_window;
    tc.learning_rate = learning_rate;
    if (!lr_schedule.empty()) tc.lr_schedule = parse_lr_schedule(lr_schedule);
    tc.beta1 = beta1;
    tc.beta2 = beta2;
    tc.epsilon = epsilon;
    tc.init_seed = init_seed;
    return tc;
}

std::vector<int> ExperimentConfig::parsed_grid() const { return parse_int_list(sweep_grid); }

std::vector<int> ExperimentConfig::parsed_sizes() const {
    if (sweep_sizes.empty()) return {num_sites};
    return parse_int_list(sweep_sizes);
}

std::vector<double> ExperimentConfig::parsed_lambda_grid() const {
    if (lambda_grid.empty()) return {lambda_svd};
    return parse_double_list(lambda_grid);
}

}  // namespace syknqs
