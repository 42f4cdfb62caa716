#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "syknqs/harness.hpp"

namespace syknqs {

/// Named sub-seed split from a master seed, so coupling draws, weight
/// initializations, and solver start vectors are independently controllable.
std::uint64_t derive_seed(std::uint64_t master_seed, const std::string& stream_name);

/// Flat key=value experiment configuration. All randomness is explicit:
/// unset sub-seeds are derived from master_seed.
struct ExperimentConfig {
    std::string model = "syk";  // syk | heisenberg
    int num_sites = 8;
    std::uint64_t master_seed = 1;
    std::uint64_t coupling_seed = 0;  // 0 -> derived
    std::uint64_t lanczos_seed = 0;   // 0 -> derived

    int alpha = 1;
    int mu = 2;
    std::string activation = "selu";  // selu | tanh
    int skip_blocks = 0;              // 0 -> plain FFNN

    std::string loss = "overlap";  // overlap | voe
    double learning_rate = 1e-3;
    std::string lr_schedule;  // "0:1e-3,200000:1e-4" (step:rate pairs)
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    std::uint64_t t_max = 200000;
    std::uint64_t trunc_interval = 100000;
    std::uint64_t trunc_floor = 200000;
    double threshold = 1e-3;
    int smooth_window = 2001;
    bool stop_at_threshold = true;

    std::string sweep_axis = "alpha";  // alpha | mu
    std::string sweep_grid = "1,2,4,8";
    int network_seeds = 4;  // init realizations per sweep point
    std::string sweep_sizes;  // e.g. "8,10"; empty -> num_sites only
    int coupling_realizations = 4;  // disorder draws for entropy scans

    double lambda_svd = 0.0;
    std::string lambda_grid;  // for compress sweeps

    std::string out_dir = "runs";

    static ExperimentConfig from_file(const std::string& path);
    void apply(const std::map<std::string, std::string>& overrides);
    std::map<std::string, std::string> to_map() const;
    void save(const std::string& path) const;

    std::uint64_t resolved_coupling_seed() const;
    std::uint64_t resolved_lanczos_seed() const;
    Architecture architecture() const;
    TrainConfig train_config(std::uint64_t init_seed) const;
    std::vector<int> parsed_grid() const;
    std::vector<int> parsed_sizes() const;
    std::vector<double> parsed_lambda_grid() const;
};

std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
LearningRateSchedule parse_lr_schedule(const std::string& text);

}  // namespace syknqs
