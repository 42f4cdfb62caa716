#include "syknqs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace syknqs {

std::string verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Converged: return "converged";
        case Verdict::Truncated: return "truncated";
        case Verdict::Exhausted: return "exhausted";
        case Verdict::Failed: return "failed";
    }
    return "unknown";
}

std::vector<double> smooth(const std::vector<double>& series, int window) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("smooth: window must be odd and >= 1");
    }
    const auto n = static_cast<std::ptrdiff_t>(series.size());
    if (window > n) throw std::invalid_argument("smooth: window larger than series");
    if (window == 1) return series;

    std::vector<double> prefix(series.size() + 1, 0.0);
    std::partial_sum(series.begin(), series.end(), prefix.begin() + 1);
    const std::ptrdiff_t half = window / 2;
    std::vector<double> out(series.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
        out[static_cast<std::size_t>(i)] =
            (prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)]) /
            static_cast<double>(hi - lo + 1);
    }
    return out;
}

double t_star_min(double delta_e, double slope, double threshold) {
    if (slope == 0.0) return std::numeric_limits<double>::infinity();
    return (delta_e - threshold) / std::abs(slope);
}

namespace {

// Least-squares slope of `series` over a window of `window` points ending at
// index `at` (shifted right to the start when there is not enough history).
double trailing_slope(const std::vector<double>& series, std::size_t at, int window) {
    const std::size_t n = series.size();
    std::size_t lo = at + 1 >= static_cast<std::size_t>(window)
                         ? at + 1 - static_cast<std::size_t>(window)
                         : 0;
    std::size_t hi = std::min(n - 1, lo + static_cast<std::size_t>(window) - 1);
    const std::size_t count = hi - lo + 1;
    if (count < 2) return 0.0;
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        mean_x += static_cast<double>(i);
        mean_y += series[i];
    }
    mean_x /= static_cast<double>(count);
    mean_y /= static_cast<double>(count);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        sxy += dx * (series[i] - mean_y);
        sxx += dx * dx;
    }
    return sxx == 0.0 ? 0.0 : sxy / sxx;
}

}  // namespace

bool truncation_continue(const std::vector<double>& delta_e_trajectory, std::size_t step,
                         std::size_t interval, double threshold, int window) {
    if (step >= delta_e_trajectory.size() || step < 2 * interval || interval == 0) {
        throw std::invalid_argument("truncation_continue: insufficient history");
    }
    std::vector<double> head(delta_e_trajectory.begin(),
                             delta_e_trajectory.begin() + static_cast<std::ptrdiff_t>(step + 1));
    int w = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(window), head.size()));
    if (w % 2 == 0) --w;
    std::vector<double> smoothed = smooth(head, w);

    if (*std::min_element(smoothed.begin(), smoothed.end()) <= threshold) return true;

    // Keep evaluation points clear of the trailing boundary, where the
    // shrinking smoothing window biases the level up and the slope down.
    const std::size_t margin = static_cast<std::size_t>(w / 2);
    const std::size_t last = smoothed.size() - 1 - std::min(margin, smoothed.size() - 1);
    const std::size_t checkpoints[3] = {step - 2 * interval, step - interval, step};
    double estimate[3];
    for (int i = 0; i < 3; ++i) {
        const std::size_t s = std::min(checkpoints[i], last);
        estimate[i] = t_star_min(smoothed[s], trailing_slope(smoothed, s, w), threshold);
    }
    if (std::isinf(estimate[2])) return false;
    const double growth_recent = (estimate[2] - estimate[1]) / static_cast<double>(interval);
    const double growth_previous = (estimate[1] - estimate[0]) / static_cast<double>(interval);
    return growth_recent < growth_previous;
}

TrainingRecord train(const Architecture& arch, const SparseHamiltonian& hamiltonian,
                     const GroundStateSolution& ground, const TrainConfig& config) {
    const auto start_time = std::chrono::steady_clock::now();
    TrainingRecord record;
    try {
        NetworkParams params = NetworkParams::init(arch, config.init_seed);
        Eigen::VectorXd theta = params.to_flat();
        AdamState adam(params.num_real_params());
        adam.beta1 = config.beta1;
        adam.beta2 = config.beta2;
        adam.epsilon = config.epsilon;
        adam.schedule = config.lr_schedule.segments.empty()
                            ? LearningRateSchedule{{{0, config.learning_rate}}}
                            : config.lr_schedule;

        const SectorBasis& basis = hamiltonian.basis();
        record.best_delta_e = std::numeric_limits<double>::infinity();
        Eigen::VectorXd best_theta = theta;
        record.verdict = Verdict::Exhausted;

        for (std::size_t t = 0; t < config.t_max; ++t) {
            params.from_flat(theta);
            LossGradient lg = loss_gradient(params, config.loss, basis, &hamiltonian,
                                            &ground.vector, ground.energy);
            record.delta_o.push_back(lg.value.infidelity);
            record.delta_e.push_back(lg.value.delta_e);
            if (lg.value.delta_e < record.best_delta_e) {
                record.best_delta_e = lg.value.delta_e;
                record.best_step = t;
                best_theta = theta;
            }
            if (config.stop_at_threshold && lg.value.delta_e < config.threshold) {
                record.verdict = Verdict::Converged;
                break;
            }
            const std::size_t steps_done = t + 1;
            if (config.enable_truncation && steps_done >= config.trunc_floor &&
                steps_done >= 2 * config.trunc_interval + 1 &&
                (steps_done - config.trunc_floor) % config.trunc_interval == 0 &&
                steps_done < config.t_max) {
                if (!truncation_continue(record.delta_e, steps_done - 1, config.trunc_interval,
                                         config.threshold, config.smooth_window)) {
                    record.verdict = Verdict::Truncated;
                    break;
                }
            }
            adam.step(theta, lg.grad);
        }
        if (record.verdict == Verdict::Exhausted && record.best_delta_e < config.threshold) {
            record.verdict = Verdict::Converged;
        }
        params.from_flat(best_theta);
        record.best_params = params;
    } catch (const std::exception& ex) {
        record.verdict = Verdict::Failed;
        record.failure = ex.what();
    }
    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return record;
}

ScalingResult scaling_sweep(const SparseHamiltonian& hamiltonian,
                            const GroundStateSolution& ground, SweepAxis axis,
                            const std::vector<int>& grid,
                            const std::vector<std::uint64_t>& init_seeds,
                            const TrainConfig& config, Activation activation) {
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("scaling_sweep: grid must be strictly increasing");
    }
    const SectorBasis& basis = hamiltonian.basis();
    ScalingResult result;
    result.num_sites = basis.num_sites();
    result.axis = axis;
    result.dim_hilbert = binomial(basis.num_sites(), basis.num_particles());

    for (int value : grid) {
        SweepPoint point;
        point.value = value;
        point.arch.num_sites = basis.num_sites();
        point.arch.activation = activation;
        if (axis == SweepAxis::Alpha) {
            point.arch.alpha = value;
            point.arch.num_layers = 2;  // shallow-network protocol
        } else {
            point.arch.alpha = 4;  // deep-network protocol
            point.arch.num_layers = value;
        }

        double sum = 0.0;
        point.min_best = std::numeric_limits<double>::infinity();
        point.max_best = -std::numeric_limits<double>::infinity();
        for (std::uint64_t seed : init_seeds) {
            TrainConfig run_config = config;
            run_config.init_seed = seed;
            TrainingRecord record = train(point.arch, hamiltonian, ground, run_config);
            SweepRun run;
            run.init_seed = seed;
            run.best_delta_e = record.best_delta_e;
            run.steps = record.delta_e.size();
            run.verdict = record.verdict;
            point.runs.push_back(run);
            sum += record.best_delta_e;
            point.min_best = std::min(point.min_best, record.best_delta_e);
            point.max_best = std::max(point.max_best, record.best_delta_e);
            if (record.verdict == Verdict::Converged) point.converged = true;
        }
        point.mean_best = sum / static_cast<double>(init_seeds.size());
        result.points.push_back(std::move(point));
        if (!result.located_min && result.points.back().converged) {
            result.located_min = value;
            result.n_par_at_min = result.points.back().arch.num_params();
        }
    }
    return result;
}

void write_sweep_csv(const std::string& path, const std::vector<ScalingResult>& results) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "L,axis,value,seed,best_delta_e,steps,verdict,n_par,dim_h\n";
    for (const auto& result : results) {
        const char* axis = result.axis == SweepAxis::Alpha ? "alpha" : "mu";
        for (const auto& point : result.points) {
            for (const auto& run : point.runs) {
                out << result.num_sites << "," << axis << "," << point.value << ","
                    << run.init_seed << "," << run.best_delta_e << "," << run.steps << ","
                    << verdict_name(run.verdict) << "," << point.arch.num_params() << ","
                    << result.dim_hilbert << "\n";
            }
        }
    }
}

}  // namespace syknqs
