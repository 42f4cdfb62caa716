#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "syknqs/ed.hpp"
#include "syknqs/optimize.hpp"

namespace syknqs {

struct TrainConfig {
    LossKind loss = LossKind::Overlap;
    std::size_t t_max = 200000;
    double threshold = 1e-3;
    bool stop_at_threshold = true;

    // Run-truncation protocol: first checked at trunc_floor steps, then at
    // every trunc_interval; disabled when trunc_floor > t_max.
    bool enable_truncation = true;
    std::size_t trunc_floor = 200000;
    std::size_t trunc_interval = 100000;
    int smooth_window = 2001;

    double learning_rate = 1e-3;
    LearningRateSchedule lr_schedule{{}};  // when nonempty, overrides learning_rate
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    std::uint64_t init_seed = 0;
};

enum class Verdict { Converged, Truncated, Exhausted, Failed };

std::string verdict_name(Verdict verdict);

struct TrainingRecord {
    std::vector<double> delta_o;  // overlap infidelity per step
    std::vector<double> delta_e;  // relative energy error per step
    double best_delta_e = 0.0;
    std::size_t best_step = 0;
    NetworkParams best_params;
    Verdict verdict = Verdict::Exhausted;
    double wall_seconds = 0.0;
    std::string failure;
};

/// Supervised / variational training against an exact ground state, fully
/// deterministic given the seeds in the config.
TrainingRecord train(const Architecture& arch, const SparseHamiltonian& hamiltonian,
                     const GroundStateSolution& ground, const TrainConfig& config);

/// Centered moving average with shrinking windows at the boundaries.
std::vector<double> smooth(const std::vector<double>& series, int window);

/// Lower-bound estimate of steps remaining to the threshold crossing,
/// assuming a non-increasing |slope|. Returns +inf when slope is zero.
double t_star_min(double delta_e, double slope, double threshold);

/// Truncation decision for a run still above threshold after `step` steps,
/// comparing the growth of t*_min over the two most recent intervals.
/// Returns true to continue, false to truncate.
bool truncation_continue(const std::vector<double>& delta_e_trajectory, std::size_t step,
                         std::size_t interval, double threshold, int window);

enum class SweepAxis { Alpha, Mu };

struct SweepRun {
    std::uint64_t init_seed = 0;
    double best_delta_e = 0.0;
    std::size_t steps = 0;
    Verdict verdict = Verdict::Exhausted;
};

struct SweepPoint {
    int value = 0;  // swept alpha or mu
    Architecture arch;
    std::vector<SweepRun> runs;
    double mean_best = 0.0;
    double min_best = 0.0;
    double max_best = 0.0;
    bool converged = false;
};

struct ScalingResult {
    int num_sites = 0;
    SweepAxis axis = SweepAxis::Alpha;
    std::vector<SweepPoint> points;
    std::optional<int> located_min;  // smallest swept value with a converged run
    std::size_t n_par_at_min = 0;
    std::uint64_t dim_hilbert = 0;
};

/// Trains every (swept value, init seed) combination and locates the minimal
/// swept value whose best run converged below threshold.
ScalingResult scaling_sweep(const SparseHamiltonian& hamiltonian,
                            const GroundStateSolution& ground, SweepAxis axis,
                            const std::vector<int>& grid,
                            const std::vector<std::uint64_t>& init_seeds,
                            const TrainConfig& config, Activation activation = Activation::Selu);

/// CSV rows: L, axis value, seed, best delta_e, steps, verdict, N_par, dim H.
void write_sweep_csv(const std::string& path, const std::vector<ScalingResult>& results);

}  // namespace syknqs
