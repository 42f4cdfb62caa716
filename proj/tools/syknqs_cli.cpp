#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "syknqs/compress.hpp"
#include "syknqs/config.hpp"
#include "syknqs/harness.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace syknqs;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "key=value configuration file");
    cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set num_sites=10")
        ->take_all();
}

ExperimentConfig resolve_config(const CommonOptions& opts) {
    ExperimentConfig config;
    if (!opts.config_path.empty()) config = ExperimentConfig::from_file(opts.config_path);
    std::map<std::string, std::string> overrides;
    for (const auto& entry : opts.overrides) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("--set expects key=value, got: " + entry);
        }
        overrides[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    config.apply(overrides);
    if (const char* env = std::getenv("SYKNQS_OUT_DIR")) config.out_dir = env;
    return config;
}

fs::path ensure_out_dir(const ExperimentConfig& config) {
    fs::path out(config.out_dir);
    fs::create_directories(out);
    return out;
}

std::uint64_t model_key_seed(const ExperimentConfig& config) {
    return config.model == "syk" ? config.resolved_coupling_seed() : 0;
}

struct ModelInstance {
    std::shared_ptr<const SectorBasis> basis;
    std::unique_ptr<SparseHamiltonian> hamiltonian;
};

ModelInstance build_model(const ExperimentConfig& config, std::uint64_t coupling_seed) {
    ModelInstance instance;
    instance.basis = std::make_shared<SectorBasis>(config.num_sites, config.num_sites / 2);
    if (config.model == "syk") {
        CouplingTensor couplings = CouplingTensor::sample(config.num_sites, coupling_seed);
        instance.hamiltonian = std::make_unique<SparseHamiltonian>(
            build_syk_hamiltonian(couplings, instance.basis));
    } else if (config.model == "heisenberg") {
        instance.hamiltonian = std::make_unique<SparseHamiltonian>(
            build_heisenberg(config.num_sites, instance.basis));
    } else {
        throw std::runtime_error("unknown model: " + config.model);
    }
    return instance;
}

void append_record(const fs::path& out, const std::string& command,
                   const ExperimentConfig& config, const json& results) {
    json record;
    record["command"] = command;
    record["version"] = kVersion;
    record["config"] = config.to_map();
    record["results"] = results;
    std::ofstream stream(out / "records.jsonl", std::ios::app);
    stream << record.dump() << "\n";
}

GroundStateSolution require_ground_state(const ExperimentConfig& config, const fs::path& out) {
    const std::string name =
        ground_state_filename(config.model, model_key_seed(config), config.num_sites);
    const fs::path path = out / name;
    if (!fs::exists(path)) {
        throw std::runtime_error("missing ground-state record " + path.string() +
                                 "; run `syknqs ed` first");
    }
    return load_ground_state(path.string(), config.model, model_key_seed(config),
                             config.num_sites);
}

std::string checkpoint_name(const ExperimentConfig& config, std::uint64_t init_seed) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "ckpt_%s_L%d_seed%llu_a%d_mu%d_init%llu.bin",
                  config.model.c_str(), config.num_sites,
                  static_cast<unsigned long long>(model_key_seed(config)), config.alpha,
                  config.mu, static_cast<unsigned long long>(init_seed));
    return buf;
}

int cmd_ed(const ExperimentConfig& config) {
    const fs::path out = ensure_out_dir(config);
    const std::uint64_t coupling_seed = model_key_seed(config);
    ModelInstance model = build_model(config, coupling_seed);
    GroundStateSolution ground =
        ground_state(*model.hamiltonian, 1e-12, 20000, config.resolved_lanczos_seed());

    if (config.model == "syk") {
        CouplingTensor couplings = CouplingTensor::sample(config.num_sites, coupling_seed);
        char name[96];
        std::snprintf(name, sizeof(name), "couplings_L%d_seed%llu.txt", config.num_sites,
                      static_cast<unsigned long long>(coupling_seed));
        couplings.save((out / name).string());
    }
    const std::string gs_name =
        ground_state_filename(config.model, coupling_seed, config.num_sites);
    save_ground_state((out / gs_name).string(), config.model, coupling_seed, config.num_sites,
                      ground);

    const std::uint64_t dim_h = binomial(config.num_sites, config.num_sites / 2);
    std::cout << "model=" << config.model << " L=" << config.num_sites << " dim_H=" << dim_h
              << " E_GS=" << std::setprecision(15) << ground.energy
              << " residual=" << ground.residual << "\n";
    append_record(out, "ed", config,
                  json{{"energy", ground.energy},
                       {"residual", ground.residual},
                       {"dim_h", dim_h},
                       {"record", gs_name}});
    return 0;
}

json run_summary(const TrainingRecord& record) {
    return json{{"best_delta_e", record.best_delta_e},
                {"best_step", record.best_step},
                {"steps", record.delta_e.size()},
                {"verdict", verdict_name(record.verdict)},
                {"wall_seconds", record.wall_seconds},
                {"failure", record.failure}};
}

int cmd_train(const ExperimentConfig& config) {
    const fs::path out = ensure_out_dir(config);
    GroundStateSolution ground = require_ground_state(config, out);
    ModelInstance model = build_model(config, model_key_seed(config));

    const std::uint64_t init_seed = derive_seed(config.master_seed, "init");
    TrainingRecord record =
        train(config.architecture(), *model.hamiltonian, ground, config.train_config(init_seed));
    if (record.verdict == Verdict::Failed) {
        append_record(out, "train", config, run_summary(record));
        std::cerr << "training failed: " << record.failure << "\n";
        return 1;
    }

    const std::string ckpt = checkpoint_name(config, init_seed);
    record.best_params.save((out / ckpt).string(), init_seed);

    char traj_name[160];
    std::snprintf(traj_name, sizeof(traj_name), "trajectory_%s_L%d_a%d_mu%d_init%llu.csv",
                  config.model.c_str(), config.num_sites, config.alpha, config.mu,
                  static_cast<unsigned long long>(init_seed));
    {
        std::ofstream traj(out / traj_name);
        traj << "step,delta_o,delta_e\n";
        for (std::size_t t = 0; t < record.delta_e.size(); ++t) {
            traj << t << "," << record.delta_o[t] << "," << record.delta_e[t] << "\n";
        }
    }

    json results = run_summary(record);
    results["checkpoint"] = ckpt;
    results["trajectory"] = traj_name;
    results["n_par"] = config.architecture().num_params();
    append_record(out, "train", config, results);
    std::cout << "verdict=" << verdict_name(record.verdict)
              << " best_delta_e=" << record.best_delta_e << " steps=" << record.delta_e.size()
              << " checkpoint=" << ckpt << "\n";
    return 0;
}

int cmd_sweep(const ExperimentConfig& config) {
    const fs::path out = ensure_out_dir(config);
    const SweepAxis axis = config.sweep_axis == "mu" ? SweepAxis::Mu : SweepAxis::Alpha;
    std::vector<std::uint64_t> init_seeds;
    for (int k = 0; k < config.network_seeds; ++k) {
        init_seeds.push_back(derive_seed(config.master_seed, "init-" + std::to_string(k)));
    }

    std::vector<ScalingResult> results;
    json summary = json::array();
    for (int L : config.parsed_sizes()) {
        ExperimentConfig size_config = config;
        size_config.num_sites = L;
        ModelInstance model = build_model(size_config, model_key_seed(size_config));
        GroundStateSolution ground = ground_state(*model.hamiltonian, 1e-12, 20000,
                                                  size_config.resolved_lanczos_seed());
        ScalingResult result = scaling_sweep(
            *model.hamiltonian, ground, axis, size_config.parsed_grid(), init_seeds,
            size_config.train_config(0), size_config.architecture().activation);
        json entry{{"L", L},
                   {"dim_h", result.dim_hilbert},
                   {"located_min", result.located_min ? json(*result.located_min) : json()},
                   {"n_par_at_min", result.n_par_at_min}};
        summary.push_back(entry);
        std::cout << "L=" << L << " dim_H=" << result.dim_hilbert << " "
                  << (axis == SweepAxis::Alpha ? "alpha_min=" : "mu_min=")
                  << (result.located_min ? std::to_string(*result.located_min) : "unbounded")
                  << " n_par=" << result.n_par_at_min << "\n";
        results.push_back(std::move(result));
    }
    char csv_name[96];
    std::snprintf(csv_name, sizeof(csv_name), "sweep_%s_%s.csv", config.model.c_str(),
                  config.sweep_axis.c_str());
    write_sweep_csv((out / csv_name).string(), results);
    append_record(out, "sweep", config, json{{"csv", csv_name}, {"points", summary}});
    return 0;
}

int cmd_compress(const ExperimentConfig& config, const std::string& checkpoint_path) {
    const fs::path out = ensure_out_dir(config);
    GroundStateSolution ground = require_ground_state(config, out);
    ModelInstance model = build_model(config, model_key_seed(config));

    fs::path ckpt = checkpoint_path.empty()
                        ? out / checkpoint_name(config, derive_seed(config.master_seed, "init"))
                        : fs::path(checkpoint_path);
    if (!fs::exists(ckpt)) {
        throw std::runtime_error("missing checkpoint " + ckpt.string() +
                                 "; run `syknqs train` first");
    }
    NetworkParams params = NetworkParams::load(ckpt.string());

    std::vector<CompressionReport> reports;
    for (double lambda : config.parsed_lambda_grid()) {
        auto [truncated, report] =
            svd_truncate(params, lambda, *model.hamiltonian, ground.energy);
        std::cout << "lambda=" << report.svd_threshold << " q=" << report.retained_fraction
                  << " delta_e_before=" << report.delta_e_before
                  << " delta_e_after=" << report.delta_e_after << "\n";
        reports.push_back(std::move(report));
    }
    write_compression_csv((out / "compression.csv").string(), reports);
    append_record(out, "compress", config, json{{"csv", "compression.csv"}});
    return 0;
}

int cmd_entropy(const ExperimentConfig& config) {
    const fs::path out = ensure_out_dir(config);
    std::ofstream csv(out / "entropy.csv");
    csv << "L,coupling_seed,s_bipartite,s_page\n";
    json rows = json::array();
    for (int L : config.parsed_sizes()) {
        ExperimentConfig size_config = config;
        size_config.num_sites = L;
        const int realizations =
            size_config.model == "syk" ? size_config.coupling_realizations : 1;
        for (int k = 0; k < realizations; ++k) {
            std::uint64_t seed = size_config.model == "syk"
                                     ? derive_seed(size_config.master_seed,
                                                   "coupling-" + std::to_string(k))
                                     : 0;
            ModelInstance model = build_model(size_config, seed);
            GroundStateSolution ground = ground_state(*model.hamiltonian, 1e-12, 20000,
                                                      size_config.resolved_lanczos_seed());
            const double entropy = bipartite_entropy(ground.vector, *model.basis);
            const double page = page_value(L);
            csv << L << "," << seed << "," << entropy << "," << page << "\n";
            std::cout << "L=" << L << " seed=" << seed << " S=" << entropy << " S_page=" << page
                      << "\n";
            rows.push_back(json{{"L", L}, {"seed", seed}, {"s", entropy}, {"s_page", page}});
        }
    }
    append_record(out, "entropy", config, json{{"csv", "entropy.csv"}, {"rows", rows}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SYK / Heisenberg neural-quantum-state study"};
    app.require_subcommand(1);

    CommonOptions ed_opts, train_opts, sweep_opts, compress_opts, entropy_opts;
    std::string checkpoint_path;

    auto* ed_cmd = app.add_subcommand("ed", "exact ground state via Lanczos");
    add_common(ed_cmd, ed_opts);
    auto* train_cmd = app.add_subcommand("train", "train a network against the exact state");
    add_common(train_cmd, train_opts);
    auto* sweep_cmd = app.add_subcommand("sweep", "width/depth scaling sweep");
    add_common(sweep_cmd, sweep_opts);
    auto* compress_cmd = app.add_subcommand("compress", "SVD-truncate a trained checkpoint");
    add_common(compress_cmd, compress_opts);
    compress_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file to compress");
    auto* entropy_cmd = app.add_subcommand("entropy", "bipartite entanglement of exact states");
    add_common(entropy_cmd, entropy_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ed_cmd->parsed()) return cmd_ed(resolve_config(ed_opts));
        if (train_cmd->parsed()) return cmd_train(resolve_config(train_opts));
        if (sweep_cmd->parsed()) return cmd_sweep(resolve_config(sweep_opts));
        if (compress_cmd->parsed()) {
            return cmd_compress(resolve_config(compress_opts), checkpoint_path);
        }
        if (entropy_cmd->parsed()) return cmd_entropy(resolve_config(entropy_opts));
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
