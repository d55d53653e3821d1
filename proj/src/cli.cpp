#include "pcgcn/cli.hpp"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcgcn/checkpoint.hpp"
#include "pcgcn/dataset.hpp"
#include "pcgcn/exact_solver.hpp"
#include "pcgcn/text.hpp"
#include "pcgcn/training.hpp"

namespace pcgcn::cli {

namespace {

std::vector<std::array<int, 2>> parse_coord_list(const std::string& text) {
    std::vector<std::array<int, 2>> coords;
    std::string token;
    std::string normalized = text;
    for (char& c : normalized)
        if (c == ';') c = ' ';
    std::istringstream stream(normalized);
    while (stream >> token) {
        const auto comma = token.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("coordinate '" + token + "' is not of the form x,y");
        try {
            const std::string xs = token.substr(0, comma);
            const std::string ys = token.substr(comma + 1);
            std::size_t xpos = 0, ypos = 0;
            const int x = std::stoi(xs, &xpos);
            const int y = std::stoi(ys, &ypos);
            if (xpos != xs.size() || ypos != ys.size())
                throw std::invalid_argument(token);
            coords.push_back({x, y});
        } catch (const std::exception&) {
            throw std::invalid_argument("coordinate '" + token + "' is not an integer pair");
        }
    }
    if (coords.empty()) throw std::invalid_argument("no coordinates given");
    return coords;
}

void print_solution(const OptimumCertificate& cert) {
    std::cout << "z_star: " << format_double(cert.z_star) << '\n';
    std::cout << "solution:";
    for (std::uint32_t v : cert.solution.open) std::cout << ' ' << v;
    std::cout << '\n';
}

void print_gap_summary(const GapReport& report) {
    auto line = [](const char* name, const GapSummary& s) {
        std::cout << name << " mean=" << format_double(s.mean)
                  << " median=" << format_double(s.median) << " max=" << format_double(s.max)
                  << '\n';
    };
    std::cout << "instances: " << report.rows.size() << '\n';
    line("gap_naive:", report.naive);
    line("gap_greedy:", report.greedy);
    line("gap_baseline:", report.baseline);
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"p-center instances, exact labels, GCN training and decoding", "pcgcn"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate instances and label them exactly (JSONL)");
    std::size_t gen_count = 0;
    std::uint32_t gen_n = 50, gen_p = 5;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--count", gen_count, "number of instances")->required();
    gen->add_option("--n", gen_n, "vertices per instance")->default_val(50);
    gen->add_option("--p", gen_p, "facilities to open")->default_val(5);
    gen->add_option("--seed", gen_seed, "base seed; instance i uses seed+i")->required();
    gen->add_option("--out", gen_out, "output JSONL path")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "Solve one instance exactly and print z* and a solution");
    std::string solve_file, solve_coords;
    std::size_t solve_index = 0;
    std::uint32_t solve_p = 0;
    auto* solve_file_opt = solve->add_option("--file", solve_file, "JSONL file with instances");
    solve->add_option("--index", solve_index, "line index into --file")->default_val(0);
    auto* solve_coords_opt =
        solve->add_option("--coords", solve_coords, "inline coordinates, e.g. \"0,0 10,0 0,10\"");
    auto* solve_p_opt = solve->add_option("--p", solve_p, "facilities to open (with --coords)");
    solve_file_opt->excludes(solve_coords_opt);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train the GCN on a labeled JSONL dataset");
    std::string train_setting = "A", train_file, checkpoint_out, loss_csv;
    std::size_t train_epochs = 0, train_batch = 1000;
    double train_lr = 1e-4;
    std::uint64_t train_seed = 1;
    std::uint32_t ovr_h = 0, ovr_L = 0, ovr_k = 0;
    bool train_normalize = false;
    train_cmd->add_option("--setting", train_setting, "hyperparameter preset")
        ->check(CLI::IsMember({"A", "B", "C"}))
        ->required();
    train_cmd->add_option("--train-file", train_file, "labeled JSONL dataset")->required();
    auto* epochs_opt = train_cmd->add_option("--epochs", train_epochs, "epochs (default 50 for A, 20 for B/C)");
    train_cmd->add_option("--batch", train_batch, "mini-batch size")->default_val(1000);
    train_cmd->add_option("--lr", train_lr, "Adam learning rate")->default_val(1e-4);
    train_cmd->add_option("--seed", train_seed, "training seed")->default_val(1);
    train_cmd->add_option("--checkpoint-out", checkpoint_out, "checkpoint output path")->required();
    train_cmd->add_option("--loss-csv", loss_csv, "per-batch loss log (epoch,batch,seconds,loss)");
    auto* h_opt = train_cmd->add_option("--width", ovr_h, "override the hidden width h");
    auto* l_opt = train_cmd->add_option("--layers", ovr_L, "override the conv layer count L");
    auto* k_opt = train_cmd->add_option("--knn", ovr_k, "override the neighborhood size k");
    train_cmd->add_flag("--normalize-coords", train_normalize,
                        "experimental: scale coordinates to [0,1] before the input layer");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Decode a checkpoint on a labeled test set");
    std::string eval_checkpoint, eval_file, report_csv;
    std::uint64_t eval_seed = 1;
    bool eval_normalize = false;
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "model checkpoint")->required();
    eval_cmd->add_option("--test-file", eval_file, "labeled JSONL test set")->required();
    eval_cmd->add_option("--seed", eval_seed, "baseline decoder seed")->default_val(1);
    eval_cmd->add_option("--report-csv", report_csv, "gap report output path")->required();
    eval_cmd->add_flag("--normalize-coords", eval_normalize,
                       "must match the flag used at training time");

    // gap-plot
    auto* plot = app.add_subcommand("gap-plot", "Sorted per-strategy gaps from a gap report");
    std::string plot_in, plot_out;
    plot->add_option("--report-csv", plot_in, "gap report produced by eval")->required();
    plot->add_option("--out", plot_out, "plot data output path")->required();

    // inspect
    auto* inspect = app.add_subcommand("inspect", "Print a checkpoint header");
    std::string inspect_path;
    inspect->add_option("--checkpoint", inspect_path, "model checkpoint")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            const auto samples = build_dataset(gen_count, gen_n, gen_p, gen_seed);
            write_samples(gen_out, samples);
            std::cout << "wrote " << samples.size() << " labeled samples to " << gen_out << '\n';
            return 0;
        }
        if (solve->parsed()) {
            if (solve_coords_opt->count()) {
                if (!solve_p_opt->count())
                    throw std::invalid_argument("--coords requires --p");
                const Instance inst(0, solve_p, parse_coord_list(solve_coords));
                print_solution(solve_exact(inst));
            } else if (solve_file_opt->count()) {
                const auto instances = read_instances(solve_file);
                if (solve_index >= instances.size())
                    throw DataError("--index " + std::to_string(solve_index) +
                                    " out of range (file has " +
                                    std::to_string(instances.size()) + " instances)");
                print_solution(solve_exact(instances[solve_index]));
            } else {
                throw std::invalid_argument("solve needs --file or --coords");
            }
            return 0;
        }
        if (train_cmd->parsed()) {
            TrainConfig cfg = TrainConfig::setting_defaults(train_setting[0]);
            if (h_opt->count()) cfg.model.h = ovr_h;
            if (l_opt->count()) cfg.model.L = ovr_L;
            if (k_opt->count()) cfg.model.k = ovr_k;
            if (h_opt->count() || l_opt->count() || k_opt->count()) cfg.setting = "custom";
            if (epochs_opt->count()) cfg.epochs = train_epochs;
            cfg.batch = train_batch;
            cfg.lr = train_lr;
            cfg.seed = train_seed;
            cfg.coord_scale = train_normalize ? 0.01 : 1.0;

            const auto samples = read_samples(train_file);
            const TrainResult result = train(cfg, samples);
            save_checkpoint(checkpoint_out, result.params);
            if (!loss_csv.empty()) write_loss_csv(loss_csv, result.history);

            const std::size_t per_epoch = result.history.size() / cfg.epochs;
            for (std::size_t e = 0; e < cfg.epochs; ++e) {
                double mean = 0.0;
                for (std::size_t b = 0; b < per_epoch; ++b)
                    mean += result.history[e * per_epoch + b].loss;
                mean /= static_cast<double>(per_epoch);
                std::cout << "epoch " << (e + 1) << "/" << cfg.epochs
                          << " mean_loss=" << format_double(mean) << '\n';
            }
            std::cout << "checkpoint: " << checkpoint_out << " (" << result.params.data.size()
                      << " parameters)\n";
            return 0;
        }
        if (eval_cmd->parsed()) {
            const ModelParams params = load_checkpoint(eval_checkpoint);
            const auto testset = read_samples(eval_file);
            const GapReport report =
                evaluate(params, testset, eval_seed, eval_normalize ? 0.01 : 1.0);
            write_gap_csv(report_csv, report);
            print_gap_summary(report);
            std::cout << "report: " << report_csv << '\n';
            return 0;
        }
        if (plot->parsed()) {
            write_gap_plot_csv(plot_out, read_gap_csv(plot_in));
            std::cout << "plot data: " << plot_out << '\n';
            return 0;
        }
        if (inspect->parsed()) {
            const CheckpointHeader hdr = read_checkpoint_header(inspect_path);
            std::cout << "h: " << hdr.cfg.h << '\n'
                      << "L: " << hdr.cfg.L << '\n'
                      << "k: " << hdr.cfg.k << '\n'
                      << "mlp_layers: " << hdr.cfg.mlp_layers << '\n'
                      << "param_count: " << hdr.param_count << '\n'
                      << "format: " << hdr.format << '\n';
            return 0;
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace pcgcn::cli
