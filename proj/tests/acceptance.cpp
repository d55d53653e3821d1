// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Artifacts (trained checkpoints, gap reports) are archived under
// ./acceptance_out for inspection.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pcgcn/checkpoint.hpp"
#include "pcgcn/cli.hpp"
#include "pcgcn/dataset.hpp"
#include "pcgcn/decoder.hpp"
#include "pcgcn/exact_solver.hpp"
#include "pcgcn/gcn.hpp"
#include "pcgcn/rng.hpp"
#include "pcgcn/training.hpp"

namespace fs = std::filesystem;
using namespace pcgcn;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------- criteria

void exact_solver_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const std::uint32_t n = 5 + static_cast<std::uint32_t>(i % 8);
        const std::uint32_t p = 1 + static_cast<std::uint32_t>(i % 3);
        const Instance inst = generate_instance(n, p, 1000 + i);
        const OptimumCertificate cert = solve_exact(inst);
        if (cert.z_star != oracle::enumerate_best(inst).z) ++mismatches;
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << (200 - mismatches) << "/200 instances match exhaustive enumeration exactly, "
           << elapsed << " s (limit 10 s)";
    report("exact-solver-oracle-equivalence", mismatches == 0 && elapsed < 10.0, detail.str());
}

void solver_speed() {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 100; ++i) {
        const Instance inst = generate_instance(50, 5, 2000 + i);
        (void)solve_exact(inst);
    }
    const double mean = seconds_since(t0) / 100.0;
    std::ostringstream detail;
    detail << "mean " << mean << " s per n=50, p=5 instance (limit 1 s)";
    report("solver-speed", mean < 1.0, detail.str());
}

void parameter_counts() {
    const std::size_t a = init_params(ModelConfig::setting('A'), 1).data.size();
    const std::size_t b = init_params(ModelConfig::setting('B'), 1).data.size();
    const std::size_t c = init_params(ModelConfig::setting('C'), 1).data.size();
    std::ostringstream detail;
    detail << "A=" << a << " (want 15301), B=" << b << ", C=" << c << " (want 140601)";
    report("parameter-counts", a == 15301 && b == 140601 && c == 140601, detail.str());
}

void closed_form_loss() {
    std::vector<double> probs(50, 0.5);
    std::vector<std::uint8_t> labels(50, 0);
    for (int i = 0; i < 5; ++i) labels[i] = 1;
    const double got = loss(probs, labels, 50, 5);
    const double want = 1.8 * std::log(2.0);
    std::ostringstream detail;
    detail << "all-0.5 predictor loss " << got << " vs 1.8*ln(2) = " << want
           << " (tolerance 1e-9)";
    report("closed-form-loss", std::abs(got - want) < 1e-9, detail.str());
}

void gradient_correctness() {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        Rng rng(3000 + t);
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(5));  // 2..6
        const std::uint32_t h = 2 + static_cast<std::uint32_t>(rng.below(3));  // 2..4
        const std::uint32_t L = 1 + static_cast<std::uint32_t>(rng.below(2));  // 1..2
        const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(3));  // 1..3
        const ModelConfig cfg{h, L, 3, k};
        ModelParams params = init_params(cfg, 3100 + t);
        // jitter every parameter (biases included) so no ReLU pre-activation
        // sits exactly on its kink, where finite differences are undefined
        for (double& v : params.data) v += 0.02 * (rng.real01() - 0.5);
        const std::uint32_t p = 1 + static_cast<std::uint32_t>(rng.below(n));
        const Instance inst = generate_instance(n, p, 3200 + t);
        const KnnGraph knn = build_knn(inst, k);
        std::vector<std::uint8_t> labels(n, 0);
        for (auto& b : labels) b = rng.below(2) ? 1 : 0;

        const ForwardTrace tr = forward(params, inst, knn);
        const std::vector<double> analytic = backward(params, tr, labels, p);
        const std::vector<double> numeric =
            oracle::finite_diff_grad(params, [&](const ModelParams& q) {
                const ForwardTrace f = forward(q, inst, knn);
                return loss(f.probs, labels, inst.n(), p);
            });
        for (std::size_t i = 0; i < analytic.size(); ++i)
            worst = std::max(worst, oracle::rel_error(analytic[i], numeric[i]));
    }
    std::ostringstream detail;
    detail << "20 random configs (n<=6, h<=4, L<=2), max relative error " << worst
           << " vs central differences, step 1e-6 (limit 1e-5)";
    report("gradient-correctness", worst < 1e-5, detail.str());
}

void decoder_correctness() {
    int sim_mismatches = 0;
    int naive_gap_violations = 0;
    int greedy_gap_violations = 0;
    for (int i = 0; i < 100; ++i) {
        const Instance inst = generate_instance(50, 5, 4000 + i);
        Rng rng(5000 + i);
        std::vector<double> probs(inst.n());
        for (double& q : probs) q = rng.real01();

        const DecodeResult naive = naive_decode(inst, probs, inst.p());
        const DecodeResult greedy = greedy_decode(inst, probs, inst.p());
        if (naive.solution.open != oracle::naive_pick(inst, probs, inst.p())) ++sim_mismatches;
        if (greedy.solution.open != oracle::greedy_pick(inst, probs, inst.p())) ++sim_mismatches;

        const OptimumCertificate cert = solve_exact(inst);
        const std::vector<double> perfect(cert.labels.begin(), cert.labels.end());
        const DecodeResult n2 = naive_decode(inst, perfect, inst.p());
        const DecodeResult g2 = greedy_decode(inst, perfect, inst.p());
        if (optimality_gap(n2.z, cert.z_star) != 0.0) ++naive_gap_violations;
        if (optimality_gap(g2.z, cert.z_star) != 0.0) ++greedy_gap_violations;
    }
    std::ostringstream detail;
    detail << "100 random (instance, probs) pairs; " << sim_mismatches
           << " reference-simulation mismatches; label-decoding gaps nonzero on " << naive_gap_violations
           << " instances (naive) and " << greedy_gap_violations
           << " instances (greedy; a skipped optimum member can lose its slot to a later "
              "strictly-improving vertex, so greedy is not exact on 0/1 inputs)";
    report("decoder-correctness",
           sim_mismatches == 0 && naive_gap_violations == 0 && greedy_gap_violations == 0,
           detail.str());
}

struct TrainedModels {
    fs::path k10_ckpt;
    fs::path k5_ckpt;
    double final_loss_k10 = 0.0;
    double final_loss_k5 = 0.0;
    std::vector<LabeledSample> train_set;
};

double final_epoch_mean_loss(const LossHistory& history, std::size_t epochs) {
    const std::size_t per_epoch = history.size() / epochs;
    double mean = 0.0;
    for (std::size_t b = 0; b < per_epoch; ++b)
        mean += history[(epochs - 1) * per_epoch + b].loss;
    return mean / static_cast<double>(per_epoch);
}

void training_progress(TrainedModels& models, const fs::path& outdir) {
    std::cout << "  (building 2000-instance training set and running two desk-scale trainings)"
              << std::endl;
    models.train_set = build_dataset(2000, 50, 5, 424242);

    TrainConfig cfg = TrainConfig::setting_defaults('A');  // k = 10
    cfg.batch = 100;
    cfg.epochs = 5;
    cfg.lr = 1e-4;
    cfg.seed = 1;
    const TrainResult k10 = train(cfg, models.train_set);
    models.final_loss_k10 = final_epoch_mean_loss(k10.history, cfg.epochs);
    models.k10_ckpt = outdir / "setting_a_k10.ckpt";
    save_checkpoint(models.k10_ckpt.string(), k10.params);
    write_loss_csv((outdir / "loss_k10.csv").string(), k10.history);

    TrainConfig cfg5 = cfg;  // same parameter budget and epochs, smaller neighborhoods
    cfg5.model.k = 5;
    cfg5.setting = "custom";
    const TrainResult k5 = train(cfg5, models.train_set);
    models.final_loss_k5 = final_epoch_mean_loss(k5.history, cfg5.epochs);
    models.k5_ckpt = outdir / "setting_a_k5.ckpt";
    save_checkpoint(models.k5_ckpt.string(), k5.params);
    write_loss_csv((outdir / "loss_k5.csv").string(), k5.history);

    const double baseline = 1.8 * std::log(2.0);  // all-0.5 predictor
    std::ostringstream detail;
    detail << "setting A (k=10) final-epoch mean loss " << models.final_loss_k10
           << " vs constant-predictor baseline " << baseline
           << "; reported comparison: k=10 -> " << models.final_loss_k10 << ", k=5 -> "
           << models.final_loss_k5 << " (not asserted)";
    report("training-progress", models.final_loss_k10 < baseline, detail.str());
}

void gap_report_reproduction(const TrainedModels& models, const fs::path& outdir) {
    const auto testset = build_dataset(200, 50, 5, 777000);
    const ModelParams k10 = load_checkpoint(models.k10_ckpt.string());
    const ModelParams k5 = load_checkpoint(models.k5_ckpt.string());
    const GapReport r10 = evaluate(k10, testset, 99);
    const GapReport r5 = evaluate(k5, testset, 99);
    const fs::path report_path = outdir / "gap_report_k10.csv";
    write_gap_csv(report_path.string(), r10);
    write_gap_csv((outdir / "gap_report_k5.csv").string(), r5);

    bool gaps_ok = true;
    bool baseline_independent = true;
    for (std::size_t i = 0; i < r10.rows.size(); ++i) {
        const GapRow& row = r10.rows[i];
        if (!(row.gap_naive >= 0.0 && row.gap_greedy >= 0.0 && row.gap_baseline >= 0.0))
            gaps_ok = false;
        if (row.z_baseline != r5.rows[i].z_baseline) baseline_independent = false;
    }
    std::ostringstream detail;
    detail << "200 instances; mean gaps (k=10 model): naive " << r10.naive.mean << "%, greedy "
           << r10.greedy.mean << "%, baseline " << r10.baseline.mean
           << "% (reported, not asserted); all gaps >= 0: " << (gaps_ok ? "yes" : "no")
           << "; baseline checkpoint-independent: " << (baseline_independent ? "yes" : "no")
           << "; archived " << report_path.string();
    report("gap-report-reproduction", gaps_ok && baseline_independent, detail.str());
}

void determinism(const fs::path& outdir) {
    setenv("PCGCN_THREADS", "1", 1);
    const fs::path dir = outdir / "determinism";
    fs::create_directories(dir);
    auto cli = [](const std::vector<std::string>& args) { return pcgcn::cli::run(args); };

    bool ok = true;
    std::string why;

    const fs::path data1 = dir / "data1.jsonl";
    const fs::path data2 = dir / "data2.jsonl";
    if (cli({"generate", "--count", "60", "--n", "20", "--p", "3", "--seed", "7", "--out",
             data1.string()}) != 0 ||
        cli({"generate", "--count", "60", "--n", "20", "--p", "3", "--seed", "7", "--out",
             data2.string()}) != 0) {
        ok = false;
        why = "generate failed";
    } else if (slurp(data1) != slurp(data2)) {
        ok = false;
        why = "dataset files differ";
    }

    const fs::path ckpt1 = dir / "model1.ckpt";
    const fs::path ckpt2 = dir / "model2.ckpt";
    if (ok) {
        const std::vector<std::string> base = {
            "train",  "--setting", "A",  "--width",  "8",  "--knn",        "5",
            "--epochs", "2",       "--batch", "30", "--seed", "5", "--train-file",
            data1.string()};
        auto with_out = [&](const fs::path& p) {
            std::vector<std::string> args = base;
            args.push_back("--checkpoint-out");
            args.push_back(p.string());
            return args;
        };
        if (cli(with_out(ckpt1)) != 0 || cli(with_out(ckpt2)) != 0) {
            ok = false;
            why = "train failed";
        } else if (slurp(ckpt1) != slurp(ckpt2)) {
            ok = false;
            why = "checkpoints differ";
        }
    }

    if (ok) {
        const fs::path rep1 = dir / "report1.csv";
        const fs::path rep2 = dir / "report2.csv";
        auto eval_args = [&](const fs::path& p) {
            return std::vector<std::string>{"eval",         "--checkpoint", ckpt1.string(),
                                            "--test-file",  data1.string(), "--seed",
                                            "3",            "--report-csv", p.string()};
        };
        if (cli(eval_args(rep1)) != 0 || cli(eval_args(rep2)) != 0) {
            ok = false;
            why = "eval failed";
        } else if (slurp(rep1) != slurp(rep2)) {
            ok = false;
            why = "report CSVs differ";
        }
    }
    unsetenv("PCGCN_THREADS");

    report("determinism", ok,
           ok ? "single-threaded generate/train/eval are byte-identical across two runs"
              : why);
}

}  // namespace

int main() {
    std::cout.precision(6);
    const fs::path outdir = "acceptance_out";
    fs::create_directories(outdir);

    exact_solver_oracle_equivalence();
    solver_speed();
    parameter_counts();
    closed_form_loss();
    gradient_correctness();
    decoder_correctness();

    TrainedModels models;
    training_progress(models, outdir);
    gap_report_reproduction(models, outdir);
    determinism(outdir);

    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << " ("
              << (9 - failures) << "/9)" << std::endl;
    return failures == 0 ? 0 : 1;
}
