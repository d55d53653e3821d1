#include "pcgcn/training.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pcgcn/parallel.hpp"
#include "pcgcn/rng.hpp"
#include "pcgcn/text.hpp"

namespace pcgcn {

namespace {
constexpr double kProbClamp = 1e-12;

double clamp_prob(double q) {
    if (q < kProbClamp) return kProbClamp;
    if (q > 1.0 - kProbClamp) return 1.0 - kProbClamp;
    return q;
}
}  // namespace

TrainConfig TrainConfig::setting_defaults(char name) {
    TrainConfig cfg;
    cfg.model = ModelConfig::setting(name);
    cfg.setting = std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(name))));
    cfg.batch = 1000;
    cfg.lr = 1e-4;
    cfg.epochs = (cfg.setting == "A") ? 50 : 20;
    return cfg;
}

TrainResult train(const TrainConfig& cfg, const std::vector<LabeledSample>& dataset) {
    if (dataset.empty()) throw std::invalid_argument("empty training set");
    if (cfg.batch < 1 || cfg.batch > dataset.size())
        throw std::invalid_argument("batch size must be in [1, dataset size]");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");

    const std::size_t count = dataset.size();
    const std::size_t num_batches = count / cfg.batch;

    std::vector<KnnGraph> knns(count);
    parallel_ranges(count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) knns[i] = build_knn(dataset[i].inst, cfg.model.k);
    });

    ModelParams params = init_params(cfg.model, cfg.seed);
    const std::size_t n_params = params.data.size();
    AdamState state(n_params);
    LossHistory history;
    history.reserve(cfg.epochs * num_batches);

    const std::size_t chunks = std::min<std::size_t>(worker_count(), cfg.batch);
    std::vector<std::vector<double>> chunk_grad(chunks, std::vector<double>(n_params));
    std::vector<double> chunk_loss(chunks);
    std::vector<std::size_t> chunk_verts(chunks);
    std::vector<double> grad(n_params);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});

    const auto start = std::chrono::steady_clock::now();
    std::uint64_t step = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng(derive_seed(cfg.seed, epoch)).shuffle(order);
        for (std::size_t b = 0; b < num_batches; ++b) {
            const std::size_t* batch = order.data() + b * cfg.batch;
            const std::size_t per_chunk = (cfg.batch + chunks - 1) / chunks;

            parallel_ranges(chunks, [&](std::size_t clo, std::size_t chi) {
                for (std::size_t c = clo; c < chi; ++c) {
                    auto& cg = chunk_grad[c];
                    std::fill(cg.begin(), cg.end(), 0.0);
                    chunk_loss[c] = 0.0;
                    chunk_verts[c] = 0;
                    const std::size_t lo = c * per_chunk;
                    const std::size_t hi = std::min(cfg.batch, lo + per_chunk);
                    std::vector<double> probs;
                    for (std::size_t s = lo; s < hi; ++s) {
                        const LabeledSample& sample = dataset[batch[s]];
                        ForwardTrace tr =
                            forward(params, sample.inst, knns[batch[s]], cfg.coord_scale);
                        probs.assign(tr.probs.begin(), tr.probs.end());
                        for (double& q : probs) q = clamp_prob(q);
                        chunk_loss[c] += loss_term_sum(probs, sample.labels, sample.inst.p());
                        chunk_verts[c] += sample.inst.n();
                        backward_accumulate(params, tr, sample.labels, sample.inst.p(), 1.0, cg);
                    }
                }
            });

            std::fill(grad.begin(), grad.end(), 0.0);
            double loss_sum = 0.0;
            std::size_t vert_sum = 0;
            for (std::size_t c = 0; c < chunks; ++c) {
                const auto& cg = chunk_grad[c];
                for (std::size_t i = 0; i < n_params; ++i) grad[i] += cg[i];
                loss_sum += chunk_loss[c];
                vert_sum += chunk_verts[c];
            }
            const double inv = 1.0 / static_cast<double>(vert_sum);
            for (double& gi : grad) gi *= inv;
            const double batch_loss = loss_sum * inv;

            adam_step(params, grad, state, ++step, cfg.lr);

            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            history.push_back(LossRecord{epoch, b, seconds, batch_loss});
        }
    }
    return TrainResult{std::move(params), std::move(history)};
}

GapSummary summarize_gaps(std::vector<double> gaps) {
    GapSummary s;
    if (gaps.empty()) return s;
    std::sort(gaps.begin(), gaps.end());
    s.mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    const std::size_t mid = gaps.size() / 2;
    s.median = gaps.size() % 2 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
    s.max = gaps.back();
    return s;
}

GapReport evaluate(const ModelParams& params, const std::vector<LabeledSample>& testset,
                   std::uint64_t eval_seed, double coord_scale) {
    if (testset.empty()) throw std::invalid_argument("empty test set");
    GapReport report;
    report.rows.resize(testset.size());
    parallel_ranges(testset.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const LabeledSample& sample = testset[i];
            const KnnGraph knn = build_knn(sample.inst, params.cfg.k);
            const ForwardTrace tr = forward(params, sample.inst, knn, coord_scale);
            const DecodeResult naive = naive_decode(sample.inst, tr.probs, sample.inst.p());
            const DecodeResult greedy = greedy_decode(sample.inst, tr.probs, sample.inst.p());
            const DecodeResult base = baseline_decode(sample.inst, sample.inst.p(), eval_seed + i);
            GapRow& row = report.rows[i];
            row.instance_id = sample.inst.id();
            row.z_star = sample.z_star;
            row.z_naive = naive.z;
            row.gap_naive = optimality_gap(naive.z, sample.z_star);
            row.z_greedy = greedy.z;
            row.gap_greedy = optimality_gap(greedy.z, sample.z_star);
            row.z_baseline = base.z;
            row.gap_baseline = optimality_gap(base.z, sample.z_star);
        }
    });
    std::vector<double> g1, g2, g3;
    for (const GapRow& r : report.rows) {
        g1.push_back(r.gap_naive);
        g2.push_back(r.gap_greedy);
        g3.push_back(r.gap_baseline);
    }
    report.naive = summarize_gaps(std::move(g1));
    report.greedy = summarize_gaps(std::move(g2));
    report.baseline = summarize_gaps(std::move(g3));
    return report;
}

void write_loss_csv(const std::string& path, const LossHistory& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << "epoch,batch,seconds,loss\n";
    for (const LossRecord& r : history)
        out << r.epoch << ',' << r.batch << ',' << format_double(r.seconds) << ','
            << format_double(r.loss) << '\n';
    if (!out) throw DataError("write to '" + path + "' failed");
}

void write_gap_csv(const std::string& path, const GapReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << "instance_id,z_star,z_naive,gap_naive,z_greedy,gap_greedy,z_baseline,gap_baseline\n";
    for (const GapRow& r : report.rows)
        out << r.instance_id << ',' << format_double(r.z_star) << ',' << format_double(r.z_naive)
            << ',' << format_double(r.gap_naive) << ',' << format_double(r.z_greedy) << ','
            << format_double(r.gap_greedy) << ',' << format_double(r.z_baseline) << ','
            << format_double(r.gap_baseline) << '\n';
    if (!out) throw DataError("write to '" + path + "' failed");
}

namespace {
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}
}  // namespace

GapReport read_gap_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) ||
        line != "instance_id,z_star,z_naive,gap_naive,z_greedy,gap_greedy,z_baseline,gap_baseline")
        throw DataError(path + ": not a gap report (bad header)");
    GapReport report;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 8)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected 8 fields");
        try {
            GapRow row;
            row.instance_id = std::stoull(fields[0]);
            row.z_star = parse_double(fields[1]);
            row.z_naive = parse_double(fields[2]);
            row.gap_naive = parse_double(fields[3]);
            row.z_greedy = parse_double(fields[4]);
            row.gap_greedy = parse_double(fields[5]);
            row.z_baseline = parse_double(fields[6]);
            row.gap_baseline = parse_double(fields[7]);
            report.rows.push_back(row);
        } catch (const std::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (report.rows.empty()) throw DataError(path + ": no rows");
    std::vector<double> g1, g2, g3;
    for (const GapRow& r : report.rows) {
        g1.push_back(r.gap_naive);
        g2.push_back(r.gap_greedy);
        g3.push_back(r.gap_baseline);
    }
    report.naive = summarize_gaps(std::move(g1));
    report.greedy = summarize_gaps(std::move(g2));
    report.baseline = summarize_gaps(std::move(g3));
    return report;
}

void write_gap_plot_csv(const std::string& path, const GapReport& report) {
    std::vector<double> naive, greedy, baseline;
    for (const GapRow& r : report.rows) {
        naive.push_back(r.gap_naive);
        greedy.push_back(r.gap_greedy);
        baseline.push_back(r.gap_baseline);
    }
    std::sort(naive.begin(), naive.end());
    std::sort(greedy.begin(), greedy.end());
    std::sort(baseline.begin(), baseline.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << "rank,gap_naive,gap_greedy,gap_baseline\n";
    for (std::size_t i = 0; i < naive.size(); ++i)
        out << (i + 1) << ',' << format_double(naive[i]) << ',' << format_double(greedy[i]) << ','
            << format_double(baseline[i]) << '\n';
    if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace pcgcn
