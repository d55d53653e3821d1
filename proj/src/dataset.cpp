#include "pcgcn/dataset.hpp"

#include <fstream>
#include <numeric>
#include <optional>

#include "json.hpp"
#include "pcgcn/parallel.hpp"

namespace pcgcn {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json instance_json(const Instance& inst) {
    ordered_json j;
    j["id"] = inst.id();
    j["n"] = inst.n();
    j["p"] = inst.p();
    ordered_json coords = ordered_json::array();
    for (const auto& c : inst.coords()) coords.push_back({c[0], c[1]});
    j["coords"] = std::move(coords);
    return j;
}

Instance instance_from_json(const ordered_json& j) {
    if (!j.is_object()) throw DataError("instance line is not a JSON object");
    for (const char* key : {"id", "n", "p", "coords"})
        if (!j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
    const auto id = j.at("id").get<std::uint64_t>();
    const auto n = j.at("n").get<std::uint32_t>();
    const auto p = j.at("p").get<std::uint32_t>();
    const auto& jc = j.at("coords");
    if (!jc.is_array() || jc.size() != n) throw DataError("coords length does not match n");
    std::vector<std::array<int, 2>> coords;
    coords.reserve(n);
    for (const auto& pair : jc) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number_integer())
            throw DataError("coordinate is not an integer pair");
        coords.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
    try {
        return Instance(id, p, std::move(coords));
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
}

}  // namespace

std::string instance_to_jsonl(const Instance& inst) { return instance_json(inst).dump(); }

std::string sample_to_jsonl(const LabeledSample& sample) {
    ordered_json j = instance_json(sample.inst);
    j["z_star"] = sample.z_star;
    ordered_json labels = ordered_json::array();
    for (std::uint8_t v : sample.labels) labels.push_back(static_cast<int>(v));
    j["labels"] = std::move(labels);
    return j.dump();
}

Instance instance_from_jsonl(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad JSON: ") + e.what());
    }
    return instance_from_json(j);
}

LabeledSample sample_from_jsonl(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad JSON: ") + e.what());
    }
    Instance inst = instance_from_json(j);
    if (!j.contains("z_star") || !j.contains("labels"))
        throw DataError("sample is missing z_star or labels");
    if (!j.at("z_star").is_number()) throw DataError("z_star is not a number");
    const double z_star = j.at("z_star").get<double>();
    if (z_star < 0.0) throw DataError("z_star is negative");
    const auto& jl = j.at("labels");
    if (!jl.is_array() || jl.size() != inst.n()) throw DataError("labels length does not match n");
    std::vector<std::uint8_t> labels;
    labels.reserve(inst.n());
    std::uint32_t ones = 0;
    for (const auto& v : jl) {
        if (!v.is_number_integer()) throw DataError("label is not an integer");
        const int b = v.get<int>();
        if (b != 0 && b != 1) throw DataError("label is not 0 or 1");
        ones += static_cast<std::uint32_t>(b);
        labels.push_back(static_cast<std::uint8_t>(b));
    }
    if (ones != inst.p()) throw DataError("labels do not contain exactly p ones");
    return LabeledSample{std::move(inst), z_star, std::move(labels)};
}

std::vector<LabeledSample> build_dataset(std::size_t count, std::uint32_t n, std::uint32_t p,
                                         std::uint64_t base_seed) {
    if (count < 1) throw std::invalid_argument("dataset count must be >= 1");
    std::vector<std::optional<LabeledSample>> slots(count);
    parallel_ranges(count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            Instance inst = generate_instance(n, p, base_seed + i);
            OptimumCertificate cert = solve_exact(inst);
            slots[i] = LabeledSample{std::move(inst), cert.z_star, std::move(cert.labels)};
        }
    });
    std::vector<LabeledSample> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

void write_samples(const std::string& path, const std::vector<LabeledSample>& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    for (const auto& s : samples) out << sample_to_jsonl(s) << '\n';
    if (!out) throw DataError("write to '" + path + "' failed");
}

namespace {
template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            fn(line);
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}
}  // namespace

std::vector<LabeledSample> read_samples(const std::string& path) {
    std::vector<LabeledSample> samples;
    for_each_line(path, [&](const std::string& line) { samples.push_back(sample_from_jsonl(line)); });
    if (samples.empty()) throw DataError(path + ": no samples");
    return samples;
}

std::vector<Instance> read_instances(const std::string& path) {
    std::vector<Instance> instances;
    for_each_line(path, [&](const std::string& line) { instances.push_back(instance_from_jsonl(line)); });
    if (instances.empty()) throw DataError(path + ": no instances");
    return instances;
}

}  // namespace pcgcn
