#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcgcn/exact_solver.hpp"
#include "pcgcn/instance.hpp"

namespace pcgcn {

// Malformed or inconsistent input files.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An instance with its exact-solver ground truth.
struct LabeledSample {
    Instance inst;
    double z_star = 0.0;
    std::vector<std::uint8_t> labels;  // n entries, exactly p ones
};

// One JSONL line: {"id":..,"n":..,"p":..,"coords":[[x,y],...]}; labeled
// samples append {"z_star":..,"labels":[0/1,...]}. Distances are always
// recomputed, never serialized.
std::string instance_to_jsonl(const Instance& inst);
std::string sample_to_jsonl(const LabeledSample& sample);
Instance instance_from_jsonl(const std::string& line);
LabeledSample sample_from_jsonl(const std::string& line);

// Instance i is generated with seed base_seed + i and labeled by solve_exact.
// Runs across worker threads; the result is index-ordered and deterministic.
std::vector<LabeledSample> build_dataset(std::size_t count, std::uint32_t n, std::uint32_t p,
                                         std::uint64_t base_seed);

void write_samples(const std::string& path, const std::vector<LabeledSample>& samples);
std::vector<LabeledSample> read_samples(const std::string& path);

// Reads only the instance fields; labels, when present, are ignored.
std::vector<Instance> read_instances(const std::string& path);

}  // namespace pcgcn
