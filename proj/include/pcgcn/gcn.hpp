#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcgcn/instance.hpp"

namespace pcgcn {

struct ModelConfig {
    std::uint32_t h = 50;          // hidden width
    std::uint32_t L = 1;           // graph conv layers
    std::uint32_t mlp_layers = 3;  // weight layers in the output MLP (fixed)
    std::uint32_t k = 10;          // neighborhood size at train/eval time

    // Named presets: A = {L=1, h=50, k=10}, B = {L=3, h=100, k=5},
    // C = {L=3, h=100, k=10}.
    static ModelConfig setting(char name);
};

// (2h + h) + L*4h^2 + 2*(h^2 + h) + (h + 1)
std::size_t param_count(const ModelConfig& cfg);

// Flat offsets into the parameter buffer. The order doubles as the
// checkpoint payload order: A1 row-major, b, per layer A2,A3,A4,A5
// row-major, then W1,b1,W2,b2,W3,b3.
struct ParamLayout {
    std::uint32_t h = 0, L = 0;
    std::size_t input_weight = 0;  // h x 2
    std::size_t input_bias = 0;    // h
    std::size_t conv_base = 0;     // L blocks of 4 h*h matrices
    std::size_t mlp_w1 = 0, mlp_b1 = 0, mlp_w2 = 0, mlp_b2 = 0, mlp_w3 = 0, mlp_b3 = 0;
    std::size_t total = 0;

    explicit ParamLayout(const ModelConfig& cfg);
    std::size_t self_weight(std::uint32_t layer) const;      // A2
    std::size_t neighbor_weight(std::uint32_t layer) const;  // A3
    std::size_t gate_self(std::uint32_t layer) const;        // A4
    std::size_t gate_neighbor(std::uint32_t layer) const;    // A5
};

// All learnable parameters in one flat buffer (see ParamLayout).
class ModelParams {
public:
    ModelConfig cfg;
    std::vector<double> data;

    explicit ModelParams(ModelConfig c);

    std::span<double> input_weight();
    std::span<double> input_bias();
    std::span<double> self_weight(std::uint32_t layer);
    std::span<double> neighbor_weight(std::uint32_t layer);
    std::span<double> gate_self(std::uint32_t layer);
    std::span<double> gate_neighbor(std::uint32_t layer);
    std::span<double> mlp_w1();
    std::span<double> mlp_b1();
    std::span<double> mlp_w2();
    std::span<double> mlp_b2();
    std::span<double> mlp_w3();
    double& mlp_b3();

    std::span<const double> input_weight() const;
    std::span<const double> input_bias() const;
    std::span<const double> self_weight(std::uint32_t layer) const;
    std::span<const double> neighbor_weight(std::uint32_t layer) const;
    std::span<const double> gate_self(std::uint32_t layer) const;
    std::span<const double> gate_neighbor(std::uint32_t layer) const;
    std::span<const double> mlp_w1() const;
    std::span<const double> mlp_b1() const;
    std::span<const double> mlp_w2() const;
    std::span<const double> mlp_b2() const;
    std::span<const double> mlp_w3() const;
    double mlp_b3() const;
};

// Uniform Glorot weights, zero biases, deterministic per seed.
ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed);

// Everything the backward pass needs from one forward evaluation.
struct ForwardTrace {
    std::uint32_t n = 0;
    std::uint32_t deg = 0;               // neighbors per vertex, min(k, n-1)
    std::vector<std::uint32_t> nbr;      // n x deg neighbor indices
    std::vector<double> input;           // n x 2 features fed to the input transform
    std::vector<std::vector<double>> x;  // L+1 embeddings, n x h each
    std::vector<std::vector<double>> pre;   // L ReLU pre-activations, n x h
    std::vector<std::vector<double>> gate;  // L gate values (eta), n x deg x h
    std::vector<std::vector<double>> msg;   // L neighbor transforms A3*x, n x h
    std::vector<double> mlp_z1, mlp_a1, mlp_z2, mlp_a2;  // n x h each
    std::vector<double> probs;                           // n
};

// Input transform, L residual gated conv layers over the k-NN neighborhoods,
// then the 3-layer MLP head with a sigmoid. coord_scale multiplies the raw
// integer coordinates before the input transform; the default feeds them
// unscaled.
ForwardTrace forward(const ModelParams& params, const Instance& inst, const KnnGraph& knn,
                     double coord_scale = 1.0);

// Weighted cross-entropy, positive class weighted by (n-p)/p, averaged over
// the n vertices. Throws if any probability is not strictly inside (0,1).
double loss(std::span<const double> probs, std::span<const std::uint8_t> labels,
            std::uint32_t n, std::uint32_t p);

// Sum of the per-vertex weighted cross-entropy terms (no 1/n); batch losses
// divide the summed terms by the total vertex count.
double loss_term_sum(std::span<const double> probs, std::span<const std::uint8_t> labels,
                     std::uint32_t p);

// grad += coeff * d(loss_term_sum)/d(params). ReLU subgradient at 0 is 0.
void backward_accumulate(const ModelParams& params, const ForwardTrace& trace,
                         std::span<const std::uint8_t> labels, std::uint32_t p, double coeff,
                         std::span<double> grad);

// Gradient of loss() for a single instance (coeff = 1/n).
std::vector<double> backward(const ModelParams& params, const ForwardTrace& trace,
                             std::span<const std::uint8_t> labels, std::uint32_t p);

struct AdamState {
    std::vector<double> m, v;
    explicit AdamState(std::size_t count) : m(count, 0.0), v(count, 0.0) {}
};

// Standard Adam update, beta1=0.9, beta2=0.999, eps=1e-8, bias correction by
// the 1-based step index t.
void adam_step(ModelParams& params, std::span<const double> grads, AdamState& state,
               std::uint64_t t, double lr);

}  // namespace pcgcn
