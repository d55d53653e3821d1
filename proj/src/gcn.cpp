#include "pcgcn/gcn.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pcgcn/rng.hpp"

namespace pcgcn {

namespace {

void check_config(const ModelConfig& cfg) {
    if (cfg.h < 1 || cfg.L < 1 || cfg.k < 1)
        throw std::invalid_argument("model config requires h >= 1, L >= 1, k >= 1");
    if (cfg.mlp_layers != 3)
        throw std::invalid_argument("the MLP head is fixed at 3 weight layers");
}

// y = A x, A row-major rows x cols
void matvec(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

// y += A^T x, x length rows, y length cols
void tmatvec_add(const double* A, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = A + r * cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < cols; ++c) y[c] += row[c] * xr;
    }
}

// A += x y^T
void outer_add(double* A, std::size_t rows, std::size_t cols, const double* x, const double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = A + r * cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < cols; ++c) row[c] += xr * y[c];
    }
}

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace

ModelConfig ModelConfig::setting(char name) {
    switch (std::toupper(static_cast<unsigned char>(name))) {
        case 'A':
            return ModelConfig{50, 1, 3, 10};
        case 'B':
            return ModelConfig{100, 3, 3, 5};
        case 'C':
            return ModelConfig{100, 3, 3, 10};
        default:
            throw std::invalid_argument(std::string("unknown setting '") + name + "'");
    }
}

std::size_t param_count(const ModelConfig& cfg) {
    check_config(cfg);
    const std::size_t h = cfg.h;
    return (2 * h + h) + cfg.L * 4 * h * h + 2 * (h * h + h) + (h + 1);
}

ParamLayout::ParamLayout(const ModelConfig& cfg) : h(cfg.h), L(cfg.L) {
    check_config(cfg);
    const std::size_t hh = static_cast<std::size_t>(h) * h;
    input_weight = 0;
    input_bias = 2 * h;
    conv_base = 3 * h;
    mlp_w1 = conv_base + static_cast<std::size_t>(L) * 4 * hh;
    mlp_b1 = mlp_w1 + hh;
    mlp_w2 = mlp_b1 + h;
    mlp_b2 = mlp_w2 + hh;
    mlp_w3 = mlp_b2 + h;
    mlp_b3 = mlp_w3 + h;
    total = mlp_b3 + 1;
}

std::size_t ParamLayout::self_weight(std::uint32_t layer) const {
    return conv_base + (static_cast<std::size_t>(layer) * 4 + 0) * h * h;
}
std::size_t ParamLayout::neighbor_weight(std::uint32_t layer) const {
    return conv_base + (static_cast<std::size_t>(layer) * 4 + 1) * h * h;
}
std::size_t ParamLayout::gate_self(std::uint32_t layer) const {
    return conv_base + (static_cast<std::size_t>(layer) * 4 + 2) * h * h;
}
std::size_t ParamLayout::gate_neighbor(std::uint32_t layer) const {
    return conv_base + (static_cast<std::size_t>(layer) * 4 + 3) * h * h;
}

ModelParams::ModelParams(ModelConfig c) : cfg(c), data(param_count(c), 0.0) {}

namespace {
std::span<double> view(std::vector<double>& d, std::size_t off, std::size_t len) {
    return std::span<double>(d.data() + off, len);
}
std::span<const double> view(const std::vector<double>& d, std::size_t off, std::size_t len) {
    return std::span<const double>(d.data() + off, len);
}
}  // namespace

std::span<double> ModelParams::input_weight() {
    return view(data, ParamLayout(cfg).input_weight, 2 * cfg.h);
}
std::span<double> ModelParams::input_bias() {
    return view(data, ParamLayout(cfg).input_bias, cfg.h);
}
std::span<double> ModelParams::self_weight(std::uint32_t layer) {
    return view(data, ParamLayout(cfg).self_weight(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<double> ModelParams::neighbor_weight(std::uint32_t layer) {
    return view(data, ParamLayout(cfg).neighbor_weight(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<double> ModelParams::gate_self(std::uint32_t layer) {
    return view(data, ParamLayout(cfg).gate_self(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<double> ModelParams::gate_neighbor(std::uint32_t layer) {
    return view(data, ParamLayout(cfg).gate_neighbor(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<double> ModelParams::mlp_w1() {
    return view(data, ParamLayout(cfg).mlp_w1, std::size_t(cfg.h) * cfg.h);
}
std::span<double> ModelParams::mlp_b1() { return view(data, ParamLayout(cfg).mlp_b1, cfg.h); }
std::span<double> ModelParams::mlp_w2() {
    return view(data, ParamLayout(cfg).mlp_w2, std::size_t(cfg.h) * cfg.h);
}
std::span<double> ModelParams::mlp_b2() { return view(data, ParamLayout(cfg).mlp_b2, cfg.h); }
std::span<double> ModelParams::mlp_w3() { return view(data, ParamLayout(cfg).mlp_w3, cfg.h); }
double& ModelParams::mlp_b3() { return data[ParamLayout(cfg).mlp_b3]; }

std::span<const double> ModelParams::input_weight() const {
    return view(data, ParamLayout(cfg).input_weight, 2 * cfg.h);
}
std::span<const double> ModelParams::input_bias() const {
    return view(data, ParamLayout(cfg).input_bias, cfg.h);
}
std::span<const double> ModelParams::self_weight(std::uint32_t layer) const {
    return view(data, ParamLayout(cfg).self_weight(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<const double> ModelParams::neighbor_weight(std::uint32_t layer) const {
    return view(data, ParamLayout(cfg).neighbor_weight(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<const double> ModelParams::gate_self(std::uint32_t layer) const {
    return view(data, ParamLayout(cfg).gate_self(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<const double> ModelParams::gate_neighbor(std::uint32_t layer) const {
    return view(data, ParamLayout(cfg).gate_neighbor(layer), std::size_t(cfg.h) * cfg.h);
}
std::span<const double> ModelParams::mlp_w1() const {
    return view(data, ParamLayout(cfg).mlp_w1, std::size_t(cfg.h) * cfg.h);
}
std::span<const double> ModelParams::mlp_b1() const {
    return view(data, ParamLayout(cfg).mlp_b1, cfg.h);
}
std::span<const double> ModelParams::mlp_w2() const {
    return view(data, ParamLayout(cfg).mlp_w2, std::size_t(cfg.h) * cfg.h);
}
std::span<const double> ModelParams::mlp_b2() const {
    return view(data, ParamLayout(cfg).mlp_b2, cfg.h);
}
std::span<const double> ModelParams::mlp_w3() const {
    return view(data, ParamLayout(cfg).mlp_w3, cfg.h);
}
double ModelParams::mlp_b3() const { return data[ParamLayout(cfg).mlp_b3]; }

ModelParams init_params(const ModelConfig& cfg, std::uint64_t seed) {
    check_config(cfg);
    ModelParams params(cfg);
    Rng rng(seed);
    auto fill = [&](std::span<double> m, std::size_t fan_in, std::size_t fan_out, double scale) {
        const double s = scale * std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& v : m) v = rng.symmetric(s);
    };
    // The input transform sees raw coordinates in [0,100]; its Glorot scale
    // is divided by the coordinate range so that initial activations stay in
    // the active region of the gates and the output sigmoid.
    fill(params.input_weight(), 2, cfg.h, 1.0 / 100.0);
    for (std::uint32_t l = 0; l < cfg.L; ++l) {
        fill(params.self_weight(l), cfg.h, cfg.h, 1.0);
        fill(params.neighbor_weight(l), cfg.h, cfg.h, 1.0);
        fill(params.gate_self(l), cfg.h, cfg.h, 1.0);
        fill(params.gate_neighbor(l), cfg.h, cfg.h, 1.0);
    }
    fill(params.mlp_w1(), cfg.h, cfg.h, 1.0);
    fill(params.mlp_w2(), cfg.h, cfg.h, 1.0);
    fill(params.mlp_w3(), cfg.h, 1, 1.0);
    return params;
}

ForwardTrace forward(const ModelParams& params, const Instance& inst, const KnnGraph& knn,
                     double coord_scale) {
    const ModelConfig& cfg = params.cfg;
    if (knn.k != cfg.k)
        throw std::invalid_argument("knn built with k=" + std::to_string(knn.k) +
                                    " but model expects k=" + std::to_string(cfg.k));
    const std::uint32_t n = inst.n();
    if (knn.nbrs.size() != n) throw std::invalid_argument("knn vertex count mismatch");
    const std::uint32_t h = cfg.h;
    const std::uint32_t L = cfg.L;
    const std::uint32_t deg = std::min(cfg.k, n - 1);

    ForwardTrace tr;
    tr.n = n;
    tr.deg = deg;
    tr.nbr.resize(static_cast<std::size_t>(n) * deg);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (knn.nbrs[i].size() != deg) throw std::invalid_argument("ragged knn neighbor list");
        std::copy(knn.nbrs[i].begin(), knn.nbrs[i].end(), tr.nbr.begin() + std::size_t(i) * deg);
    }

    tr.input.resize(static_cast<std::size_t>(n) * 2);
    for (std::uint32_t i = 0; i < n; ++i) {
        tr.input[2 * std::size_t(i)] = coord_scale * inst.coords()[i][0];
        tr.input[2 * std::size_t(i) + 1] = coord_scale * inst.coords()[i][1];
    }

    const std::size_t nh = static_cast<std::size_t>(n) * h;
    tr.x.assign(L + 1, {});
    tr.pre.assign(L, {});
    tr.gate.assign(L, {});
    tr.msg.assign(L, {});

    // input transform
    tr.x[0].resize(nh);
    {
        const double* A1 = params.input_weight().data();
        const double* b = params.input_bias().data();
        for (std::uint32_t i = 0; i < n; ++i) {
            double* xi = tr.x[0].data() + std::size_t(i) * h;
            matvec(A1, h, 2, tr.input.data() + 2 * std::size_t(i), xi);
            for (std::uint32_t c = 0; c < h; ++c) xi[c] += b[c];
        }
    }

    // conv layers
    std::vector<double> gate_self_t(nh), gate_nbr_t(nh);
    for (std::uint32_t l = 0; l < L; ++l) {
        const double* A2 = params.self_weight(l).data();
        const double* A3 = params.neighbor_weight(l).data();
        const double* A4 = params.gate_self(l).data();
        const double* A5 = params.gate_neighbor(l).data();
        const std::vector<double>& xs = tr.x[l];
        tr.pre[l].resize(nh);
        tr.msg[l].resize(nh);
        tr.gate[l].resize(static_cast<std::size_t>(n) * deg * h);
        tr.x[l + 1].resize(nh);

        for (std::uint32_t i = 0; i < n; ++i) {
            const double* xi = xs.data() + std::size_t(i) * h;
            matvec(A2, h, h, xi, tr.pre[l].data() + std::size_t(i) * h);
            matvec(A3, h, h, xi, tr.msg[l].data() + std::size_t(i) * h);
            matvec(A4, h, h, xi, gate_self_t.data() + std::size_t(i) * h);
            matvec(A5, h, h, xi, gate_nbr_t.data() + std::size_t(i) * h);
        }
        for (std::uint32_t i = 0; i < n; ++i) {
            double* pre_i = tr.pre[l].data() + std::size_t(i) * h;
            for (std::uint32_t s = 0; s < deg; ++s) {
                const std::uint32_t j = tr.nbr[std::size_t(i) * deg + s];
                double* eta = tr.gate[l].data() + (std::size_t(i) * deg + s) * h;
                const double* gs = gate_self_t.data() + std::size_t(i) * h;
                const double* gn = gate_nbr_t.data() + std::size_t(j) * h;
                const double* mj = tr.msg[l].data() + std::size_t(j) * h;
                for (std::uint32_t c = 0; c < h; ++c) {
                    eta[c] = sigmoid(gs[c] + gn[c]);
                    pre_i[c] += eta[c] * mj[c];
                }
            }
            const double* xi = xs.data() + std::size_t(i) * h;
            double* xo = tr.x[l + 1].data() + std::size_t(i) * h;
            for (std::uint32_t c = 0; c < h; ++c)
                xo[c] = xi[c] + (pre_i[c] > 0.0 ? pre_i[c] : 0.0);
        }
    }

    // MLP head with sigmoid output
    tr.mlp_z1.resize(nh);
    tr.mlp_a1.resize(nh);
    tr.mlp_z2.resize(nh);
    tr.mlp_a2.resize(nh);
    tr.probs.resize(n);
    const double* W1 = params.mlp_w1().data();
    const double* B1 = params.mlp_b1().data();
    const double* W2 = params.mlp_w2().data();
    const double* B2 = params.mlp_b2().data();
    const double* W3 = params.mlp_w3().data();
    const double B3 = params.mlp_b3();
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t off = std::size_t(i) * h;
        const double* xi = tr.x[L].data() + off;
        double* z1 = tr.mlp_z1.data() + off;
        double* a1 = tr.mlp_a1.data() + off;
        double* z2 = tr.mlp_z2.data() + off;
        double* a2 = tr.mlp_a2.data() + off;
        matvec(W1, h, h, xi, z1);
        for (std::uint32_t c = 0; c < h; ++c) {
            z1[c] += B1[c];
            a1[c] = z1[c] > 0.0 ? z1[c] : 0.0;
        }
        matvec(W2, h, h, a1, z2);
        for (std::uint32_t c = 0; c < h; ++c) {
            z2[c] += B2[c];
            a2[c] = z2[c] > 0.0 ? z2[c] : 0.0;
        }
        double logit = B3;
        for (std::uint32_t c = 0; c < h; ++c) logit += W3[c] * a2[c];
        tr.probs[i] = sigmoid(logit);
    }
    return tr;
}

double loss_term_sum(std::span<const double> probs, std::span<const std::uint8_t> labels,
                     std::uint32_t p) {
    if (probs.size() != labels.size()) throw std::invalid_argument("probs/labels size mismatch");
    if (p < 1 || p > probs.size()) throw std::invalid_argument("p outside [1, n]");
    const double w = static_cast<double>(probs.size() - p) / static_cast<double>(p);
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double q = probs[i];
        if (!(q > 0.0 && q < 1.0))
            throw std::invalid_argument("probability not strictly inside (0,1)");
        sum += labels[i] ? w * std::log(q) : std::log1p(-q);
    }
    return -sum;
}

double loss(std::span<const double> probs, std::span<const std::uint8_t> labels, std::uint32_t n,
            std::uint32_t p) {
    if (probs.size() != n) throw std::invalid_argument("probs size != n");
    return loss_term_sum(probs, labels, p) / static_cast<double>(n);
}

void backward_accumulate(const ModelParams& params, const ForwardTrace& tr,
                         std::span<const std::uint8_t> labels, std::uint32_t p, double coeff,
                         std::span<double> grad) {
    const ModelConfig& cfg = params.cfg;
    const ParamLayout lay(cfg);
    if (grad.size() != lay.total) throw std::invalid_argument("gradient buffer size mismatch");
    if (labels.size() != tr.n) throw std::invalid_argument("labels size mismatch");
    if (p < 1 || p > tr.n) throw std::invalid_argument("p outside [1, n]");
    const std::uint32_t n = tr.n;
    const std::uint32_t h = cfg.h;
    const std::uint32_t L = cfg.L;
    const std::uint32_t deg = tr.deg;
    const double w = static_cast<double>(n - p) / static_cast<double>(p);

    double* g = grad.data();
    const std::size_t nh = static_cast<std::size_t>(n) * h;
    std::vector<double> dx(nh, 0.0);

    // MLP head
    {
        const double* W1 = params.mlp_w1().data();
        const double* W2 = params.mlp_w2().data();
        const double* W3 = params.mlp_w3().data();
        std::vector<double> dz2(h), da1(h), dz1(h);
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::size_t off = std::size_t(i) * h;
            const double q = tr.probs[i];
            const double y = labels[i] ? 1.0 : 0.0;
            // d(term)/d(logit) through the sigmoid; no divisions by q
            const double dlogit = -coeff * (w * y * (1.0 - q) - (1.0 - y) * q);

            const double* a2 = tr.mlp_a2.data() + off;
            const double* a1 = tr.mlp_a1.data() + off;
            const double* xL = tr.x[L].data() + off;
            for (std::uint32_t c = 0; c < h; ++c) g[lay.mlp_w3 + c] += dlogit * a2[c];
            g[lay.mlp_b3] += dlogit;

            for (std::uint32_t c = 0; c < h; ++c)
                dz2[c] = tr.mlp_z2[off + c] > 0.0 ? dlogit * W3[c] : 0.0;
            outer_add(g + lay.mlp_w2, h, h, dz2.data(), a1);
            for (std::uint32_t c = 0; c < h; ++c) g[lay.mlp_b2 + c] += dz2[c];

            std::fill(da1.begin(), da1.end(), 0.0);
            tmatvec_add(W2, h, h, dz2.data(), da1.data());
            for (std::uint32_t c = 0; c < h; ++c)
                dz1[c] = tr.mlp_z1[off + c] > 0.0 ? da1[c] : 0.0;
            outer_add(g + lay.mlp_w1, h, h, dz1.data(), xL);
            for (std::uint32_t c = 0; c < h; ++c) g[lay.mlp_b1 + c] += dz1[c];
            tmatvec_add(W1, h, h, dz1.data(), dx.data() + off);
        }
    }

    // conv layers, last to first; dx holds d/dx^{l+1} on entry, d/dx^l on exit
    std::vector<double> dpre(nh), dmsg(nh), dgs(nh), dgn(nh);
    for (std::uint32_t li = L; li-- > 0;) {
        const double* A2 = params.self_weight(li).data();
        const double* A3 = params.neighbor_weight(li).data();
        const double* A4 = params.gate_self(li).data();
        const double* A5 = params.gate_neighbor(li).data();
        const std::vector<double>& xs = tr.x[li];
        const std::vector<double>& pre = tr.pre[li];
        const std::vector<double>& eta = tr.gate[li];
        const std::vector<double>& msg = tr.msg[li];

        for (std::size_t idx = 0; idx < nh; ++idx)
            dpre[idx] = pre[idx] > 0.0 ? dx[idx] : 0.0;
        std::fill(dmsg.begin(), dmsg.end(), 0.0);
        std::fill(dgs.begin(), dgs.end(), 0.0);
        std::fill(dgn.begin(), dgn.end(), 0.0);

        for (std::uint32_t i = 0; i < n; ++i) {
            const double* dpre_i = dpre.data() + std::size_t(i) * h;
            for (std::uint32_t s = 0; s < deg; ++s) {
                const std::uint32_t j = tr.nbr[std::size_t(i) * deg + s];
                const double* e = eta.data() + (std::size_t(i) * deg + s) * h;
                const double* mj = msg.data() + std::size_t(j) * h;
                double* dmsg_j = dmsg.data() + std::size_t(j) * h;
                double* dgs_i = dgs.data() + std::size_t(i) * h;
                double* dgn_j = dgn.data() + std::size_t(j) * h;
                for (std::uint32_t c = 0; c < h; ++c) {
                    const double de = dpre_i[c] * mj[c];
                    dmsg_j[c] += dpre_i[c] * e[c];
                    const double dg_c = de * e[c] * (1.0 - e[c]);
                    dgs_i[c] += dg_c;
                    dgn_j[c] += dg_c;
                }
            }
        }

        for (std::uint32_t t = 0; t < n; ++t) {
            const std::size_t off = std::size_t(t) * h;
            const double* xt = xs.data() + off;
            outer_add(g + lay.self_weight(li), h, h, dpre.data() + off, xt);
            tmatvec_add(A2, h, h, dpre.data() + off, dx.data() + off);
            outer_add(g + lay.neighbor_weight(li), h, h, dmsg.data() + off, xt);
            tmatvec_add(A3, h, h, dmsg.data() + off, dx.data() + off);
            outer_add(g + lay.gate_self(li), h, h, dgs.data() + off, xt);
            tmatvec_add(A4, h, h, dgs.data() + off, dx.data() + off);
            outer_add(g + lay.gate_neighbor(li), h, h, dgn.data() + off, xt);
            tmatvec_add(A5, h, h, dgn.data() + off, dx.data() + off);
        }
    }

    // input transform
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t off = std::size_t(i) * h;
        outer_add(g + lay.input_weight, h, 2, dx.data() + off, tr.input.data() + 2 * std::size_t(i));
        for (std::uint32_t c = 0; c < h; ++c) g[lay.input_bias + c] += dx[off + c];
    }
}

std::vector<double> backward(const ModelParams& params, const ForwardTrace& trace,
                             std::span<const std::uint8_t> labels, std::uint32_t p) {
    std::vector<double> grad(param_count(params.cfg), 0.0);
    backward_accumulate(params, trace, labels, p, 1.0 / static_cast<double>(trace.n), grad);
    return grad;
}

void adam_step(ModelParams& params, std::span<const double> grads, AdamState& state,
               std::uint64_t t, double lr) {
    if (t < 1) throw std::invalid_argument("Adam step index starts at 1");
    if (grads.size() != params.data.size() || state.m.size() != params.data.size())
        throw std::invalid_argument("Adam buffer size mismatch");
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < grads.size(); ++i) {
        const double gi = grads[i];
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * gi;
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * gi * gi;
        params.data[i] -= lr * (state.m[i] / c1) / (std::sqrt(state.v[i] / c2) + eps);
    }
}

}  // namespace pcgcn
