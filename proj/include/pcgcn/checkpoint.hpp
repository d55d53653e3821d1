#pragma once

#include <string>

#include "pcgcn/gcn.hpp"

namespace pcgcn {

struct CheckpointHeader {
    ModelConfig cfg;
    std::size_t param_count = 0;
    std::string format;  // "f64le"
};

// A checkpoint is one JSON header line
// {"h":..,"L":..,"k":..,"mlp_layers":3,"param_count":..,"format":"f64le"}
// followed by every parameter as little-endian 64-bit floats in the
// ParamLayout order.
void save_checkpoint(const std::string& path, const ModelParams& params);
ModelParams load_checkpoint(const std::string& path);
CheckpointHeader read_checkpoint_header(const std::string& path);

}  // namespace pcgcn
