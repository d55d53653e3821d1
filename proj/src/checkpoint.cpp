#include "pcgcn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "pcgcn/dataset.hpp"

namespace pcgcn {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t bswap64(std::uint64_t v) {
    return ((v & 0x00000000000000ffULL) << 56) | ((v & 0x000000000000ff00ULL) << 40) |
           ((v & 0x0000000000ff0000ULL) << 24) | ((v & 0x00000000ff000000ULL) << 8) |
           ((v & 0x000000ff00000000ULL) >> 8) | ((v & 0x0000ff0000000000ULL) >> 24) |
           ((v & 0x00ff000000000000ULL) >> 40) | ((v & 0xff00000000000000ULL) >> 56);
}

std::uint64_t to_le_bits(double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    if constexpr (std::endian::native == std::endian::big) bits = bswap64(bits);
    return bits;
}

double from_le_bits(std::uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big) bits = bswap64(bits);
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
}

CheckpointHeader parse_header(const std::string& line, const std::string& path) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": bad checkpoint header: " + e.what());
    }
    for (const char* key : {"h", "L", "k", "mlp_layers", "param_count", "format"})
        if (!j.contains(key))
            throw DataError(path + ": checkpoint header missing '" + key + "'");
    CheckpointHeader hdr;
    hdr.cfg.h = j.at("h").get<std::uint32_t>();
    hdr.cfg.L = j.at("L").get<std::uint32_t>();
    hdr.cfg.k = j.at("k").get<std::uint32_t>();
    hdr.cfg.mlp_layers = j.at("mlp_layers").get<std::uint32_t>();
    hdr.param_count = j.at("param_count").get<std::size_t>();
    hdr.format = j.at("format").get<std::string>();
    if (hdr.format != "f64le") throw DataError(path + ": unsupported format '" + hdr.format + "'");
    std::size_t expected;
    try {
        expected = param_count(hdr.cfg);
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }
    if (hdr.param_count != expected)
        throw DataError(path + ": param_count " + std::to_string(hdr.param_count) +
                        " does not match the configuration (expected " +
                        std::to_string(expected) + ")");
    return hdr;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params) {
    ordered_json hdr;
    hdr["h"] = params.cfg.h;
    hdr["L"] = params.cfg.L;
    hdr["k"] = params.cfg.k;
    hdr["mlp_layers"] = params.cfg.mlp_layers;
    hdr["param_count"] = params.data.size();
    hdr["format"] = "f64le";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << hdr.dump() << '\n';
    std::vector<char> payload(params.data.size() * 8);
    for (std::size_t i = 0; i < params.data.size(); ++i) {
        const std::uint64_t bits = to_le_bits(params.data[i]);
        std::memcpy(payload.data() + i * 8, &bits, 8);
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw DataError("write to '" + path + "' failed");
}

CheckpointHeader read_checkpoint_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty checkpoint");
    return parse_header(line, path);
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty checkpoint");
    const CheckpointHeader hdr = parse_header(line, path);

    ModelParams params(hdr.cfg);
    std::vector<char> payload(hdr.param_count * 8);
    in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size())
        throw DataError(path + ": truncated parameter payload");
    if (in.peek() != std::char_traits<char>::eof())
        throw DataError(path + ": trailing bytes after parameter payload");
    for (std::size_t i = 0; i < hdr.param_count; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, payload.data() + i * 8, 8);
        params.data[i] = from_le_bits(bits);
    }
    return params;
}

}  // namespace pcgcn
