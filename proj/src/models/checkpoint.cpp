#include "advids/models/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

#include "advids/bytes.hpp"

namespace advids::models {

namespace {

using nlohmann::json;

void need(std::istream& is, char* dst, std::size_t n, const std::string& what) {
    bytes::need<CheckpointError>(is, dst, n, what);
}

}  // namespace

void save_checkpoint(const Model& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError("cannot open '" + path + "' for writing");

    json header;
    header["kind"] = kind_name(model.kind);
    header["fields"] = model.config_fields;
    header["meta"] = {{"epochs", model.meta.epochs},
                      {"seed", model.meta.seed},
                      {"final_loss", model.meta.final_loss},
                      {"final_loss_aux", model.meta.final_loss_aux}};
    const std::string head = header.dump();

    os.write(kCheckpointMagic, 5);
    bytes::put_u16(os, kCheckpointVersion);
    bytes::put_u32(os, static_cast<std::uint32_t>(head.size()));
    os.write(head.data(), static_cast<std::streamsize>(head.size()));
    for (const LayerState& layer : model.layers)
        for (const Tensor& p : layer.params)
            for (double v : p.data) bytes::put_f64(os, v);
    if (!os) throw CheckpointError("write to '" + path + "' failed");
}

Model load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot open '" + path + "'");

    char magic[5];
    need(is, magic, 5, "magic");
    if (std::memcmp(magic, kCheckpointMagic, 5) != 0)
        throw CheckpointError("'" + path + "' is not a model checkpoint");
    const std::uint16_t version = bytes::get_u16<CheckpointError>(is, "version");
    if (version != kCheckpointVersion)
        throw CheckpointError("unsupported checkpoint version " +
                              std::to_string(version));

    const std::uint32_t head_len =
        bytes::get_u32<CheckpointError>(is, "header length");
    std::string head(head_len, '\0');
    need(is, head.data(), head_len, "header");
    json header;
    try {
        header = json::parse(head);
    } catch (const json::exception& e) {
        throw CheckpointError("bad checkpoint header: " + std::string(e.what()));
    }

    Model model;
    try {
        const ModelKind kind = kind_from_name(header.at("kind").get<std::string>());
        const auto fields = header.at("fields").get<std::vector<std::size_t>>();
        Rng rng(0);  // weights are overwritten below
        model = build_from_fields(kind, fields, rng);
        const json& meta = header.at("meta");
        model.meta.epochs = meta.at("epochs").get<std::uint64_t>();
        model.meta.seed = meta.at("seed").get<std::uint64_t>();
        model.meta.final_loss = meta.at("final_loss").get<double>();
        model.meta.final_loss_aux = meta.at("final_loss_aux").get<double>();
    } catch (const json::exception& e) {
        throw CheckpointError("bad checkpoint header: " + std::string(e.what()));
    }

    for (LayerState& layer : model.layers)
        for (Tensor& p : layer.params)
            for (double& v : p.data)
                v = bytes::get_f64<CheckpointError>(is, "params of " + layer.name);
    if (is.peek() != std::ifstream::traits_type::eof())
        throw CheckpointError("'" + path + "' has trailing bytes after parameters");
    return model;
}

Model load_checkpoint(const std::string& path, ModelKind expected) {
    Model model = load_checkpoint(path);
    if (model.kind != expected)
        throw CheckpointError("'" + path + "' holds a " + kind_name(model.kind) +
                              " checkpoint, expected " + kind_name(expected));
    return model;
}

}  // namespace advids::models
