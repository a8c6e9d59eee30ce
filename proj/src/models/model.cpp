#include "advids/models/model.hpp"

namespace advids::models {

namespace {

using numerics::Conv1dSpec;
using numerics::LinearSpec;
using numerics::LogSoftmaxSpec;
using numerics::ReluSpec;
using numerics::SigmoidSpec;

void push_layer(Model& m, const numerics::LayerSpec& spec, const std::string& name,
                Rng& rng) {
    m.layers.push_back(numerics::make_layer(spec, name, rng));
}

void require_conv_trunk(std::size_t input_width, std::size_t kernel_size,
                        std::size_t padding) {
    if (input_width == 0) throw ConfigError("model input width must be positive");
    if (2 * padding + 1 != kernel_size)
        throw ConfigError("conv trunk requires length-preserving padding: kernel " +
                          std::to_string(kernel_size) + " with padding " +
                          std::to_string(padding));
}

// conv1 -> relu -> conv2 -> relu -> conv3 -> relu -> fc1 -> relu, shared by
// the classifier and the discriminator
template <typename TrunkConfig>
void build_trunk(Model& m, const TrunkConfig& c, Rng& rng) {
    require_conv_trunk(c.input_width, c.kernel_size, c.padding);
    push_layer(m, Conv1dSpec{1, c.conv1_channels, c.kernel_size, c.padding},
               "conv1", rng);
    push_layer(m, ReluSpec{}, "relu1", rng);
    push_layer(m, Conv1dSpec{c.conv1_channels, c.conv2_channels, c.kernel_size,
                             c.padding},
               "conv2", rng);
    push_layer(m, ReluSpec{}, "relu2", rng);
    push_layer(m, Conv1dSpec{c.conv2_channels, c.conv3_channels, c.kernel_size,
                             c.padding},
               "conv3", rng);
    push_layer(m, ReluSpec{}, "relu3", rng);
    push_layer(m, LinearSpec{c.input_width * c.conv3_channels, c.hidden_units},
               "fc1", rng);
    push_layer(m, ReluSpec{}, "relu4", rng);
}

}  // namespace

std::string kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Classifier: return "classifier";
        case ModelKind::Discriminator: return "discriminator";
        case ModelKind::Generator: return "generator";
    }
    throw UsageError("unknown model kind");
}

ModelKind kind_from_name(const std::string& name) {
    if (name == "classifier") return ModelKind::Classifier;
    if (name == "discriminator") return ModelKind::Discriminator;
    if (name == "generator") return ModelKind::Generator;
    throw CheckpointError("unknown model kind '" + name + "'");
}

Model build_classifier(const ClassifierConfig& c, Rng& rng) {
    if (c.num_classes == 0) throw ConfigError("classifier needs at least one class");
    Model m;
    m.kind = ModelKind::Classifier;
    m.input_width = c.input_width;
    m.output_width = c.num_classes;
    m.config_fields = {c.input_width,  c.conv1_channels, c.conv2_channels,
                       c.conv3_channels, c.kernel_size,  c.padding,
                       c.hidden_units, c.num_classes};
    build_trunk(m, c, rng);
    push_layer(m, LinearSpec{c.hidden_units, c.num_classes}, "out", rng);
    push_layer(m, LogSoftmaxSpec{}, "logsoftmax", rng);
    return m;
}

Model build_discriminator(const DiscriminatorConfig& c, Rng& rng) {
    Model m;
    m.kind = ModelKind::Discriminator;
    m.input_width = c.input_width;
    m.output_width = 1;
    m.config_fields = {c.input_width,  c.conv1_channels, c.conv2_channels,
                       c.conv3_channels, c.kernel_size,  c.padding,
                       c.hidden_units};
    build_trunk(m, c, rng);
    push_layer(m, LinearSpec{c.hidden_units, 1}, "out", rng);
    push_layer(m, SigmoidSpec{}, "sigmoid", rng);
    return m;
}

Model build_generator(const GeneratorConfig& c, Rng& rng) {
    if (c.noise_dim == 0 || c.hidden_units == 0 || c.output_width == 0)
        throw ConfigError("generator widths must be positive");
    Model m;
    m.kind = ModelKind::Generator;
    m.input_width = c.noise_dim;
    m.output_width = c.output_width;
    m.config_fields = {c.noise_dim, c.hidden_units, c.output_width};
    push_layer(m, LinearSpec{c.noise_dim, c.hidden_units}, "fc1", rng);
    push_layer(m, ReluSpec{}, "relu1", rng);
    push_layer(m, LinearSpec{c.hidden_units, c.hidden_units}, "fc2", rng);
    push_layer(m, ReluSpec{}, "relu2", rng);
    push_layer(m, LinearSpec{c.hidden_units, c.output_width}, "out", rng);
    push_layer(m, SigmoidSpec{}, "sigmoid", rng);
    return m;
}

Model build_from_fields(ModelKind kind, const std::vector<std::size_t>& f,
                        Rng& rng) {
    switch (kind) {
        case ModelKind::Classifier:
            if (f.size() != 8)
                throw CheckpointError("classifier header needs 8 fields, got " +
                                      std::to_string(f.size()));
            return build_classifier({f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7]},
                                    rng);
        case ModelKind::Discriminator:
            if (f.size() != 7)
                throw CheckpointError("discriminator header needs 7 fields, got " +
                                      std::to_string(f.size()));
            return build_discriminator({f[0], f[1], f[2], f[3], f[4], f[5], f[6]},
                                       rng);
        case ModelKind::Generator:
            if (f.size() != 3)
                throw CheckpointError("generator header needs 3 fields, got " +
                                      std::to_string(f.size()));
            return build_generator({f[0], f[1], f[2]}, rng);
    }
    throw UsageError("unknown model kind");
}

std::size_t param_count(const Model& model) {
    std::size_t n = 0;
    for (const LayerState& layer : model.layers) n += numerics::param_count(layer);
    return n;
}

void zero_grads(Model& model) {
    for (LayerState& layer : model.layers) numerics::zero_grads(layer);
}

Tensor model_forward(const Model& model, const Tensor& input,
                     std::vector<ForwardCache>* caches) {
    if (caches) {
        caches->clear();
        caches->resize(model.layers.size());
    }
    Tensor x = input;
    // 1-D feature vectors enter the conv trunk as a single channel
    if (model.kind != ModelKind::Generator && x.rank() == 1)
        x.shape = {1, x.numel()};
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        const LayerState& layer = model.layers[i];
        ForwardCache local;
        ForwardCache& cache = caches ? (*caches)[i] : local;
        // fc1 consumes the flattened conv stack
        if (std::holds_alternative<numerics::LinearSpec>(layer.spec) && x.rank() > 1)
            x.shape = {x.numel()};
        x = numerics::forward(layer, x, cache);
    }
    return x;
}

Tensor model_backward(Model& model, const std::vector<ForwardCache>& caches,
                      const Tensor& grad_output) {
    if (caches.size() != model.layers.size())
        throw UsageError("model_backward needs one cache per layer");
    Tensor g = grad_output;
    for (std::size_t i = model.layers.size(); i-- > 0;) {
        if (g.numel() != caches[i].output.numel())
            throw DimensionError("grad entering layer '" + model.layers[i].name +
                                 "' has " + std::to_string(g.numel()) +
                                 " elements, expected " +
                                 std::to_string(caches[i].output.numel()));
        // undo the flatten at the conv/linear boundary
        g.shape = caches[i].output.shape;
        g = numerics::backward(model.layers[i], caches[i], g);
    }
    return g;
}

Prediction predict(const Model& model, const Tensor& x) {
    if (model.kind != ModelKind::Classifier)
        throw UsageError("predict requires a classifier model");
    if (x.numel() != model.input_width)
        throw DimensionError("predict input has " + std::to_string(x.numel()) +
                             " features, model expects " +
                             std::to_string(model.input_width));
    Prediction p;
    p.log_probs = model_forward(model, x);
    p.label = 0;
    for (std::size_t i = 1; i < p.log_probs.numel(); ++i)
        if (p.log_probs.data[i] > p.log_probs.data[p.label]) p.label = i;
    return p;
}

}  // namespace advids::models
