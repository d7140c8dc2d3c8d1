#include "topofield/model.hpp"

#include "topofield/error.hpp"
#include "topofield/synthesis.hpp"

namespace topofield {

FieldModel::FieldModel(ModelConfig config) : config_(std::move(config)), kernel_(config_.kernel) {
    require(config_.spacing > 0.0, ErrorKind::invalid_argument, "spacing must be positive");
    if (config_.kind == ModelKind::gaussian) {
        require(config_.kernel.normalization == Normalization::L2, ErrorKind::mode_mismatch,
                "the Gaussian model needs an L2-normalized kernel");
    } else {
        require(config_.kind == ModelKind::shot_noise, ErrorKind::invalid_argument,
                "model must be gaussian or shot-noise");
        require(config_.kernel.normalization == Normalization::L1, ErrorKind::mode_mismatch,
                "the shot-noise model needs an L1-normalized kernel");
        require(kernel_.compact(), ErrorKind::unsupported_operation,
                "the shot-noise model needs a compactly supported kernel");
        require(config_.shot.intensity >= 0.0, ErrorKind::invalid_argument,
                "intensity must be non-negative");
        config_.shot.marks.validate();
    }
}

WhiteNoiseGrid FieldModel::noise_for(const Box& window, const RngStream& replicate) const {
    return sample_noise_for(kernel_, window, config_.spacing, replicate.child(stream_tag::noise));
}

GridField FieldModel::field_from_noise(const WhiteNoiseGrid& noise, const Box& window) const {
    GridField f = synthesize_gaussian(kernel_, noise, window);
    return f;
}

Realization FieldModel::realize(const Box& window, const RngStream& replicate) const {
    Realization r;
    if (gaussian()) {
        r.noise = noise_for(window, replicate);
        r.field = field_from_noise(r.noise, window);
        r.field.provenance.stream_path = replicate.child(stream_tag::noise).path();
    } else {
        const RngStream s = replicate.child(stream_tag::points);
        r.points = sample_poisson_points(window, config_.shot.intensity, config_.shot.marks, s);
        r.field = synthesize_shot_noise(kernel_, r.points, vertex_grid(window, config_.spacing));
        r.field.provenance.stream_path = s.path();
    }
    return r;
}

std::vector<GridField> FieldModel::gradient(const Realization& r, const Box& window) const {
    require(kernel_.smooth(), ErrorKind::unsupported_operation,
            "critical points need a smooth kernel; the uniform kernel is discontinuous");
    std::vector<GridField> g;
    for (int a = 0; a < dim(); ++a) {
        MultiIndex alpha{};
        alpha[a] = 1;
        if (gaussian())
            g.push_back(synthesize_gaussian(kernel_, r.noise, window, ConvolutionMethod::automatic, alpha));
        else
            g.push_back(synthesize_shot_noise(kernel_, r.points, vertex_grid(window, config_.spacing), alpha));
    }
    return g;
}

std::uint64_t FieldModel::estimated_bytes(const Box& window) const {
    const GridGeometry v = vertex_grid(window, config_.spacing);
    const auto vertices = static_cast<std::uint64_t>(v.size());
    std::uint64_t noise = 0;
    if (gaussian()) noise = static_cast<std::uint64_t>(noise_geometry_for(kernel_, window, config_.spacing).size());
    // noise and field doubles, plus rank, order, touch level and labels per vertex
    return 8 * noise + vertices * (8 + 8 + 4 + 8 + 8 + 4);
}

}  // namespace topofield
