#pragma once

#include <cstdint>
#include <vector>

#include "topofield/grid.hpp"
#include "topofield/kernels.hpp"
#include "topofield/noise.hpp"
#include "topofield/rng.hpp"

namespace topofield {

struct ShotNoiseParams {
    double intensity = 1.0;
    MarkDistribution marks = MarkDistribution::point(1.0);
};

struct ModelConfig {
    ModelKind kind = ModelKind::gaussian;
    KernelSpec kernel;
    double spacing = 0.25;
    ShotNoiseParams shot;
};

struct Realization {
    GridField field;
    WhiteNoiseGrid noise;      // Gaussian model
    PointConfiguration points; // shot-noise model
};

/// One of the two field models with its kernel, realized on windows.
/// Replicate streams are split by purpose: noise (Gaussian) or points.
class FieldModel {
public:
    explicit FieldModel(ModelConfig config);

    const ModelConfig& config() const noexcept { return config_; }
    const Kernel& kernel() const noexcept { return kernel_; }
    double spacing() const noexcept { return config_.spacing; }
    int dim() const noexcept { return config_.kernel.dim; }
    bool gaussian() const noexcept { return config_.kind == ModelKind::gaussian; }

    Realization realize(const Box& window, const RngStream& replicate) const;
    WhiteNoiseGrid noise_for(const Box& window, const RngStream& replicate) const;
    GridField field_from_noise(const WhiteNoiseGrid& noise, const Box& window) const;

    /// ∂_a F for a = 0..d-1 on the window grid. Needs a smooth kernel.
    std::vector<GridField> gradient(const Realization& r, const Box& window) const;

    /// Peak bytes for one realization plus its filtration.
    std::uint64_t estimated_bytes(const Box& window) const;

private:
    ModelConfig config_;
    Kernel kernel_;
};

}  // namespace topofield
