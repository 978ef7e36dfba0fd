#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nfkit/geometry.hpp"

namespace nfkit {

using cplx = std::complex<double>;

enum class ChannelModelKind { USW, NUSW, GNC };

std::string to_string(ChannelModelKind kind);
// Accepts usw / nusw / gnc in any case; ParameterError otherwise.
ChannelModelKind parse_model(std::string_view name);

// Gain of an element toward a point. Must be pure, finite and non-negative.
using GainFunction = std::function<double(const Position3& point, const Position3& element)>;

struct ChannelModel {
    ChannelModelKind kind = ChannelModelKind::NUSW;
    // GNC only. Empty callbacks mean a constant gain of one (isotropic elements).
    GainFunction g1;
    GainFunction g2;

    static ChannelModel usw() { return {ChannelModelKind::USW, {}, {}}; }
    static ChannelModel nusw() { return {ChannelModelKind::NUSW, {}, {}}; }
    static ChannelModel gnc(GainFunction g1 = {}, GainFunction g2 = {})
    {
        return {ChannelModelKind::GNC, std::move(g1), std::move(g2)};
    }
    static ChannelModel of(ChannelModelKind kind) { return {kind, {}, {}}; }
};

// Phase-only weights, |w_n| = 1 within 1e-12.
class Beamformer {
public:
    Beamformer() = default;
    explicit Beamformer(std::vector<cplx> weights);
    static Beamformer from_phases(std::span<const double> radians);

    std::size_t size() const { return weights_.size(); }
    std::span<const cplx> weights() const { return weights_; }
    std::vector<double> phases() const; // radians in (-pi, pi]

private:
    std::vector<cplx> weights_;
};

struct ChannelVector {
    std::vector<cplx> entries;
    ChannelModel model;
    SphericalPoint point;
};

// h_n for every element. SingularityError when the point sits on an element.
ChannelVector channel_vector(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point);

// y = sum h_n w_n. The span overload accepts arbitrary complex weights.
cplx received_signal(const ChannelVector& channel, std::span<const cplx> weights);
cplx received_signal(const ChannelVector& channel, const Beamformer& beamformer);

// A(theta, phi) = sqrt(G1 G2 / 4pi) at the reference element.
double amplitude_prefactor(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point);

// AF with |y| = A (1/r) |AF|.
cplx array_factor(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point,
                  std::span<const cplx> weights);
cplx array_factor(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point,
                  const Beamformer& beamformer);

// Evaluates y along the ray origin + t*dir (t >= 0) for a fixed weight vector.
// Caches the per-element geometry so each call costs one pass over the elements.
class RayEvaluator {
public:
    RayEvaluator(ChannelModel model, const ArrayGeometry& geometry, const Position3& origin, const Position3& dir,
                 std::span<const cplx> weights);

    // Radial cut through the array origin at (theta, phi).
    static RayEvaluator radial(ChannelModel model, const ArrayGeometry& geometry, double theta, double phi,
                               std::span<const cplx> weights);

    cplx signal(double t) const;
    double magnitude(double t) const { return std::abs(signal(t)); }
    Position3 point(double t) const { return origin_ + t * dir_; }

private:
    ChannelModel model_;
    double wavelength_;
    Position3 origin_;
    Position3 dir_;
    std::vector<double> c_; // dir . (origin - s_n)
    std::vector<double> e_; // |origin - s_n|^2
    std::vector<cplx> weights_;
    std::vector<Position3> elements_; // kept only when gain callbacks need them
};

} // namespace nfkit
