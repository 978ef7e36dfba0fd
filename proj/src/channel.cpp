#include "nfkit/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nfkit/constants.hpp"
#include "nfkit/errors.hpp"

namespace nfkit {

namespace {

const double kSqrt4Pi = std::sqrt(4.0 * kPi);

// Below this fraction of a wavelength an element and the point are treated as coincident.
constexpr double kSingularFraction = 1e-12;

void check_gain(double g)
{
    if (!std::isfinite(g) || g < 0.0)
        throw ParameterError("gain callback returned a negative or non-finite value");
}

// sqrt(G1 G2) for one element, exactly 1 when both callbacks are unset.
double element_gain(const ChannelModel& model, const Position3& point, const Position3& element)
{
    if (model.kind != ChannelModelKind::GNC)
        return 1.0;
    const double g1 = model.g1 ? model.g1(point, element) : 1.0;
    const double g2 = model.g2 ? model.g2(point, element) : 1.0;
    check_gain(g1);
    check_gain(g2);
    return std::sqrt(g1 * g2);
}

bool needs_positions(const ChannelModel& model)
{
    return model.kind == ChannelModelKind::GNC && (model.g1 || model.g2);
}

void check_distance(double rn, double wavelength)
{
    if (!(rn > kSingularFraction * wavelength))
        throw SingularityError("observation point coincides with an array element");
}

} // namespace

std::string to_string(ChannelModelKind kind)
{
    switch (kind) {
    case ChannelModelKind::USW:
        return "usw";
    case ChannelModelKind::NUSW:
        return "nusw";
    case ChannelModelKind::GNC:
        return "gnc";
    }
    return "?";
}

ChannelModelKind parse_model(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "usw")
        return ChannelModelKind::USW;
    if (s == "nusw")
        return ChannelModelKind::NUSW;
    if (s == "gnc")
        return ChannelModelKind::GNC;
    throw ParameterError("unknown channel model '" + std::string(name) + "'");
}

Beamformer::Beamformer(std::vector<cplx> weights) : weights_(std::move(weights))
{
    for (const cplx& w : weights_)
        if (!(std::abs(std::abs(w) - 1.0) <= 1e-12))
            throw ParameterError("beamformer weights must have unit modulus");
}

Beamformer Beamformer::from_phases(std::span<const double> radians)
{
    std::vector<cplx> w;
    w.reserve(radians.size());
    for (double beta : radians)
        w.push_back(std::polar(1.0, beta));
    return Beamformer(std::move(w));
}

std::vector<double> Beamformer::phases() const
{
    std::vector<double> out;
    out.reserve(weights_.size());
    for (const cplx& w : weights_)
        out.push_back(std::arg(w));
    return out;
}

ChannelVector channel_vector(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point)
{
    const std::vector<double> rn = element_distances(geometry, point);
    const double lambda = geometry.wavelength();
    const Position3 p = to_cartesian(point);

    ChannelVector out{{}, model, point};
    out.entries.reserve(rn.size());
    for (std::size_t n = 0; n < rn.size(); ++n) {
        check_distance(rn[n], lambda);
        double amp;
        if (model.kind == ChannelModelKind::USW) {
            amp = 1.0 / (kSqrt4Pi * point.r);
        } else {
            const double g = element_gain(model, p, geometry.position(n));
            amp = g / (kSqrt4Pi * rn[n]);
        }
        out.entries.push_back(std::polar(amp, -kTwoPi * rn[n] / lambda));
    }
    return out;
}

cplx received_signal(const ChannelVector& channel, std::span<const cplx> weights)
{
    if (weights.size() != channel.entries.size())
        throw ParameterError("beamformer length does not match the channel");
    cplx y = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n)
        y += channel.entries[n] * weights[n];
    return y;
}

cplx received_signal(const ChannelVector& channel, const Beamformer& beamformer)
{
    return received_signal(channel, beamformer.weights());
}

double amplitude_prefactor(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point)
{
    const double g = element_gain(model, to_cartesian(point), geometry.position(geometry.reference_index()));
    return g / kSqrt4Pi;
}

cplx array_factor(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point,
                  std::span<const cplx> weights)
{
    if (weights.size() != geometry.size())
        throw ParameterError("beamformer length does not match the array");
    if (!(point.r > 0.0))
        throw SingularityError("array factor undefined at r = 0");

    const std::vector<double> rn = element_distances(geometry, point);
    const double lambda = geometry.wavelength();
    const double r = point.r;
    const Position3 p = to_cartesian(point);

    double g_ref = 1.0;
    if (model.kind == ChannelModelKind::GNC) {
        g_ref = element_gain(model, p, geometry.position(geometry.reference_index()));
        if (!(g_ref > 0.0))
            throw ParameterError("reference element gain is zero; array factor undefined");
    }

    cplx af = 0.0;
    for (std::size_t n = 0; n < rn.size(); ++n) {
        check_distance(rn[n], lambda);
        double amp = 1.0;
        if (model.kind != ChannelModelKind::USW)
            amp = element_gain(model, p, geometry.position(n)) / g_ref * (r / rn[n]);
        af += std::polar(amp, -kTwoPi * (rn[n] - r) / lambda) * weights[n];
    }
    return af;
}

cplx array_factor(const ChannelModel& model, const ArrayGeometry& geometry, const SphericalPoint& point,
                  const Beamformer& beamformer)
{
    return array_factor(model, geometry, point, beamformer.weights());
}

RayEvaluator::RayEvaluator(ChannelModel model, const ArrayGeometry& geometry, const Position3& origin,
                           const Position3& dir, std::span<const cplx> weights)
    : model_(std::move(model)), wavelength_(geometry.wavelength()), origin_(origin), dir_(dir),
      weights_(weights.begin(), weights.end())
{
    if (weights.size() != geometry.size())
        throw ParameterError("beamformer length does not match the array");
    const double len = norm(dir);
    if (!(len > 0.0))
        throw ParameterError("ray direction must be non-zero");
    dir_ = (1.0 / len) * dir;

    c_.reserve(geometry.size());
    e_.reserve(geometry.size());
    for (const Position3& s : geometry.positions()) {
        const Position3 d = origin_ - s;
        c_.push_back(dot(dir_, d));
        e_.push_back(dot(d, d));
    }
    if (needs_positions(model_))
        elements_.assign(geometry.positions().begin(), geometry.positions().end());
}

RayEvaluator RayEvaluator::radial(ChannelModel model, const ArrayGeometry& geometry, double theta, double phi,
                                  std::span<const cplx> weights)
{
    return RayEvaluator(std::move(model), geometry, Position3{}, direction(theta, phi), weights);
}

cplx RayEvaluator::signal(double t) const
{
    const bool usw = model_.kind == ChannelModelKind::USW;
    const bool gains = !elements_.empty();
    const Position3 p = point(t);
    double usw_amp = 0.0;
    if (usw) {
        const double r = norm(p);
        if (!(r > 0.0))
            throw SingularityError("uniform spherical model undefined at r = 0");
        usw_amp = 1.0 / (kSqrt4Pi * r);
    }

    cplx y = 0.0;
    for (std::size_t n = 0; n < c_.size(); ++n) {
        const double rn = std::sqrt(std::max(t * t + 2.0 * t * c_[n] + e_[n], 0.0));
        check_distance(rn, wavelength_);
        double amp;
        if (usw)
            amp = usw_amp;
        else
            amp = (gains ? element_gain(model_, p, elements_[n]) : 1.0) / (kSqrt4Pi * rn);
        y += std::polar(amp, -kTwoPi * rn / wavelength_) * weights_[n];
    }
    return y;
}

} // namespace nfkit
