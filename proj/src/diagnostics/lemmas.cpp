#include "adago/diagnostics/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adago/data/rng.hpp"
#include "adago/errors.hpp"
#include "adago/linalg/norms.hpp"

namespace adago::diagnostics {

BoundCheck log_sum_bound_check(std::span<const double> a) {
    if (a.empty()) throw InvalidInput("log_sum_bound_check: empty sequence");
    if (!(a[0] > 0.0)) throw InvalidInput("log_sum_bound_check: a_1 must be positive");
    BoundCheck c;
    double s = 0.0;
    for (double x : a) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("log_sum_bound_check: terms must be finite and nonnegative");
        s += x;
        c.lhs += x / s;
    }
    c.rhs = std::log(s / a[0]) + 1.0;
    c.holds = c.lhs <= c.rhs + 1e-12;
    return c;
}

double block_spectral_norm(std::span<const Matrix> blocks) {
    double best = 0.0;
    for (const auto& b : blocks)
        if (!b.is_zero()) best = std::max(best, linalg::spectral_norm(b));
    return best;
}

double block_nuclear_norm(std::span<const Matrix> blocks) {
    double sum = 0.0;
    for (const auto& b : blocks) sum += linalg::nuclear_norm(b);
    return sum;
}

double block_frobenius_norm(std::span<const Matrix> blocks) {
    double sq = 0.0;
    for (const auto& b : blocks) sq += linalg::inner(b, b);
    return std::sqrt(sq);
}

namespace {

std::vector<Matrix> shifted(std::span<const Matrix> base, std::span<const Matrix> dir, double step) {
    std::vector<Matrix> out(base.begin(), base.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i].add_scaled(dir[i], step);
    return out;
}

std::vector<Matrix> gradient_at(const models::ModelSpec& spec, models::ParamSet& scratch,
                                const std::vector<Matrix>& values, const models::Batch& batch, double* loss) {
    scratch.set_values(values);
    const double l = models::loss_and_grad(spec, scratch, batch);
    if (loss) *loss = l;
    return scratch.grads();
}

} // namespace

BoundCheck descent_lemma_check(const models::ModelSpec& spec, const models::ParamSet& params,
                               const models::Batch& batch, std::span<const Matrix> direction, double step,
                               double lipschitz, Geometry geometry, double tolerance) {
    if (direction.size() != params.size()) throw InvalidInput("descent_lemma_check: direction/parameter mismatch");
    models::ParamSet scratch = params;
    const auto theta = params.values();
    double loss = 0.0;
    const auto grad = gradient_at(spec, scratch, theta, batch, &loss);

    double slope = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) slope += linalg::inner(grad[i], direction[i]);
    const double dist = geometry == Geometry::spectral ? block_spectral_norm(direction) : block_frobenius_norm(direction);

    BoundCheck c;
    c.lhs = models::loss_only(spec, [&] {
        scratch.set_values(shifted(theta, direction, step));
        return scratch;
    }(), batch);
    c.rhs = loss + step * slope + 0.5 * lipschitz * step * step * dist * dist;
    c.holds = c.lhs <= c.rhs + tolerance * std::max(1.0, std::abs(loss));
    return c;
}

std::vector<Matrix> random_direction(std::span<const Matrix> like, std::uint64_t seed, std::uint64_t substream) {
    data::CounterRng rng(seed, data::Stream::probe, substream);
    std::normal_distribution<double> normal;
    std::vector<Matrix> out;
    out.reserve(like.size());
    for (const auto& m : like) {
        Matrix z(m.rows(), m.cols());
        for (double& x : z.data()) x = normal(rng);
        out.push_back(std::move(z));
    }
    const double s = block_spectral_norm(out);
    for (auto& z : out) z *= 1.0 / s;
    return out;
}

double estimate_smoothness(const models::ModelSpec& spec, const models::ParamSet& params,
                           const models::Batch& batch, const SmoothnessProbe& probe) {
    if (probe.pairs == 0 || !(probe.radius > 0.0)) throw InvalidInput("estimate_smoothness: need pairs and a positive radius");
    models::ParamSet scratch = params;
    const auto center = params.values();
    data::CounterRng rng(probe.seed, data::Stream::probe, ~std::uint64_t{0});
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double best = 0.0;
    for (std::size_t i = 0; i < probe.pairs; ++i) {
        const auto z1 = random_direction(center, probe.seed, 2 * i);
        const auto z2 = random_direction(center, probe.seed, 2 * i + 1);
        const auto theta = shifted(center, z1, probe.radius * unit(rng));
        const double delta = probe.radius * (1.0 - unit(rng)); // (0, radius]
        const auto theta2 = shifted(theta, z2, delta);
        const auto g1 = gradient_at(spec, scratch, theta, batch, nullptr);
        auto g2 = gradient_at(spec, scratch, theta2, batch, nullptr);
        for (std::size_t k = 0; k < g2.size(); ++k) g2[k] -= g1[k];
        std::vector<Matrix> diff;
        for (std::size_t k = 0; k < theta.size(); ++k) diff.push_back(theta2[k] - theta[k]);
        const double denom = block_spectral_norm(diff);
        if (denom > 0.0) best = std::max(best, block_nuclear_norm(g2) / denom);
    }
    return best;
}

} // namespace adago::diagnostics
