#pragma once

#include "finsleroid/numerics.hpp"
#include "finsleroid/pd_metric.hpp"
#include "finsleroid/spherical_map.hpp"

// Metric tensor of K with two interchangeable backends: the exact pullback
// through the spherical map, and a numeric Hessian of K^2/2 kept as an
// independent cross-check.

namespace finsleroid {

enum class TensorBackend { pullback, hessian };

inline SymMatrix metric_tensor(const PdParams& p, const EventVector& v,
                               TensorBackend backend = TensorBackend::pullback) {
    require_dim(p.dim, v.x.size(), "metric_tensor");
    if (is_zero_vector(v))
        throw std::domain_error("metric_tensor: undefined at the zero vector");
    if (backend == TensorBackend::pullback) return pullback_metric(p, v);
    ScalarField half_k2 = [&p](const EventVector& u) { return 0.5 * sq(metric_k(p, u)); };
    return hessian_fd(half_k2, v);
}

} // namespace finsleroid
