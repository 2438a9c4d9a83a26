#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Basic value types shared by every module. Index 0 is always the T axis;
// the remaining components are the spatial block.

namespace finsleroid {

// Point of the event space: (T, R^1 .. R^{N-1}).
struct EventVector {
    double t = 0.0;
    std::vector<double> x;
};

// Dual point: (T_hat, R_1 .. R_{N-1}) with lower spatial indices.
struct CoVector {
    double t = 0.0;
    std::vector<double> xi;
};

// Image of the spherical map: same layout as EventVector.
struct SphereImage {
    double t = 0.0;
    std::vector<double> x;
};

// Dense square matrix, row-major flat storage. Used for metric tensors,
// Jacobians, and their products; symmetry is a property of the values,
// not the storage.
struct SymMatrix {
    int n = 0;
    std::vector<double> a;

    SymMatrix() = default;
    explicit SymMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

    double& at(int p, int q) { return a[static_cast<std::size_t>(p) * n + q]; }
    double at(int p, int q) const { return a[static_cast<std::size_t>(p) * n + q]; }

    static SymMatrix identity(int size) {
        SymMatrix m(size);
        for (int i = 0; i < size; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

// Implicit first and second derivatives of a profile curve T(rho).
struct ProfileDerivs {
    double first;   // dT/drho along the unit profile
    double second;  // d2T/drho2
};

inline double sq(double v) { return v * v; }

inline double spatial_norm_sq(const std::vector<double>& x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return s;
}

inline double spatial_norm(const std::vector<double>& x) {
    return std::sqrt(spatial_norm_sq(x));
}

// rho = |R|, the Euclidean length of the spatial block.
inline double rho_of(const EventVector& v) { return spatial_norm(v.x); }
inline double rho_of(const CoVector& c) { return spatial_norm(c.xi); }
inline double rho_of(const SphereImage& s) { return spatial_norm(s.x); }

inline bool is_zero_vector(const EventVector& v) {
    return v.t == 0.0 && spatial_norm_sq(v.x) == 0.0;
}
inline bool is_zero_vector(const CoVector& c) {
    return c.t == 0.0 && spatial_norm_sq(c.xi) == 0.0;
}

inline void require_dim(int dim, std::size_t spatial_size, const char* where) {
    if (static_cast<std::size_t>(dim) != spatial_size + 1)
        throw std::domain_error(std::string(where) + ": point has " +
                                std::to_string(spatial_size + 1) +
                                " components, parameters expect " + std::to_string(dim));
}

inline EventVector scaled(const EventVector& v, double b) {
    EventVector r;
    r.t = b * v.t;
    r.x.reserve(v.x.size());
    for (double c : v.x) r.x.push_back(b * c);
    return r;
}

inline CoVector scaled(const CoVector& c, double b) {
    CoVector r;
    r.t = b * c.t;
    r.xi.reserve(c.xi.size());
    for (double v : c.xi) r.xi.push_back(b * v);
    return r;
}

inline SphereImage scaled(const SphereImage& s, double b) {
    SphereImage r;
    r.t = b * s.t;
    r.x.reserve(s.x.size());
    for (double c : s.x) r.x.push_back(b * c);
    return r;
}

} // namespace finsleroid
