#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ion2d {

using cdouble = std::complex<double>;

// Periodic square grid [0,L)^2, n points per side, row-major storage.
// Physical coordinates are centered: x(i) in [-L/2, L/2).
// Frequencies follow the FFT layout: xi(m) = 2*pi/L * (m <= n/2 ? m : m-n).
struct Grid {
    int n = 0;
    double length = 0.0;

    Grid() = default;
    Grid(int n_, double length_) : n(n_), length(length_) {
        if (n <= 0 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a positive power of two");
        if (length <= 0.0)
            throw std::invalid_argument("Grid: length must be positive");
    }

    std::size_t size() const { return std::size_t(n) * std::size_t(n); }
    double spacing() const { return length / n; }
    double cell_area() const { return spacing() * spacing(); }
    double dk() const { return 2.0 * M_PI / length; }
    double nyquist() const { return M_PI / spacing(); }

    // signed physical coordinate of index i along one axis
    double coord(int i) const {
        int m = (i <= n / 2) ? i : i - n;
        if (i == n / 2) m = -n / 2;  // convention: put the fold at -L/2
        return m * spacing();
    }
    // frequency of index m along one axis
    double freq(int m) const {
        int q = (m <= n / 2) ? m : m - n;
        if (m == n / 2) q = -n / 2;
        return q * dk();
    }

    std::size_t idx(int ix, int iy) const { return std::size_t(ix) * n + iy; }

    bool operator==(const Grid& o) const { return n == o.n && length == o.length; }
};

}  // namespace ion2d
