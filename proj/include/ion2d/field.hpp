#pragma once

#include "ion2d/fft.hpp"
#include "ion2d/grid.hpp"

#include <functional>
#include <vector>

namespace ion2d {

// A function on the periodic grid carried in both physical and frequency
// representation. Either side may be invalid; it is recomputed on access.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const Grid& g)
        : grid_(g), phys_(g.size(), cdouble(0.0)), freq_(g.size(), cdouble(0.0)),
          phys_ok_(true), freq_ok_(true) {}

    static SpectralField from_phys(const Grid& g, std::vector<cdouble> data);
    static SpectralField from_freq(const Grid& g, std::vector<cdouble> data);

    const Grid& grid() const { return grid_; }

    // read access (transforms lazily if needed)
    const std::vector<cdouble>& phys() const;
    const std::vector<cdouble>& freq() const;

    // write access (invalidates the other representation)
    std::vector<cdouble>& mut_phys();
    std::vector<cdouble>& mut_freq();

    // apply m(xi) multiplier in frequency space
    void apply_multiplier(const std::function<double(double, double)>& m);
    // pointwise map in physical space
    void apply_pointwise(const std::function<cdouble(cdouble)>& f);

    double norm_l2() const;      // sqrt(int |f|^2 dx), via whichever side is valid
    double sup_abs() const;      // max_x |f(x)| over the grid
    cdouble mean() const;        // (1/L^2) int f dx

    SpectralField& operator*=(double c);
    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);

  private:
    Grid grid_;
    mutable std::vector<cdouble> phys_, freq_;
    mutable bool phys_ok_ = false, freq_ok_ = false;
};

// dealiased product helpers: evaluate on a zero-padded 2x grid, truncate back.
// Inputs/outputs are frequency-space vectors on g.
std::vector<cdouble> padded_product(const Grid& g, const std::vector<cdouble>& a_hat,
                                    const std::vector<cdouble>& b_hat);
// pointwise transcendental map with padding: out_hat = trunc FFT[ f(ifft(pad a_hat)) ]
std::vector<cdouble> padded_map(const Grid& g, const std::vector<cdouble>& a_hat,
                                const std::function<cdouble(cdouble)>& f);

}  // namespace ion2d
