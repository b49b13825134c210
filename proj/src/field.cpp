#include "ion2d/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ion2d {

SpectralField SpectralField::from_phys(const Grid& g, std::vector<cdouble> data) {
    if (data.size() != g.size()) throw std::invalid_argument("from_phys: size mismatch");
    SpectralField f;
    f.grid_ = g;
    f.phys_ = std::move(data);
    f.freq_.assign(g.size(), cdouble(0.0));
    f.phys_ok_ = true;
    f.freq_ok_ = false;
    return f;
}

SpectralField SpectralField::from_freq(const Grid& g, std::vector<cdouble> data) {
    if (data.size() != g.size()) throw std::invalid_argument("from_freq: size mismatch");
    SpectralField f;
    f.grid_ = g;
    f.freq_ = std::move(data);
    f.phys_.assign(g.size(), cdouble(0.0));
    f.freq_ok_ = true;
    f.phys_ok_ = false;
    return f;
}

const std::vector<cdouble>& SpectralField::phys() const {
    if (!phys_ok_) {
        fft::inverse(grid_, freq_.data(), phys_.data());
        phys_ok_ = true;
    }
    return phys_;
}

const std::vector<cdouble>& SpectralField::freq() const {
    if (!freq_ok_) {
        fft::forward(grid_, phys_.data(), freq_.data());
        freq_ok_ = true;
    }
    return freq_;
}

std::vector<cdouble>& SpectralField::mut_phys() {
    phys();  // materialize
    freq_ok_ = false;
    return phys_;
}

std::vector<cdouble>& SpectralField::mut_freq() {
    freq();
    phys_ok_ = false;
    return freq_;
}

void SpectralField::apply_multiplier(const std::function<double(double, double)>& m) {
    auto& fh = mut_freq();
    for (int ix = 0; ix < grid_.n; ++ix) {
        const double kx = grid_.freq(ix);
        for (int iy = 0; iy < grid_.n; ++iy)
            fh[grid_.idx(ix, iy)] *= m(kx, grid_.freq(iy));
    }
}

void SpectralField::apply_pointwise(const std::function<cdouble(cdouble)>& f) {
    auto& p = mut_phys();
    for (auto& v : p) v = f(v);
}

double SpectralField::norm_l2() const {
    double s = 0.0;
    if (phys_ok_) {
        for (const auto& v : phys_) s += std::norm(v);
        return std::sqrt(s * grid_.cell_area());
    }
    for (const auto& v : freq()) s += std::norm(v);
    const double w = grid_.dk() / (2.0 * M_PI);
    return std::sqrt(s) * w;
}

double SpectralField::sup_abs() const {
    double s = 0.0;
    for (const auto& v : phys()) s = std::max(s, std::abs(v));
    return s;
}

cdouble SpectralField::mean() const {
    cdouble s(0.0);
    for (const auto& v : phys()) s += v;
    return s / double(grid_.size());
}

SpectralField& SpectralField::operator*=(double c) {
    if (phys_ok_)
        for (auto& v : phys_) v *= c;
    if (freq_ok_)
        for (auto& v : freq_) v *= c;
    return *this;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (!(grid_ == o.grid())) throw std::invalid_argument("field +=: grid mismatch");
    auto& fh = mut_freq();
    const auto& oh = o.freq();
    for (std::size_t i = 0; i < fh.size(); ++i) fh[i] += oh[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (!(grid_ == o.grid())) throw std::invalid_argument("field -=: grid mismatch");
    auto& fh = mut_freq();
    const auto& oh = o.freq();
    for (std::size_t i = 0; i < fh.size(); ++i) fh[i] -= oh[i];
    return *this;
}

namespace {

// scatter an n-grid spectrum into the centered block of a 2n-grid spectrum
void pad_spectrum(const Grid& g, const std::vector<cdouble>& in, const Grid& gp,
                  std::vector<cdouble>& out) {
    std::fill(out.begin(), out.end(), cdouble(0.0));
    const int n = g.n;
    for (int ix = 0; ix < n; ++ix) {
        const int jx = (ix <= n / 2) ? ix : ix + gp.n - n;
        for (int iy = 0; iy < n; ++iy) {
            const int jy = (iy <= n / 2) ? iy : iy + gp.n - n;
            out[gp.idx(jx, jy)] = in[g.idx(ix, iy)];
        }
    }
}

void truncate_spectrum(const Grid& gp, const std::vector<cdouble>& in, const Grid& g,
                       std::vector<cdouble>& out) {
    const int n = g.n;
    for (int ix = 0; ix < n; ++ix) {
        const int jx = (ix <= n / 2) ? ix : ix + gp.n - n;
        for (int iy = 0; iy < n; ++iy) {
            const int jy = (iy <= n / 2) ? iy : iy + gp.n - n;
            out[g.idx(ix, iy)] = in[gp.idx(jx, jy)];
        }
    }
}

}  // namespace

std::vector<cdouble> padded_product(const Grid& g, const std::vector<cdouble>& a_hat,
                                    const std::vector<cdouble>& b_hat) {
    Grid gp(2 * g.n, g.length);
    std::vector<cdouble> A(gp.size()), B(gp.size());
    pad_spectrum(g, a_hat, gp, A);
    pad_spectrum(g, b_hat, gp, B);
    fft::inverse(gp, A);
    fft::inverse(gp, B);
    for (std::size_t i = 0; i < A.size(); ++i) A[i] *= B[i];
    fft::forward(gp, A);
    std::vector<cdouble> out(g.size());
    truncate_spectrum(gp, A, g, out);
    return out;
}

std::vector<cdouble> padded_map(const Grid& g, const std::vector<cdouble>& a_hat,
                                const std::function<cdouble(cdouble)>& f) {
    Grid gp(2 * g.n, g.length);
    std::vector<cdouble> A(gp.size());
    pad_spectrum(g, a_hat, gp, A);
    fft::inverse(gp, A);
    for (auto& v : A) v = f(v);
    fft::forward(gp, A);
    std::vector<cdouble> out(g.size());
    truncate_spectrum(gp, A, g, out);
    return out;
}

}  // namespace ion2d
