#include "ion2d/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace ion2d {
namespace fft {
namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// One plan pair per grid size; FFTW_UNALIGNED so plans work on any
// std::vector storage via fftw_execute_dft.
PlanPair& plans_for(int n) {
    static std::map<int, PlanPair> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<cdouble> scratch(std::size_t(n) * n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, pp).first->second;
}

}  // namespace

void forward(const Grid& g, const cdouble* in, cdouble* out) {
    auto& pp = plans_for(g.n);
    if (in != out) std::copy(in, in + g.size(), out);
    auto* p = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(pp.fwd, p, p);
    const double w = g.cell_area();
    for (std::size_t i = 0; i < g.size(); ++i) out[i] *= w;
}

void inverse(const Grid& g, const cdouble* in, cdouble* out) {
    auto& pp = plans_for(g.n);
    if (in != out) std::copy(in, in + g.size(), out);
    auto* p = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(pp.bwd, p, p);
    const double w = 1.0 / (g.length * g.length);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] *= w;
}

void forward(const Grid& g, std::vector<cdouble>& v) { forward(g, v.data(), v.data()); }
void inverse(const Grid& g, std::vector<cdouble>& v) { inverse(g, v.data(), v.data()); }

}  // namespace fft
}  // namespace ion2d
