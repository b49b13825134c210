#pragma once

#include "ion2d/grid.hpp"

#include <vector>

namespace ion2d {

// Thin cached wrapper over FFTW c2c transforms.
//
// Conventions (2D, torus of side L, h = L/n, dk = 2*pi/L):
//   forward:  fh(xi) = h^2 * sum_x f(x) e^{-i x.xi}        ~ int f e^{-ix.xi} dx
//   inverse:  f(x)  = dk^2/(2pi)^2 * sum_xi fh(xi) e^{+i x.xi}
// With these weights Parseval holds exactly:
//   sum |f|^2 h^2 == sum |fh|^2 dk^2 / (2pi)^2.
namespace fft {

// in and out may alias; both must hold n*n complex values
void forward(const Grid& g, const cdouble* in, cdouble* out);
void inverse(const Grid& g, const cdouble* in, cdouble* out);

void forward(const Grid& g, std::vector<cdouble>& v);
void inverse(const Grid& g, std::vector<cdouble>& v);

}  // namespace fft
}  // namespace ion2d
