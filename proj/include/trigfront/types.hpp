#pragma once

#include <complex>
#include <vector>

namespace trigfront {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

// closed rectangle in the λ-plane
struct ComplexBox {
  double re_min, re_max, im_min, im_max;

  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
  ComplexBox conj() const { return {re_min, re_max, -im_max, -im_min}; }
};

}  // namespace trigfront
