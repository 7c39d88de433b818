#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace acmm {

// 50 decimal digits.  Expression templates are off so Eigen kernels see a
// plain value type.
using HighPrecision =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;

}  // namespace acmm
