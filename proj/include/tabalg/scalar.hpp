#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>

namespace tabalg {

/// Arbitrary-precision integer used for structure constants and coefficients.
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

using Index = int;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

template <typename Scalar>
bool is_integral_value(const Scalar& s) {
  if constexpr (std::numeric_limits<Scalar>::is_integer) {
    (void)s;
    return true;
  } else {
    using std::floor;
    return floor(s) == s;
  }
}

template <typename Scalar>
std::string to_string(const Scalar& s) {
  if constexpr (std::is_arithmetic_v<Scalar>) {
    return std::to_string(s);
  } else {
    return s.str();
  }
}

}  // namespace detail
}  // namespace tabalg
