#pragma once

#include <complex>

#include <Eigen/Dense>

namespace tli {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Two-mode photon-number basis truncated at one photon per mode, ordered
// {|0,0>, |0,1>, |1,0>, |1,1>} where |n,m> has n photons in mode a and m in
// mode b. Every operator in the library is expressed on this 4x4 space; the
// |1,1> level is kept even though weak-light states have no support there,
// because the separability bound needs its matrix elements.
enum FockIndex : int {
  kFock00 = 0,
  kFock01 = 1,
  kFock10 = 2,
  kFock11 = 3,
};

inline constexpr int kFockDim = 4;

// Absolute eigenvalue tolerance for positive-semidefiniteness checks.
inline constexpr double kPsdTol = 1e-12;

}  // namespace tli
