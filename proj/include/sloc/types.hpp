#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sloc {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, Index>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid scalar arguments (radius, kappa, lambda, grid sizes).
struct DomainError : Error {
  using Error::Error;
};
// Malformed or non-Hermitian hopping data.
struct ModelError : Error {
  using Error::Error;
};
// Hamiltonian has no spectral gap at zero.
struct NotInsulatorError : Error {
  using Error::Error;
};
// A numerical resolution limit was hit (truncation range, grid, padding).
struct ResolutionError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
struct BasisMismatchError : Error {
  using Error::Error;
};
struct NotHermitianError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace sloc
