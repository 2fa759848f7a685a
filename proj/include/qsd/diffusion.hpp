#pragma once

#include <stdexcept>
#include <vector>

#include "qsd/sde_system.hpp"

namespace qsd {

// Eigen-decomposition of a symmetric matrix (N <= 3) by cyclic Jacobi
// rotations. Eigenvalues ascending; eigenvector k in column k of vectors.
struct EigenSym {
    VecN values;
    MatNM vectors;
};
EigenSym eigen_symmetric(const MatNM& s);

// Raised when an eigenvalue sits in the ambiguous band [tol, 10 tol] relative
// to the spectral scale, so the rank of D cannot be called cleanly.
struct AmbiguousRankError : std::runtime_error {
    AmbiguousRankError(const std::string& msg, double eigenvalue)
        : std::runtime_error(msg), eigenvalue(eigenvalue) {}
    double eigenvalue;
};

// Orthonormal basis of the null space of a symmetric PSD matrix. tol is
// relative to the largest |eigenvalue|; a zero matrix returns the full basis.
std::vector<VecN> null_eigenvectors(const MatNM& d, double tol = 1e-10);

}  // namespace qsd
