#pragma once
// Hilbert-Schmidt geometry of matrix subspaces: inner products, orthonormal
// bases, complements inside a subspace, Schmidt alignment, tensor products.

#include "ral/core.hpp"

#include <cstdint>
#include <vector>

namespace ral::matspace {

struct SubspaceBasis {
  Index rows = 0;
  Index cols = 0;
  std::vector<Matrix> basis;  // HS-orthonormal, all rows x cols

  Index dim() const { return static_cast<Index>(basis.size()); }
};

struct SchmidtForm {
  Matrix u;          // rows x rows unitary
  Matrix v;          // cols x cols unitary
  RealVector sigma;  // non-increasing, non-negative
};

struct Aligned {
  SchmidtForm form;
  SubspaceBasis k;  // input basis rotated elementwise to u * b * v
  Matrix x;         // diag(sigma), zero-padded to rows x cols
};

// Tr(a b*); linear in a, antilinear in b.
Complex hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);

// Kronecker product in the lexicographic (row j,k) x (col l,m) layout.
Matrix kron(const Matrix& a, const Matrix& b);
// Zero-pads to max(rows, cols) square; no-op for square input.
Matrix pad_square(const Matrix& a);

// Components of x against the basis; x need not be a member.
Eigen::VectorXcd coefficients(const SubspaceBasis& k, const Matrix& x);
Matrix project(const SubspaceBasis& k, const Matrix& x);
double membership_residual(const SubspaceBasis& k, const Matrix& x);

// Modified Gram-Schmidt with reorthogonalization; inputs whose residual
// falls below gs_drop relative to their norm are dropped.
SubspaceBasis orthonormalize(const std::vector<Matrix>& vectors);

// Orthonormal basis of {y in span(k) : Tr(x y*) = 0}; dim(k) - 1 elements.
SubspaceBasis orth_complement(const SubspaceBasis& k, const Matrix& x);

// SVD frame of x applied to the whole subspace: x -> diag(sigma), k -> u k v.
Aligned schmidt_align(const SubspaceBasis& k, const Matrix& x);

// All pairwise Kronecker products, ordered (ia, ib) lexicographically.
SubspaceBasis tensor_subspace(const SubspaceBasis& a, const SubspaceBasis& b);

// Haar-like d-dim subspace of n x m matrices from iid complex normals;
// identical output for identical seed.
SubspaceBasis random_subspace(Index n, Index m, Index d, std::uint64_t seed);

}  // namespace ral::matspace
