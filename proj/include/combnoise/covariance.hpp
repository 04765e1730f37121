#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "combnoise/comb_model.hpp"
#include "combnoise/noise_sim.hpp"

namespace combnoise {

// Symmetric shot-normalized band covariance matrix at one quadrature and
// RF frequency. Entries are stored densely; symmetry is exact because both
// triangles are written from one value.
struct NoiseMatrix {
    Quadrature quadrature = Quadrature::Amplitude;
    double rf_hz = 0.0;
    std::size_t n = 0;
    std::vector<double> entries; // row-major n×n

    double at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }

    static NoiseMatrix make(Quadrature quad, double rf_hz, std::size_t n,
                            std::vector<double> entries);
    void validate() const;
};

// Normalized cross-covariance of bands i and j from the three variance
// measurements (i), (j), (i,j):
//   ⟨O_i O_j⟩ = [⟨(O_i+O_j)²⟩ - (P_i/P_t)⟨O_i²⟩ - (P_j/P_t)⟨O_j²⟩] · P_t/(2√(P_i P_j)),
// with P_t = P_i + P_j taken from the measurement records.
double covariance_pair(const MeasuredVariance& vi, const MeasuredVariance& vj,
                       const MeasuredVariance& vij);

// Builds the full matrix from one protocol's measurement set. The set must
// contain exactly the n singles and n(n-1)/2 pairs of one (quadrature, rf)
// group; anything missing, duplicated, or mismatched is a protocol error.
NoiseMatrix assemble(const std::vector<MeasuredVariance>& measurements);

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // descending
    std::vector<ModeVector> eigenvectors; // rows match eigenvalues; label Eigen
    std::size_t n = 0;
};

// Cyclic Jacobi diagonalization. Converges when the off-diagonal Frobenius
// norm falls below 1e-14·‖A‖_F (at most 100 sweeps, else a numerical
// error). Eigenvalues sorted descending; each vector's largest-magnitude
// component is made positive (lowest index on ties).
EigenDecomposition eig_sym(const NoiseMatrix& matrix);

// Certificate check helpers (max |A v - λ v|, orthonormality residual,
// reconstruction residual), used by tests and exposed for callers.
struct EigenResiduals {
    double eigen_residual = 0.0;
    double orthonormality = 0.0;
    double reconstruction = 0.0;
};
EigenResiduals eigen_residuals(const NoiseMatrix& matrix, const EigenDecomposition& eig);

// Variance of the collective observable along w: Σ_k σ²_k (ψ_k·w)².
double project_variance(const EigenDecomposition& eig, const ModeVector& w);

// Share of the above-shot excess carried by eigenmode k:
// max(σ²_k - 1, 0) / Σ_m max(σ²_m - 1, 0). All modes at or below shot
// (denominator 0) is a domain error.
double excess_fraction(const EigenDecomposition& eig, std::size_t k);

// CEO and repetition-timing collective variances of a phase-quadrature
// matrix, via its eigendecomposition.
std::pair<double, double> extract_collective(const NoiseMatrix& matrix, const ModeVector& w_ceo,
                                             const ModeVector& w_rep);

} // namespace combnoise
