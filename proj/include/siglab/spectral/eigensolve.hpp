#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "siglab/spectral/assembly.hpp"

namespace siglab::spectral {

struct SolverOptions {
    enum class Mode { Auto, Dense, Iterative };
    Mode mode = Mode::Auto;
    double tol = 1e-10;
    int max_iter = 0;                      // 0 = automatic
    int nev = 0;                           // wanted pairs (iterative); 0 = all
    bool want_vectors = true;
    std::int64_t dense_limit = 20000;      // documented dense/iterative switch
    std::int64_t dense_memory_guard = 12500;  // hardware guard on this host
    std::uint64_t seed = 20250810;
};

/// Spectrum of the middle Hodge Laplacian pencil (S, M_m) with each mode
/// classified: 'h' harmonic (kernel), 'c' coexact (the d*d side, i.e. supp d;
/// this is what the odd-parity signature operator sees), 'e' exact.
struct MiddleSpectrum {
    Eigen::VectorXd lambda;        // ascending
    std::vector<char> mclass;      // parallel to lambda
    Eigen::MatrixXd vectors;       // M-orthonormal columns; may be empty
    bool has_vectors = false;
    int kernel_dim = 0;
    double kernel_gap_ratio = 0.0; // mu_{ker} / mu_{ker+1}; 0 for exact zeros
    bool gap_ambiguous = false;
    bool converged = true;
    double max_residual = 0.0;
    double lambda_max = 0.0;       // estimate of the pencil's top eigenvalue
    std::string notes;
};

MiddleSpectrum middle_spectrum(const SignatureAssembly& assembly, const SolverOptions& opts);

/// All eigenvalues (and optionally M-orthonormal vectors) of the symmetric
/// definite pencil S v = lambda M v via LAPACK dsygvd.
struct DenseEig {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd vectors;
};
DenseEig dense_generalized_eig(Eigen::MatrixXd S, Eigen::MatrixXd M, bool want_vectors);

/// Shift-invert Lanczos (M inner product, full reorthogonalization, locking
/// restarts) for the nev smallest eigenvalues of (S, M).  `solve` must apply
/// (S + sigma M)^{-1}; failures are reported through `converged` and
/// `max_residual`, never silently.
struct LanczosResult {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd vectors;
    bool converged = false;
    double max_residual = 0.0;
    int iterations = 0;
    std::string notes;
};
LanczosResult shift_invert_smallest(
    const Eigen::SparseMatrix<double>& S, const Eigen::SparseMatrix<double>& M,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& solve, double sigma,
    int nev, double tol, int max_iter, std::uint64_t seed);

/// Factory for the shifted inner solve: exact per-frequency inversion for the
/// flat metric (via FFT), sparse LDLT otherwise.
std::function<Eigen::VectorXd(const Eigen::VectorXd&)> make_shifted_solver(
    const SignatureAssembly& assembly, double sigma, std::string* notes);

/// Power-iteration estimate of the largest pencil eigenvalue (deterministic).
double pencil_lambda_max(const Eigen::SparseMatrix<double>& S,
                         const dec::MassMatrix& M, std::uint64_t seed = 3);

} // namespace siglab::spectral
