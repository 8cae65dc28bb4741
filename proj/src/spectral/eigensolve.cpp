#include "siglab/spectral/eigensolve.hpp"

#include <lapacke.h>

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "siglab/common/rng.hpp"
#include "siglab/spectral/fourier.hpp"

namespace siglab::spectral {

namespace {

Eigen::VectorXd random_vector(std::int64_t dim, std::uint64_t seed) {
    SplitMix64 rng(hash_combine(seed, 0x6c616e63ull));
    Eigen::VectorXd v(dim);
    for (std::int64_t i = 0; i < dim; ++i) v[i] = rng.symmetric();
    return v;
}

/// Cluster boundaries of an ascending eigenvalue list; splits at gaps that
/// exceed both the roundoff floor and a relative tolerance.
std::vector<std::pair<int, int>> clusters(const Eigen::VectorXd& lambda, double lmax) {
    std::vector<std::pair<int, int>> out;
    const int n = int(lambda.size());
    const double floor_gap = 1e-11 * std::max(lmax, 1.0);
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n ||
            lambda[i] - lambda[i - 1] > std::max(floor_gap, 1e-8 * lambda[i])) {
            out.emplace_back(start, i);
            start = i;
        }
    }
    return out;
}

} // namespace

DenseEig dense_generalized_eig(Eigen::MatrixXd S, Eigen::MatrixXd M, bool want_vectors) {
    const lapack_int n = lapack_int(S.rows());
    DenseEig out;
    out.lambda.resize(n);
    const lapack_int info = LAPACKE_dsygvd(
        LAPACK_COL_MAJOR, 1, want_vectors ? 'V' : 'N', 'L', n, S.data(), n, M.data(), n,
        out.lambda.data());
    if (info != 0) {
        std::ostringstream msg;
        msg << "dense_generalized_eig: dsygvd failed with info = " << info;
        throw std::runtime_error(msg.str());
    }
    if (want_vectors) out.vectors = std::move(S);
    return out;
}

double pencil_lambda_max(const Eigen::SparseMatrix<double>& S, const dec::MassMatrix& M,
                         std::uint64_t seed) {
    Eigen::VectorXd v = random_vector(S.rows(), seed);
    double lam = 1.0;
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXd w = M.inverse() * (S * v).eval();
        const double nrm = std::sqrt(std::abs(v.dot(M.matrix() * w)));
        lam = v.dot(S * v) / std::max(v.dot(M.matrix() * v), 1e-300);
        if (nrm == 0) break;
        v = w / w.norm();
    }
    return lam;
}

std::function<Eigen::VectorXd(const Eigen::VectorXd&)> make_shifted_solver(
    const SignatureAssembly& assembly, double sigma, std::string* notes) {
    const auto& grid = assembly.grid();
    if (assembly.metric().is_flat()) {
        // (S + sigma M) is block-diagonal in the DFT basis: per-frequency
        // Hermitian matrix h^n (dhat^H dhat + dlow dlow^H + sigma).
        const int m = assembly.middle();
        const int nc = grid.comps(m);
        auto fft = std::make_shared<TorusFFT>(grid);
        auto inv = std::make_shared<std::vector<Eigen::MatrixXcd>>();
        inv->reserve(std::size_t(grid.sites()));
        const double hn = std::pow(grid.h(), grid.n());
        for (std::int64_t s = 0; s < grid.sites(); ++s) {
            const auto kappa = grid.coords_of(s);
            Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(nc, nc);
            const Eigen::MatrixXcd dm = coboundary_symbol(grid, m, kappa);
            sym += dm.adjoint() * dm;
            if (m > 0) {
                const Eigen::MatrixXcd dl = coboundary_symbol(grid, m - 1, kappa);
                sym += dl * dl.adjoint();
            }
            sym += sigma * Eigen::MatrixXcd::Identity(nc, nc);
            inv->push_back(sym.inverse() / hn);
        }
        if (notes) *notes += "inner-solve: exact flat Fourier; ";
        return [fft, inv, nc](const Eigen::VectorXd& b) {
            Eigen::VectorXcd modes = fft->to_modes(b.cast<dec::Complex>(), nc);
            for (std::size_t s = 0; s < inv->size(); ++s)
                modes.segment(std::int64_t(s) * nc, nc) =
                    ((*inv)[s] * modes.segment(std::int64_t(s) * nc, nc)).eval();
            return Eigen::VectorXd(fft->to_sites(modes, nc).real());
        };
    }
    Eigen::SparseMatrix<double> A =
        assembly.laplace_form() + sigma * assembly.M_m().matrix();
    auto ldlt = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    ldlt->compute(A);
    if (ldlt->info() != Eigen::Success)
        throw std::runtime_error("make_shifted_solver: sparse LDLT factorization failed");
    if (notes) *notes += "inner-solve: sparse LDLT; ";
    return [ldlt](const Eigen::VectorXd& b) { return Eigen::VectorXd(ldlt->solve(b)); };
}

LanczosResult shift_invert_smallest(
    const Eigen::SparseMatrix<double>& S, const Eigen::SparseMatrix<double>& M,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& solve, double sigma,
    int nev, double tol, int max_iter, std::uint64_t seed) {
    const std::int64_t dim = S.rows();
    nev = int(std::min<std::int64_t>(nev, dim));
    // Degenerate shells are recovered one copy per restart round, so the
    // budget scales with nev well beyond the usual 2x rule.
    if (max_iter <= 0)
        max_iter = int(std::min<std::int64_t>(6 * dim, 20 * std::int64_t(nev) + 500));

    LanczosResult res;
    const int max_basis = int(std::min<std::int64_t>(dim, max_iter + nev + 8));
    Eigen::MatrixXd V(dim, max_basis);   // locked vectors first, then Krylov
    int locked = 0;
    std::vector<double> locked_theta;
    int total_iter = 0;
    int round = 0;
    double theta_scale = 1.0 / sigma;    // ||C|| is at most 1/sigma

    while (locked < nev && total_iter < max_iter && locked < max_basis - 2) {
        // Fresh start vector, M-orthogonal to everything locked.
        Eigen::VectorXd v = random_vector(dim, hash_combine(seed, 1000 + round));
        ++round;
        auto reorth = [&](Eigen::VectorXd& w, int cols) {
            for (int pass = 0; pass < 2; ++pass) {
                if (cols == 0) break;
                Eigen::VectorXd mw = M * w;
                Eigen::VectorXd coef = V.leftCols(cols).transpose() * mw;
                w.noalias() -= V.leftCols(cols) * coef;
            }
        };
        reorth(v, locked);
        double nv = std::sqrt(v.dot(M * v));
        if (nv <= 0) break;
        v /= nv;

        const int kmax = std::min(max_basis - locked, std::max(64, nev - locked + 32));
        if (kmax < 2) break;
        std::vector<double> alpha, beta;
        int j = 0;
        V.col(locked) = v;
        bool locked_any = false;
        while (j < kmax - 1 && total_iter < max_iter) {
            Eigen::VectorXd w = solve(M * V.col(locked + j));
            ++total_iter;
            const double a = w.dot(M * V.col(locked + j));
            alpha.push_back(a);
            w.noalias() -= a * V.col(locked + j);
            if (j > 0) w.noalias() -= beta.back() * V.col(locked + j - 1);
            reorth(w, locked + j + 1);
            const double b = std::sqrt(std::max(0.0, w.dot(M * w)));
            const bool invariant = b < 1e-13 * theta_scale;
            beta.push_back(invariant ? 0.0 : b);
            if (!invariant) V.col(locked + j + 1) = w / b;
            ++j;

            if (!(invariant || j % 16 == 0 || j == kmax - 1)) continue;

            // Ritz values of the tridiagonal; converged = largest thetas.
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(j, j);
            for (int i = 0; i < j; ++i) {
                T(i, i) = alpha[std::size_t(i)];
                if (i + 1 < j) T(i, i + 1) = T(i + 1, i) = beta[std::size_t(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
            const Eigen::VectorXd& th = es.eigenvalues();
            theta_scale = std::max(theta_scale, th.cwiseAbs().maxCoeff());
            int conv = 0;
            for (int i = j - 1; i >= 0; --i) {
                const double resid =
                    std::abs(beta[std::size_t(j - 1)] * es.eigenvectors()(j - 1, i));
                if (resid <= tol * theta_scale && th[i] > 1e-14 * theta_scale)
                    ++conv;
                else
                    break;
            }
            if (!(invariant || j == kmax - 1 || locked + conv >= nev ||
                  conv >= kmax / 2))
                continue;

            // Lock the converged Ritz pairs (largest thetas, end of th).
            const int take = std::min(conv, nev - locked);
            const Eigen::MatrixXd Y =
                V.middleCols(locked, j) * es.eigenvectors().rightCols(conv);
            double rm = 0;
            for (int i = 0; i < take; ++i) {
                // largest theta first: column conv-1-i of Y
                Eigen::VectorXd y = Y.col(conv - 1 - i);
                for (int pass = 0; pass < 2 && locked > 0; ++pass) {
                    Eigen::VectorXd coef = V.leftCols(locked).transpose() * (M * y);
                    y.noalias() -= V.leftCols(locked) * coef;
                }
                const double ny = std::sqrt(std::max(0.0, y.dot(M * y)));
                if (ny < 1e-8) continue;  // duplicate of a locked vector
                V.col(locked) = y / ny;
                locked_theta.push_back(th[j - 1 - i]);
                rm = std::max(rm, std::abs(beta[std::size_t(j - 1)] *
                                           es.eigenvectors()(j - 1, j - 1 - i)));
                ++locked;
                locked_any = true;
            }
            res.max_residual = std::max(res.max_residual, rm);
            break;  // restart with a fresh vector
        }
        (void)locked_any;
    }

    res.iterations = total_iter;
    res.converged = locked >= nev;
    const int nout = std::min(locked, nev > 0 ? locked : locked);
    Eigen::VectorXd lam(nout);
    for (int i = 0; i < nout; ++i)
        lam[i] = 1.0 / locked_theta[std::size_t(i)] - sigma;
    // sort ascending in lambda together with vectors
    std::vector<int> idx(static_cast<std::size_t>(nout), 0);
    for (int i = 0; i < nout; ++i) idx[std::size_t(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lam[a] < lam[b]; });
    res.lambda.resize(nout);
    res.vectors.resize(dim, nout);
    for (int i = 0; i < nout; ++i) {
        res.lambda[i] = lam[idx[std::size_t(i)]];
        res.vectors.col(i) = V.col(idx[std::size_t(i)]);
    }
    std::ostringstream n;
    n << "lanczos: locked " << locked << "/" << nev << " in " << total_iter
      << " iterations, max residual " << res.max_residual << "; ";
    res.notes = n.str();
    return res;
}

namespace {

MiddleSpectrum flat_fourier_spectrum(const SignatureAssembly& A) {
    // The flat middle Laplacian symbol is scalar per frequency:
    // dhat^H dhat + dlow dlow^H = (sum_a |D_a|^2) Id, so the eigenvalue is the
    // scalar symbol and the coexact multiplicity is rank(dhat_m(kappa)).
    const auto& grid = A.grid();
    const int m = A.middle();
    const int nc = grid.comps(m);
    MiddleSpectrum out;
    std::vector<std::pair<double, char>> entries;
    entries.reserve(std::size_t(grid.dofs(m)));
    double lmax = 0;
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const auto kappa = grid.coords_of(s);
        const double lk = laplace_symbol(grid, kappa);
        lmax = std::max(lmax, lk);
        if (lk == 0.0) {  // kappa = 0: constant forms are the harmonic space
            for (int i = 0; i < nc; ++i) entries.emplace_back(0.0, 'h');
            continue;
        }
        const Eigen::MatrixXcd dm = coboundary_symbol(grid, m, kappa);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dm);
        const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        int rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > 1e-12 * smax) ++rank;
        for (int i = 0; i < nc - rank; ++i) entries.emplace_back(lk, 'e');
        for (int i = 0; i < rank; ++i) entries.emplace_back(lk, 'c');
    }
    std::sort(entries.begin(), entries.end());
    out.lambda.resize(Eigen::Index(entries.size()));
    out.mclass.resize(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out.lambda[Eigen::Index(i)] = entries[i].first;
        out.mclass[i] = entries[i].second;
    }
    out.lambda_max = lmax;
    out.notes = "path: flat Fourier (exact per-frequency diagonalization); ";
    return out;
}

void classify_and_kernel(const SignatureAssembly& A, MiddleSpectrum& sp) {
    // Kernel threshold (design): mu < 1e-8 * mu_max.
    double lam_thresh = 1e-16 * std::max(sp.lambda_max, 1.0);
    const int n = int(sp.lambda.size());
    if (sp.mclass.empty()) sp.mclass.assign(std::size_t(n), '?');

    if (sp.has_vectors) {
        // The dense reduction smears near-zero eigenvalues by O(eps lambda_max);
        // sparse Rayleigh quotients restore them to O(eps^2) before the
        // threshold test.
        const Eigen::SparseMatrix<double>& S = A.laplace_form();
        const Eigen::SparseMatrix<double>& M = A.M_m().matrix();
        int polished = 0;
        for (int i = 0; i < n && i < 64; ++i) {
            if (sp.lambda[i] > 1e-6 * std::max(sp.lambda_max, 1.0)) break;
            const Eigen::VectorXd v = sp.vectors.col(i);
            const double num = v.dot(S * v), den = v.dot(M * v);
            sp.lambda[i] = std::max(0.0, num / den);
            polished = i + 1;
        }
        // restore ascending order among the polished entries (vectors follow)
        for (int i = 1; i < polished; ++i)
            for (int j = i; j > 0 && sp.lambda[j] < sp.lambda[j - 1]; --j) {
                std::swap(sp.lambda[j], sp.lambda[j - 1]);
                sp.vectors.col(j).swap(sp.vectors.col(j - 1));
                std::swap(sp.mclass[std::size_t(j)], sp.mclass[std::size_t(j - 1)]);
            }
    } else {
        // No vectors to polish with: widen by the dense solver's noise floor.
        lam_thresh = std::max(lam_thresh, 64 * 2.2e-16 * sp.lambda_max);
    }

    int kdim = 0;
    while (kdim < n && std::abs(sp.lambda[kdim]) < lam_thresh) ++kdim;

    if (sp.has_vectors && n > 0) {
        // classify nonzero clusters as coexact/exact via the d*d Gram
        const Eigen::SparseMatrix<double>& K = A.coexact_form();
        auto cls = clusters(sp.lambda, sp.lambda_max);
        for (auto [a, b] : cls) {
            if (sp.lambda[a] < lam_thresh) {
                for (int i = a; i < b; ++i) sp.mclass[std::size_t(i)] = 'h';
                continue;
            }
            const Eigen::MatrixXd Vc = sp.vectors.middleCols(a, b - a);
            Eigen::MatrixXd G = Vc.transpose() * (K * Vc).eval();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
            const double lam = sp.lambda[a];
            int ncoex = 0;
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                if (es.eigenvalues()[i] > 0.5 * lam) ++ncoex;
            for (int i = a; i < b; ++i)
                sp.mclass[std::size_t(i)] = (i - a < (b - a - ncoex)) ? 'e' : 'c';
        }
        kdim = 0;
        for (char c : sp.mclass)
            if (c == 'h') ++kdim;
    }
    sp.kernel_dim = kdim;
    if (kdim > 0 && kdim < n) {
        const double mu_k = std::sqrt(std::max(0.0, sp.lambda[kdim - 1]));
        const double mu_n = std::sqrt(std::max(0.0, sp.lambda[kdim]));
        sp.kernel_gap_ratio = mu_n > 0 ? mu_k / mu_n : 0.0;
        sp.gap_ambiguous = sp.kernel_gap_ratio > 1e-3;
    }
}

} // namespace

MiddleSpectrum middle_spectrum(const SignatureAssembly& assembly, const SolverOptions& opts) {
    const std::int64_t dim = assembly.grid().dofs(assembly.middle());
    MiddleSpectrum sp;

    const bool flat = assembly.metric().is_flat();
    if (flat && opts.mode == SolverOptions::Mode::Auto) {
        // Translation invariance: the pencil is block-diagonal in the DFT
        // basis, diagonalized exactly per frequency.  Dense and iterative
        // modes remain forcible for cross-checks.
        sp = flat_fourier_spectrum(assembly);
        classify_and_kernel(assembly, sp);
        return sp;
    }

    SolverOptions::Mode mode = opts.mode;
    if (mode == SolverOptions::Mode::Auto)
        mode = (dim <= std::min(opts.dense_limit, opts.dense_memory_guard))
                   ? SolverOptions::Mode::Dense
                   : SolverOptions::Mode::Iterative;

    if (mode == SolverOptions::Mode::Dense) {
        if (dim > std::min(opts.dense_limit, opts.dense_memory_guard)) {
            std::ostringstream msg;
            msg << "middle_spectrum: dense solve of dimension " << dim
                << " exceeds the dense limit "
                << std::min(opts.dense_limit, opts.dense_memory_guard);
            throw std::runtime_error(msg.str());
        }
        DenseEig de = dense_generalized_eig(Eigen::MatrixXd(assembly.laplace_form()),
                                            Eigen::MatrixXd(assembly.M_m().matrix()),
                                            opts.want_vectors);
        sp.lambda = std::move(de.lambda);
        sp.vectors = std::move(de.vectors);
        sp.has_vectors = opts.want_vectors;
        sp.lambda_max = sp.lambda.size() ? sp.lambda[sp.lambda.size() - 1] : 0.0;
        sp.notes = "path: dense dsygvd; ";
    } else {
        const double sigma = 1.0;
        std::string notes = "path: shift-invert Lanczos; ";
        auto solve = make_shifted_solver(assembly, sigma, &notes);
        const int nev = opts.nev > 0 ? opts.nev : int(std::min<std::int64_t>(dim, 200));
        // Over-request so the trailing (possibly truncated) degenerate cluster
        // sits beyond what callers consume.
        const int nev_eff = int(std::min<std::int64_t>(dim, nev + std::max(8, nev / 16)));
        LanczosResult lr = shift_invert_smallest(
            assembly.laplace_form(), assembly.M_m().matrix(), solve, sigma, nev_eff,
            opts.tol, opts.max_iter, opts.seed);
        sp.lambda = std::move(lr.lambda);
        sp.vectors = std::move(lr.vectors);
        sp.has_vectors = true;
        sp.converged = lr.converged;
        sp.max_residual = lr.max_residual;
        sp.lambda_max = pencil_lambda_max(assembly.laplace_form(), assembly.M_m());
        sp.notes = notes + lr.notes;
        if (!lr.converged) sp.notes += "WARNING: requested count not fully converged; ";
    }
    classify_and_kernel(assembly, sp);
    return sp;
}

} // namespace siglab::spectral
