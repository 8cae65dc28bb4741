#include "siglab/spectral/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "siglab/common/rng.hpp"
#include "siglab/dec/pairing.hpp"
#include "siglab/spectral/fourier.hpp"

namespace siglab::spectral {

std::int64_t coboundary_rank(const dec::PeriodicGrid& grid, int degree) {
    std::int64_t rank = 0;
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const Eigen::MatrixXcd d = coboundary_symbol(grid, degree, grid.coords_of(s));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
        const auto& sv = svd.singularValues();
        const double smax = sv.size() ? sv[0] : 0.0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > 1e-12 * std::max(smax, 1.0)) ++rank;
    }
    return rank;
}

KernelAnalysis kernel_analysis(const SignatureAssembly& assembly, const SolverOptions& opts) {
    const auto& grid = assembly.grid();
    const int m = assembly.middle();
    KernelAnalysis ka;
    ka.expected = dec::binomial(grid.n(), m);

    SolverOptions o = opts;
    if (o.nev <= 0) o.nev = ka.expected + 24;  // iterative path: kernel plus slack
    const MiddleSpectrum sp = middle_spectrum(assembly, o);
    ka.dim = sp.kernel_dim;
    ka.gap_ratio = sp.kernel_gap_ratio;
    ka.ambiguous = sp.gap_ambiguous;
    if (ka.ambiguous)
        ka.dim = -1;  // flagged, not guessed

    const std::int64_t rank_m = coboundary_rank(grid, m);
    const std::int64_t rank_low = m > 0 ? coboundary_rank(grid, m - 1) : 0;
    ka.rank_based_dim = int(grid.dofs(m) - rank_m - rank_low);
    ka.finite_rank_check = (ka.rank_based_dim == ka.dim);

    // g-orthonormal harmonic basis.
    if (ka.dim > 0 && sp.has_vectors) {
        for (int i = 0; i < ka.dim; ++i) {
            dec::FormField f(grid, m);
            f.data = sp.vectors.col(i).cast<dec::Complex>();
            ka.basis.push_back(std::move(f));
        }
    } else if (ka.dim > 0 && assembly.metric().is_flat()) {
        // Flat harmonic forms are the constant fields; M-orthonormalize.
        const int nc = grid.comps(m);
        for (int c = 0; c < nc && int(ka.basis.size()) < ka.dim; ++c) {
            dec::FormField f(grid, m);
            for (std::int64_t s = 0; s < grid.sites(); ++s) f.at(s, c) = 1.0;
            const double nrm = assembly.M_m().norm(f);
            f.data /= nrm;
            ka.basis.push_back(std::move(f));
        }
    }
    return ka;
}

namespace {

struct GradedOperator {
    Eigen::MatrixXd F;        // bounded module operator, M-self-adjoint
    Eigen::MatrixXd M;        // graded mass (dense)
    Eigen::VectorXd lambda_h; // eigenvalues of H (even) or of D_sym (odd)
    Eigen::Index mid_off, mid_dim;
};

// Even parity: graded H on Omega^{m-1} + Omega^m + Omega^{m+1} via the
// symmetric pencil (M H, M); F = Z f(Lambda) Z^T M with Z M-orthonormal.
GradedOperator build_even_module(const SignatureAssembly& A) {
    const auto& grid = A.grid();
    const int m = A.middle();
    const Eigen::Index nl = grid.dofs(m - 1), nm = grid.dofs(m), nh = grid.dofs(m + 1);
    const Eigen::Index dim = nl + nm + nh;

    Eigen::MatrixXd MH = Eigen::MatrixXd::Zero(dim, dim);
    const Eigen::MatrixXd a = Eigen::MatrixXd(A.M_m().matrix() * A.d_mm1());   // (m, m-1)
    const Eigen::MatrixXd b = Eigen::MatrixXd(A.M_mp1().matrix() * A.d_m());   // (m+1, m)
    MH.block(nl, 0, nm, nl) = a;
    MH.block(0, nl, nl, nm) = a.transpose();
    MH.block(nl + nm, nl, nh, nm) = b;
    MH.block(nl, nl + nm, nm, nh) = b.transpose();

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    M.block(0, 0, nl, nl) = Eigen::MatrixXd(A.M_mm1().matrix());
    M.block(nl, nl, nm, nm) = Eigen::MatrixXd(A.M_m().matrix());
    M.block(nl + nm, nl + nm, nh, nh) = Eigen::MatrixXd(A.M_mp1().matrix());

    DenseEig eig = dense_generalized_eig(MH, M, true);

    GradedOperator g;
    g.M = std::move(M);
    g.lambda_h = eig.lambda;
    Eigen::VectorXd f(eig.lambda.size());
    for (Eigen::Index i = 0; i < f.size(); ++i)
        f[i] = eig.lambda[i] / std::sqrt(1.0 + eig.lambda[i] * eig.lambda[i]);
    g.F = eig.vectors * f.asDiagonal() * eig.vectors.transpose() * g.M;
    g.mid_off = nl;
    g.mid_dim = nm;
    return g;
}

// Odd parity: M-symmetrization of the literal tau d, diagonalized as a
// complex Hermitian pencil; the real part of F is reported (the operator is
// real up to the tau phases, which are real at the odd middle degrees).
GradedOperator build_odd_module(const SignatureAssembly& A) {
    const auto& grid = A.grid();
    const int m = A.middle();
    const Eigen::Index nm = grid.dofs(m);
    const Eigen::MatrixXcd T = Eigen::MatrixXcd(A.literal_tau_d());
    const Eigen::MatrixXd M = Eigen::MatrixXd(A.M_m().matrix());
    const Eigen::MatrixXcd Mc = M.cast<dec::Complex>();
    const Eigen::MatrixXcd Tsym = 0.5 * (T + Mc.inverse() * T.adjoint() * Mc);

    // Transform to the M-orthonormal frame: G = M^{1/2} Tsym M^{-1/2} Hermitian.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esM(M);
    Eigen::VectorXd sq = esM.eigenvalues().cwiseMax(1e-300).cwiseSqrt();
    Eigen::MatrixXd Mh = esM.eigenvectors() * sq.asDiagonal() * esM.eigenvectors().transpose();
    Eigen::MatrixXd Mhi = esM.eigenvectors() * sq.cwiseInverse().asDiagonal() *
                          esM.eigenvectors().transpose();
    Eigen::MatrixXcd G = Mh.cast<dec::Complex>() * Tsym * Mhi.cast<dec::Complex>();
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);

    GradedOperator g;
    g.M = M;
    g.lambda_h = es.eigenvalues();
    Eigen::VectorXd f(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double x = es.eigenvalues()[i];
        f[i] = (x + 1.0) / std::sqrt(1.0 + x * x);
    }
    const Eigen::MatrixXcd Fg = es.eigenvectors() * f.asDiagonal().toDenseMatrix().cast<dec::Complex>() *
                                es.eigenvectors().adjoint();
    g.F = (Mhi.cast<dec::Complex>() * Fg * Mh.cast<dec::Complex>()).real();
    g.mid_off = 0;
    g.mid_dim = nm;
    return g;
}

double m_operator_norm(const Eigen::MatrixXd& C, const Eigen::MatrixXd& M,
                       std::uint64_t seed) {
    // Power iteration on M^{-1} C^T M C (the M-adjoint composition).
    Eigen::VectorXd v(C.cols());
    SplitMix64 rng(hash_combine(seed, 0x6f706e72ull));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.symmetric();
    v.normalize();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    double nrm = 0;
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXd w = lu.solve(C.transpose() * (M * (C * v)));
        nrm = std::sqrt(std::max(0.0, v.dot(M * w) / v.dot(M * v)));
        const double wn = w.norm();
        if (wn == 0) return 0.0;
        v = w / wn;
    }
    return nrm;
}

} // namespace

FredholmReport fredholm_module_check(const SignatureAssembly& assembly,
                                     const Eigen::VectorXd& phi) {
    const auto& grid = assembly.grid();
    const int m = assembly.middle();
    FredholmReport rep;
    rep.even = assembly.even();
    rep.pointwise_tau_defect = assembly.smooth_probe_defect();

    GradedOperator g = rep.even ? build_even_module(assembly) : build_odd_module(assembly);
    const Eigen::Index dim = g.F.rows();

    // Grading carried by the assembly: domain/target parity of the graded H.
    Eigen::VectorXd grading = Eigen::VectorXd::Ones(dim);
    if (rep.even)
        grading.segment(g.mid_off, g.mid_dim).setConstant(-1.0);
    else
        grading.setOnes();  // odd parity: no graded split on Omega^m
    if (rep.even) {
        const Eigen::MatrixXd anti =
            grading.asDiagonal() * g.F + g.F * grading.asDiagonal();
        rep.grading_anticommute_defect = anti.norm() / std::max(g.F.norm(), 1e-300);
    }

    // F - F# in the M geometry.
    const Eigen::MatrixXd Fsharp =
        Eigen::PartialPivLU<Eigen::MatrixXd>(g.M).solve(g.F.transpose() * g.M);
    rep.f_selfadjoint_defect = (g.F - Fsharp).norm() / std::max(g.F.norm(), 1e-300);

    // F^2 - 1 on the middle block vs -(1 + Delta_m)^{-1} from the pencil.
    Eigen::MatrixXd fsq = g.F * g.F - Eigen::MatrixXd::Identity(dim, dim);
    if (rep.even) {
        Eigen::MatrixXd B = -fsq.block(g.mid_off, g.mid_off, g.mid_dim, g.mid_dim);
        DenseEig route1 = dense_generalized_eig(
            Eigen::MatrixXd(assembly.M_m().matrix()) * B,
            Eigen::MatrixXd(assembly.M_m().matrix()), false);
        DenseEig route2 = dense_generalized_eig(
            Eigen::MatrixXd(assembly.laplace_form()),
            Eigen::MatrixXd(assembly.M_m().matrix()), false);
        double maxerr = 0;
        for (Eigen::Index i = 0; i < route1.lambda.size(); ++i) {
            const double expect = 1.0 / (1.0 + route2.lambda[route2.lambda.size() - 1 - i]);
            const double got = route1.lambda[i];
            maxerr = std::max(maxerr, std::abs(got - expect));
        }
        rep.fsq_identity_max_err = maxerr;
    }
    {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(fsq);
        rep.fsq_tail.assign(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    }

    // [F, phi] with phi acting diagonally on every component.
    const int nc_m = grid.comps(m);
    Eigen::VectorXd diag(dim);
    if (rep.even) {
        Eigen::Index off = 0;
        for (int deg : {m - 1, m, m + 1}) {
            const int nc = grid.comps(deg);
            for (std::int64_t s = 0; s < grid.sites(); ++s)
                for (int c = 0; c < nc; ++c) diag[off + s * nc + c] = phi[s];
            off += grid.dofs(deg);
        }
    } else {
        for (std::int64_t s = 0; s < grid.sites(); ++s)
            for (int c = 0; c < nc_m; ++c) diag[s * nc_m + c] = phi[s];
    }
    const Eigen::MatrixXd comm = g.F * diag.asDiagonal() - diag.asDiagonal() * g.F;
    rep.commutator_norm = m_operator_norm(comm, g.M, 17);
    return rep;
}

int signature_pairing(const SignatureAssembly& assembly, const SolverOptions& opts) {
    const auto& grid = assembly.grid();
    if (grid.n() != 4)
        throw std::invalid_argument("signature_pairing: defined for n = 4");
    KernelAnalysis ka = kernel_analysis(assembly, opts);
    if (ka.dim != ka.expected)
        throw std::runtime_error("signature_pairing: kernel dimension is not C(4,2); refusing");

    const int d = ka.dim;
    Eigen::MatrixXd P(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            P(i, j) = dec::wedge_integral(grid, ka.basis[std::size_t(i)],
                                          ka.basis[std::size_t(j)]).real();
    P = 0.5 * (P + P.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    int sig = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()[i] > 1e-10 * scale) ++sig;
        else if (es.eigenvalues()[i] < -1e-10 * scale) --sig;
    }
    return sig;
}

} // namespace siglab::spectral
