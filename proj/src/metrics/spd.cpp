#include "siglab/metrics/spd.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace siglab::metrics {

namespace {

Eigen::MatrixXd eig_apply(const Eigen::MatrixXd& A, double (*f)(double, double), double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spd: eigendecomposition failed");
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd v = es.eigenvalues();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] < -1e-10 * std::max(scale, 1.0))
            throw std::invalid_argument("spd: matrix is not positive definite");
        v[i] = f(std::max(v[i], 1e-14), t);
    }
    return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().transpose();
}

double pw(double x, double t) { return std::pow(x, t); }

} // namespace

Eigen::MatrixXd spd_pow(const Eigen::MatrixXd& A, double t) { return eig_apply(A, pw, t); }
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& A) { return spd_pow(A, 0.5); }
Eigen::MatrixXd spd_inv_sqrt(const Eigen::MatrixXd& A) { return spd_pow(A, -0.5); }

Eigen::MatrixXd geometric_mean(const Eigen::MatrixXd& A0, const Eigen::MatrixXd& A1, double t) {
    if (t < 0.0 || t > 1.0)
        throw std::invalid_argument("geometric_mean: t must be in [0,1]");
    if (t == 0.0) return A0;
    if (t == 1.0) return A1;
    const Eigen::MatrixXd r = spd_sqrt(A0);
    const Eigen::MatrixXd ri = spd_inv_sqrt(A0);
    return r * spd_pow(ri * A1 * ri, t) * r;
}

Eigen::MatrixXd compound(const Eigen::MatrixXd& M, int k) {
    const int n = int(M.rows());
    if (k == 0) return Eigen::MatrixXd::Ones(1, 1);
    std::vector<std::vector<int>> cs;
    std::vector<int> cur;
    // enumerate increasing k-subsets of {0..n-1}, lexicographic
    std::function<void(int)> rec = [&](int start) {
        if (int(cur.size()) == k) {
            cs.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    Eigen::MatrixXd C(cs.size(), cs.size());
    Eigen::MatrixXd sub(k, k);
    for (std::size_t a = 0; a < cs.size(); ++a)
        for (std::size_t b = 0; b < cs.size(); ++b) {
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub(i, j) = M(cs[a][i], cs[b][j]);
            C(a, b) = sub.determinant();
        }
    return C;
}

} // namespace siglab::metrics
