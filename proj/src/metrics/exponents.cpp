#include "siglab/metrics/exponents.hpp"

#include "siglab/metrics/metric_field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace siglab::metrics {

namespace {
double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }
} // namespace

bool ExponentLedger::admissible() const {
    if (!(1.0 <= q_m && q_m <= 2.0 && 2.0 <= p_m)) return false;
    if (!(1.0 <= q_m1 && q_m1 <= 2.0 && 2.0 <= p_m1)) return false;
    if (!(B >= 1.0)) return false;
    return admissibility_margin() > 0.0;
}

double ExponentLedger::admissibility_margin() const {
    return inv(p_m) + 1.0 / n - inv(q_m1);
}

void ExponentLedger::validate() const {
    std::ostringstream msg;
    if (!(1.0 <= q_m && q_m <= 2.0 && 2.0 <= p_m)) {
        msg << "ledger: need 1 <= q_m <= 2 <= p_m, got q_m = " << q_m << ", p_m = " << p_m;
        throw std::invalid_argument(msg.str());
    }
    if (!(1.0 <= q_m1 && q_m1 <= 2.0 && 2.0 <= p_m1)) {
        msg << "ledger: need 1 <= q_{m+1} <= 2 <= p_{m+1}, got q_{m+1} = " << q_m1
            << ", p_{m+1} = " << p_m1;
        throw std::invalid_argument(msg.str());
    }
    if (B < 1.0) {
        msg << "ledger: need B >= 1, got " << B;
        throw std::invalid_argument(msg.str());
    }
    if (admissibility_margin() <= 0.0) {
        msg << "ledger: 1/p_m + 1/n > 1/q_{m+1} violated: 1/" << p_m << " + 1/" << n
            << " <= 1/" << q_m1;
        throw std::invalid_argument(msg.str());
    }
}

double n_of_g(const ExponentLedger& ledger) {
    const double num = ledger.n * ledger.p_m * ledger.q_m1;
    const double den = ledger.p_m * ledger.q_m1 - ledger.n * (ledger.p_m - ledger.q_m1);
    if (den <= 0.0)
        throw std::invalid_argument("n_of_g: inadmissible ledger (denominator <= 0)");
    return num / den;
}

double n0_exponent(int n, double N) {
    if (N <= n) throw std::invalid_argument("n0_exponent: requires N > n");
    return n * N / (N - n);
}

ExponentLedger flat_ledger(int n) {
    ExponentLedger l;
    l.n = n;
    l.B = 1.0;
    return l;
}

ExponentLedger exponents_quasiconformal(int n, double p) {
    if (p <= n) {
        std::ostringstream msg;
        msg << "exponents_quasiconformal: need p > n, got p = " << p << " <= n = " << n;
        throw std::invalid_argument(msg.str());
    }
    ExponentLedger l;
    l.n = n;
    l.B = kDefaultFloor;
    if (n % 2 == 1) {
        l.p_m = 2.0 * p / (p - 1.0);
        l.q_m = 2.0;
        l.p_m1 = 2.0;
        l.q_m1 = 2.0 * p / (p + 1.0);
    } else {
        l.p_m = 2.0;
        l.q_m = 2.0;
        l.p_m1 = 2.0;
        l.q_m1 = 2.0 * p / (p + 2.0);
    }
    l.validate();
    return l;
}

double quasiconformal_p_mminus1(double p) {
    if (p <= 2.0) throw std::invalid_argument("quasiconformal_p_mminus1: need p > 2");
    return 2.0 * p / (p - 2.0);
}

ExponentLedger exponents_lp_derivable(int n, double p) {
    const double threshold = n * (n + 1.0) / 2.0;
    if (!(p > threshold)) {
        std::ostringstream msg;
        msg << "exponents_lp_derivable: p > n(n+1)/2 violated: " << p << " <= " << threshold;
        throw std::invalid_argument(msg.str());
    }
    const int m = n / 2;
    ExponentLedger l;
    l.n = n;
    l.B = kDefaultFloor;
    l.p_m = 2.0 * p / (p + m - n);
    l.q_m = 2.0 * p / (p + m);
    l.p_m1 = 2.0 * p / (p + m + 1 - n);
    l.q_m1 = 2.0 * p / (p + m + 1);
    l.validate();
    return l;
}

ExponentLedger interpolate_exponents(const ExponentLedger& L0, const ExponentLedger& L1,
                                     double t) {
    L0.validate();
    L1.validate();
    if (L0.n != L1.n)
        throw std::invalid_argument("interpolate_exponents: dimension mismatch");
    if (t == 1.0) return L0;
    if (t == 0.0) return L1;
    auto mix = [t](double a, double b) { return 1.0 / (t * inv(a) + (1.0 - t) * inv(b)); };
    ExponentLedger l;
    l.n = L0.n;
    l.p_m = mix(L0.p_m, L1.p_m);
    l.q_m = mix(L0.q_m, L1.q_m);
    l.p_m1 = mix(L0.p_m1, L1.p_m1);
    l.q_m1 = mix(L0.q_m1, L1.q_m1);
    l.B = std::min(L0.B, L1.B);
    l.validate();  // endpoints admissible => interior admissible; asserted anyway
    return l;
}

} // namespace siglab::metrics
