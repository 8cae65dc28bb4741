#pragma once

#include <string>

namespace siglab::metrics {

/// The integrability data attached to a rough structure: the exponent pairs
/// (p_k, q_k) for the two middle degrees k = m, m+1, the metric floor B and
/// the dimension.  Admissibility means 1 <= q_k <= 2 <= p_k for both pairs
/// and 1/p_m + 1/n > 1/q_{m+1}; n_of_g is finite exactly in that case.
struct ExponentLedger {
    double p_m = 2.0;
    double q_m = 2.0;
    double p_m1 = 2.0;   // p_{m+1}
    double q_m1 = 2.0;   // q_{m+1}
    double B = 1.0;
    int n = 0;

    bool admissible() const;
    /// Distance of 1/p_m + 1/n - 1/q_{m+1} from zero (positive = admissible).
    double admissibility_margin() const;
    /// Throws std::invalid_argument naming the violated relation.
    void validate() const;
};

/// n(g) = n p_m q_{m+1} / (p_m q_{m+1} - n (p_m - q_{m+1})).
/// Throws if the denominator is <= 0 (inadmissible ledger).
double n_of_g(const ExponentLedger& ledger);

/// Lemma-style exponent nN / (N - n); requires N > n.
double n0_exponent(int n, double N);

/// The ledger of the flat/smooth reference: all exponents 2.
ExponentLedger flat_ledger(int n);

/// Quasi-conformal structure with derivative in L^p, p > n.
/// Odd n:  p_m = 2p/(p-1), q_m = p_{m+1} = 2, q_{m+1} = 2p/(p+1).
/// Even n: p_m = q_m = p_{m+1} = 2, q_{m+1} = 2p/(p+2) (and p_{m-1} = 2p/(p-2),
/// reported via the returned pair accessors below when needed).
ExponentLedger exponents_quasiconformal(int n, double p);

/// Even-case auxiliary exponent p_{m-1} = 2p/(p-2).
double quasiconformal_p_mminus1(double p);

/// L^p-derivable structure: p_k = 2p/(p+k-n), q_k = 2p/(p+k) at k = m, m+1.
/// Requires p > n(n+1)/2; throws naming the threshold otherwise.
ExponentLedger exponents_lp_derivable(int n, double p);

/// Reciprocal-affine interpolation, printed formula verbatim:
/// 1/p_k(t) = t/p_k^0 + (1-t)/p_k^1 (so t = 1 reproduces L0 and t = 0
/// reproduces L1); endpoints are returned verbatim.  Result admissibility is
/// asserted, not assumed.
ExponentLedger interpolate_exponents(const ExponentLedger& L0, const ExponentLedger& L1,
                                     double t);

} // namespace siglab::metrics
