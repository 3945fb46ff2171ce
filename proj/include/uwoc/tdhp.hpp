#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uwoc/errors.hpp"
#include "uwoc/math.hpp"

namespace uwoc {

// Hard-decision FEC threshold used throughout: the SNR where the raw BER
// crosses this value is reported as the FEC limit.
inline constexpr double kDefaultFecThreshold = 3.4e-3;

// The two knobs of a time-domain hybrid PAM frame: p is the fraction of
// PAM4 symbols, q shifts power from the PAM2 slots (scaled by 1-q) to the
// PAM4 slots (scaled by 1+q).
struct TdhpParams {
    double p = 0.0;
    double q = 0.0;

    void validate() const {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("TdhpParams: p must be in [0, 1]");
        if (!(q >= 0.0 && q <= 1.0))
            throw std::domain_error("TdhpParams: q must be in [0, 1]");
    }

    // q only has meaning when both formats are present; a pure PAM2 or pure
    // PAM4 frame runs at its unscaled power.
    double effective_q() const { return (p == 0.0 || p == 1.0) ? 0.0 : q; }
};

inline double ber_pam2(double snr_linear, double q) {
    if (!(snr_linear >= 0.0))
        throw std::domain_error("ber_pam2: snr must be >= 0");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("ber_pam2: q must be in [0, 1]");
    return 0.5 * erfc(std::sqrt(0.5 * snr_linear * (1.0 - q)));
}

inline double ber_pam4(double snr_linear, double q) {
    if (!(snr_linear >= 0.0))
        throw std::domain_error("ber_pam4: snr must be >= 0");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("ber_pam4: q must be in [0, 1]");
    return 0.375 * erfc(std::sqrt(snr_linear * (1.0 + q) / 14.0));
}

// Mixture BER: the per-format BERs weighted by the PAM4 occurrence ratio p.
inline double ber_tdhp(double snr_linear, TdhpParams params) {
    params.validate();
    const double q = params.effective_q();
    if (params.p == 0.0) return ber_pam2(snr_linear, q);
    if (params.p == 1.0) return ber_pam4(snr_linear, q);
    return params.p * ber_pam4(snr_linear, q) + (1.0 - params.p) * ber_pam2(snr_linear, q);
}

// Large-SNR limit of ber_tdhp. Nonzero only when the PAM2 slots carry no
// power (q = 1) while still being present (p < 1): those bits are coin flips.
inline double ber_tdhp_floor(TdhpParams params) {
    params.validate();
    return (params.effective_q() >= 1.0) ? 0.5 * (1.0 - params.p) : 0.0;
}

// Bits per symbol of the hybrid frame: PAM2 carries 1, PAM4 carries 2.
inline double bits_per_symbol(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("bits_per_symbol: p must be in [0, 1]");
    return 1.0 + p;
}

struct FecSearchResult {
    double snr_linear = 0.0;
    double snr_db = 0.0;
    double threshold = 0.0;
    bool converged = false;
};

// SNR at which ber_tdhp crosses `threshold`, by bisection in dB. The BER is
// strictly decreasing in SNR whenever the threshold is reachable, so the
// bracket [-10, 60] dB is grown (doubling its width) until it straddles the
// crossing, then halved down to tol_db.
inline FecSearchResult fec_limit_snr(TdhpParams params,
                                     double threshold = kDefaultFecThreshold,
                                     double tol_db = 0.01) {
    params.validate();
    if (!(tol_db > 0.0))
        throw std::domain_error("fec_limit_snr: tol_db must be > 0");
    const double ber0 = ber_tdhp(0.0, params);
    if (!(threshold > 0.0 && threshold < ber0))
        throw std::domain_error("fec_limit_snr: threshold must lie in (0, BER(snr=0))");
    const double floor = ber_tdhp_floor(params);
    if (threshold <= floor) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "fec_limit_snr: threshold %.6g unreachable, BER floor is %.6g",
                      threshold, floor);
        throw NoSolutionError(msg, floor);
    }

    double lo = -10.0, hi = 60.0;
    for (int i = 0; ber_tdhp(db_to_linear(lo), params) <= threshold; ++i) {
        if (i > 60) throw std::runtime_error("fec_limit_snr: failed to bracket");
        lo -= (hi - lo);
    }
    for (int i = 0; ber_tdhp(db_to_linear(hi), params) >= threshold; ++i) {
        if (i > 60) throw std::runtime_error("fec_limit_snr: failed to bracket");
        hi += (hi - lo);
    }
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        if (ber_tdhp(db_to_linear(mid), params) > threshold)
            lo = mid;
        else
            hi = mid;
    }
    const double snr_db = 0.5 * (lo + hi);
    return {db_to_linear(snr_db), snr_db, threshold, true};
}

struct QOptimum {
    double q_star = 0.0;
    double snr_at_fec_limit_db = 0.0;
    // Every (q, FEC-limit dB) pair evaluated; unreachable entries carry NaN.
    std::vector<std::pair<double, double>> grid;
};

// q = 0.0 .. 0.9 in steps of 0.1.
inline std::vector<double> default_q_grid() {
    std::vector<double> g(10);
    for (int i = 0; i < 10; ++i) g[i] = i / 10.0;
    return g;
}

// Picks the q minimizing the FEC-limit SNR for a fixed p over a grid.
// Unreachable grid points are skipped; ties go to the smallest q. With
// `refine` a golden-section pass narrows around the discrete minimum --
// off by default so grid-resolution results stay exact.
inline QOptimum optimize_q(double p, double threshold = kDefaultFecThreshold,
                           std::span<const double> q_grid = {}, bool refine = false,
                           double tol_db = 0.01) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("optimize_q: p must be in (0, 1)");
    std::vector<double> default_grid;
    if (q_grid.empty()) {
        default_grid = default_q_grid();
        q_grid = default_grid;
    }
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        if (!(q_grid[i] >= 0.0 && q_grid[i] <= 1.0))
            throw std::domain_error("optimize_q: grid values must be in [0, 1]");
        if (i > 0 && !(q_grid[i] > q_grid[i - 1]))
            throw std::domain_error("optimize_q: grid must be strictly increasing");
    }

    QOptimum result;
    result.grid.reserve(q_grid.size());
    std::size_t best = q_grid.size();
    double best_db = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        double db = std::numeric_limits<double>::quiet_NaN();
        try {
            db = fec_limit_snr({p, q_grid[i]}, threshold, tol_db).snr_db;
        } catch (const NoSolutionError&) {
            // flagged as NaN in the grid, skipped for the minimum
        }
        result.grid.emplace_back(q_grid[i], db);
        if (db < best_db) {
            best_db = db;
            best = i;
        }
    }
    if (best == q_grid.size())
        throw NoSolutionError("optimize_q: no grid point reaches the threshold",
                              0.5 * (1.0 - p));
    result.q_star = q_grid[best];
    result.snr_at_fec_limit_db = best_db;

    if (refine && q_grid.size() > 1) {
        double a = (best > 0) ? q_grid[best - 1] : q_grid[best];
        double b = (best + 1 < q_grid.size()) ? q_grid[best + 1] : q_grid[best];
        if (b > a) {
            const auto eval = [&](double q) {
                try {
                    return fec_limit_snr({p, q}, threshold, tol_db).snr_db;
                } catch (const NoSolutionError&) {
                    return std::numeric_limits<double>::infinity();
                }
            };
            const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
            double x1 = b - gr * (b - a);
            double x2 = a + gr * (b - a);
            double f1 = eval(x1), f2 = eval(x2);
            while (b - a > 1e-4) {
                if (f1 < f2) {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = b - gr * (b - a);
                    f1 = eval(x1);
                } else {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = a + gr * (b - a);
                    f2 = eval(x2);
                }
            }
            const double q_ref = 0.5 * (a + b);
            const double f_ref = eval(q_ref);
            if (f_ref < result.snr_at_fec_limit_db) {
                result.q_star = q_ref;
                result.snr_at_fec_limit_db = f_ref;
            }
        }
    }
    return result;
}

} // namespace uwoc
