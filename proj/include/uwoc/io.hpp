#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "uwoc/sim.hpp"
#include "uwoc/sweeps.hpp"

namespace uwoc {

// All CSV floats use 6 significant digits.
inline std::string format_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void write_sweep_csv(std::ostream& os, std::span<const SweepRecord> records) {
    os << "variable,value,channel,p,q_used,mode,fec_limit_db,lmax_m\n";
    for (const SweepRecord& r : records) {
        os << to_string(r.variable) << ',' << format_g6(r.value) << ',' << r.channel << ','
           << format_g6(r.p) << ',' << format_g6(r.q_used) << ',' << r.mode << ','
           << format_g6(r.fec_limit_db) << ',' << format_g6(r.lmax_m) << '\n';
    }
}

inline void write_eye_csv(std::ostream& os, const EyeTraceSet& set) {
    os << "trace_id,sample_index,amplitude\n";
    for (std::size_t t = 0; t < set.traces.size(); ++t)
        for (std::size_t i = 0; i < set.traces[t].size(); ++i)
            os << t << ',' << i << ',' << format_g6(set.traces[t][i]) << '\n';
}

inline void write_ber_estimate_csv(std::ostream& os, const BerEstimate& est) {
    os << "p,q,snr_db,n_symbols,seed,bits_pam2,bits_pam4,errors_pam2,errors_pam4,"
          "ber_pam2,ber_pam4,ber_tdhp,ber_ratio_weighted,ci95,ci95_weighted\n";
    os << format_g6(est.params.p) << ',' << format_g6(est.params.q) << ','
       << format_g6(linear_to_db(est.snr_linear)) << ',' << est.n_symbols << ',' << est.seed
       << ',' << est.bits_pam2 << ',' << est.bits_pam4 << ',' << est.bit_errors_pam2 << ','
       << est.bit_errors_pam4 << ',' << format_g6(est.ber_pam2) << ',' << format_g6(est.ber_pam4)
       << ',' << format_g6(est.ber_tdhp) << ',' << format_g6(est.ber_ratio_weighted) << ','
       << format_g6(est.ci95_halfwidth) << ',' << format_g6(est.ci95_halfwidth_weighted) << '\n';
}

} // namespace uwoc
