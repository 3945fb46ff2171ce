#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace uwoc {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double radians(double deg) { return deg * (kPi / 180.0); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) {
    if (!(lin > 0.0))
        throw std::domain_error("linear_to_db: argument must be > 0");
    return 10.0 * std::log10(lin);
}

// Round to nearest, halves to even. std::nearbyint would do the same under
// the default FP environment, but the rounding mode there is mutable state.
inline std::int64_t round_half_even(double x) {
    const double f = std::floor(x);
    const double frac = x - f;
    const auto fi = static_cast<std::int64_t>(f);
    if (frac > 0.5) return fi + 1;
    if (frac < 0.5) return fi;
    return (fi % 2 == 0) ? fi : fi + 1;
}

// erf/erfc after W. J. Cody's rational Chebyshev approximations
// (netlib specfun CALERF), good to better than 1e-15 relative for erfc on
// the range this library uses. Self-contained so the accuracy contract does
// not depend on the platform libm.
namespace detail {

inline double calerf(double x, bool complement) {
    static constexpr double a[5] = {3.1611237438705656, 113.864154151050156,
                                    377.485237685302021, 3209.37758913846947,
                                    0.185777706184603153};
    static constexpr double b[4] = {23.6012909523441209, 244.024637934444173,
                                    1282.61652607737228, 2844.23683343917062};
    static constexpr double c[9] = {
        0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
        298.635138197400131,  881.95222124176909,  1712.04761263407058,
        2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
    static constexpr double d[8] = {15.7449261107098347, 117.693950891312499,
                                    537.181101862009858, 1621.38957456669019,
                                    3290.79923573345963, 4362.61909014324716,
                                    3439.36767414372164, 1230.33935480374942};
    static constexpr double p[6] = {0.305326634961232344, 0.360344899949804439,
                                    0.125781726111229246, 0.0160837851487422766,
                                    6.58749161529837803e-4, 0.0163153871373020978};
    static constexpr double q[5] = {2.56852019228982242, 1.87295284992346047,
                                    0.527905102951428412, 0.0605183413124413191,
                                    0.00233520497626869185};
    static constexpr double sqrpi = 0.56418958354775628695; // 1/sqrt(pi)
    static constexpr double thresh = 0.46875;
    static constexpr double xsmall = 1.11e-16;
    static constexpr double xbig = 26.543;

    const double y = std::fabs(x);
    double result;

    if (y <= thresh) {
        // erf for |x| <= 0.46875
        const double ysq = (y > xsmall) ? y * y : 0.0;
        double xnum = a[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + a[i]) * ysq;
            xden = (xden + b[i]) * ysq;
        }
        result = x * (xnum + a[3]) / (xden + b[3]);
        return complement ? 1.0 - result : result;
    }

    if (y <= 4.0) {
        // erfc for 0.46875 < |x| <= 4
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        result = (xnum + c[7]) / (xden + d[7]);
    } else if (y < xbig) {
        // erfc for |x| > 4
        const double ysq = 1.0 / (y * y);
        double xnum = p[5] * ysq;
        double xden = ysq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + p[i]) * ysq;
            xden = (xden + q[i]) * ysq;
        }
        result = ysq * (xnum + p[4]) / (xden + q[4]);
        result = (sqrpi - result) / y;
    } else {
        result = 0.0;
    }

    if (result != 0.0) {
        // Split exp(-y^2) so the argument of the large exponential is exactly
        // representable; cuts the error of the combined product.
        const double ysq = std::trunc(y * 16.0) / 16.0;
        const double del = (y - ysq) * (y + ysq);
        result *= std::exp(-ysq * ysq) * std::exp(-del);
    }

    if (!complement) {
        result = (0.5 - result) + 0.5; // erf = 1 - erfc
        return (x < 0.0) ? -result : result;
    }
    return (x < 0.0) ? 2.0 - result : result;
}

} // namespace detail

inline double erf(double x) { return detail::calerf(x, false); }
inline double erfc(double x) { return detail::calerf(x, true); }

} // namespace uwoc
