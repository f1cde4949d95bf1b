#include "polycop/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "polycop/errors.hpp"

namespace polycop {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrtTwoPi = 2.5066282746310005024;
}  // namespace

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrtTwoPi; }

double std_normal_cdf(double x) {
    if (x > kNormalTailCutoff) return 1.0;
    if (x < -kNormalTailCutoff) return 0.0;
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("std_normal_quantile: p must lie in (0,1), got " + std::to_string(p));

    // Wichura (1988), algorithm AS 241, PPND16.
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r +
                 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r +
               1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r +
             3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r +
                 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r +
               6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r +
             1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r +
                 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r +
               5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r +
             1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r +
                 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r +
               1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r +
             1.0);
        val = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r +
                 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r +
               1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r +
             6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r +
                 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r +
               1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r +
             1.0);
        val = num / den;
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// 20-node Gauss-Legendre rule on [-1,1], stored as 10 symmetric pairs.
constexpr int kBvnPairs = 10;
constexpr double kBvnX[kBvnPairs] = {
    -0.9931285991850949, -0.9639719272779138, -0.9122344282513259, -0.8391169718222188,
    -0.7463319064601508, -0.6360536807265150, -0.5108670019508271, -0.3737060887154196,
    -0.2277858511416451, -0.0765265211334973};
constexpr double kBvnW[kBvnPairs] = {
    0.0176140071391521, 0.0406014298003869, 0.0626720483341091, 0.0832767415767048,
    0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183821,
    0.1491729864726037, 0.1527533871307259};

// Genz's BVND: P(X > h, Y > k) for standard bivariate normal, correlation r.
double bvn_upper(double h, double k, double r) {
    double hk = h * k;
    double bvn = 0.0;
    if (std::fabs(r) < 0.925) {
        if (r != 0.0) {
            const double hs = (h * h + k * k) / 2.0;
            const double asr = std::asin(r);
            for (int i = 0; i < kBvnPairs; ++i) {
                for (int s = -1; s <= 1; s += 2) {
                    const double sn = std::sin(asr * (s * kBvnX[i] + 1.0) / 2.0);
                    bvn += kBvnW[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
                }
            }
            bvn *= asr / (2.0 * kTwoPi);
        }
        bvn += std_normal_cdf(-h) * std_normal_cdf(-k);
        return bvn;
    }
    // |r| >= 0.925: integrate the complement against the singular direction.
    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0)
        bvn = a * std::exp(asr) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (-hk < 100.0) {
        const double b = std::sqrt(bs);
        bvn -= std::exp(-hk / 2.0) * kSqrtTwoPi * std_normal_cdf(-b / a) * b *
               (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (int i = 0; i < kBvnPairs; ++i) {
        for (int s = -1; s <= 1; s += 2) {
            const double t = a * (s * kBvnX[i] + 1.0);
            const double xs = t * t;
            const double rs = std::sqrt(1.0 - xs);
            asr = -(bs / xs + hk) / 2.0;
            if (asr > -100.0) {
                bvn += a * kBvnW[i] * std::exp(asr) *
                       (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                        (1.0 + c * xs * (1.0 + d * xs)));
            }
        }
    }
    bvn = -bvn / kTwoPi;
    if (r > 0.0) return bvn + std_normal_cdf(-std::max(h, k));
    bvn = -bvn;
    if (k > h) bvn += std_normal_cdf(k) - std_normal_cdf(h);
    return bvn;
}

}  // namespace

double bivariate_normal_cdf(double x, double y, double rho) {
    if (!(std::fabs(rho) < 1.0))
        throw DomainError("bivariate_normal_cdf: |rho| must be < 1, got " + std::to_string(rho));
    const double p = bvn_upper(-x, -y, rho);
    return std::clamp(p, 0.0, 1.0);
}

double truncated_normal_draw(double lower, double upper, double u) {
    if (!(lower < upper))
        throw DomainError("truncated_normal_draw: lower bound must be below upper bound");
    if (!(u > 0.0 && u < 1.0))
        throw DomainError("truncated_normal_draw: u must lie in (0,1)");
    const double a = std::isinf(lower) ? 0.0 : std_normal_cdf(lower);
    const double b = std::isinf(upper) ? 1.0 : std_normal_cdf(upper);
    double p = a + u * (b - a);
    p = std::clamp(p, 1e-300, 1.0 - 1e-16);
    double x = std_normal_quantile(p);
    // Saturated tails can push x outside a tiny interval; pull it back in.
    if (x <= lower) x = std::nextafter(lower, std::numeric_limits<double>::infinity());
    if (x >= upper) x = std::nextafter(upper, -std::numeric_limits<double>::infinity());
    return x;
}

namespace {

double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double del = sum;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    constexpr double kFpMin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("gamma_p: need a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("gamma_q: need a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

double chi_squared_sf(double x, double dof) {
    if (!(dof > 0.0)) throw DomainError("chi_squared_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(dof / 2.0, x / 2.0);
}

}  // namespace polycop
