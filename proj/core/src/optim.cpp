#include "censim/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace censim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDiameterTol = 1e-8;
constexpr int kMaxIter = 10000;

// Per-coordinate smooth reparameterization z -> x honoring box bounds.
struct BoxTransform {
    std::vector<double> lower, upper;

    double to_x(double z, std::size_t i) const {
        const double lo = lower[i], hi = upper[i];
        const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
        const double zc = std::clamp(z, -700.0, 700.0);
        if (flo && fhi) return lo + (hi - lo) / (1.0 + std::exp(-zc));
        if (flo) return lo + std::exp(zc);
        if (fhi) return hi - std::exp(zc);
        return z;
    }

    double to_z(double x, std::size_t i) const {
        const double lo = lower[i], hi = upper[i];
        const bool flo = std::isfinite(lo), fhi = std::isfinite(hi);
        if (flo && fhi) {
            double frac = (x - lo) / (hi - lo);
            frac = std::clamp(frac, 1e-12, 1.0 - 1e-12);
            return std::log(frac / (1.0 - frac));
        }
        if (flo) return std::log(std::max(x - lo, 1e-12));
        if (fhi) return std::log(std::max(hi - x, 1e-12));
        return x;
    }

    std::vector<double> to_x(const std::vector<double>& z) const {
        std::vector<double> x(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) x[i] = to_x(z[i], i);
        return x;
    }
};

double simplex_diameter_x(const std::vector<std::vector<double>>& zs,
                          const BoxTransform& tr) {
    double diam = 0.0;
    std::vector<std::vector<double>> xs;
    xs.reserve(zs.size());
    for (const auto& z : zs) xs.push_back(tr.to_x(z));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < xs[i].size(); ++k) {
                const double d = xs[i][k] - xs[j][k];
                d2 += d * d;
            }
            diam = std::max(diam, std::sqrt(d2));
        }
    }
    return diam;
}

struct NmRun {
    std::vector<double> best_z;
    double best_f;
    bool converged;
    int iterations;
};

NmRun nelder_mead(const ObjectiveFn& f, const BoxTransform& tr,
                  const std::vector<double>& z0, double step, int max_iter) {
    const std::size_t k = z0.size();
    auto eval = [&](const std::vector<double>& z) {
        const double v = f(tr.to_x(z));
        return std::isnan(v) ? -kInf : v;
    };

    std::vector<std::vector<double>> zs(k + 1, z0);
    for (std::size_t i = 0; i < k; ++i) zs[i + 1][i] += step;
    std::vector<double> fv(k + 1);
    for (std::size_t i = 0; i <= k; ++i) fv[i] = eval(zs[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(k + 1);
        for (std::size_t i = 0; i <= k; ++i) idx[i] = i;
        // Descending by value: idx[0] is the best vertex.
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] > fv[b]; });
        std::vector<std::vector<double>> zs2(k + 1);
        std::vector<double> fv2(k + 1);
        for (std::size_t i = 0; i <= k; ++i) {
            zs2[i] = zs[idx[i]];
            fv2[i] = fv[idx[i]];
        }
        zs.swap(zs2);
        fv.swap(fv2);
    };

    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        order();
        if (simplex_diameter_x(zs, tr) < kDiameterTol) {
            converged = true;
            break;
        }
        // Centroid of all but the worst vertex.
        std::vector<double> cen(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) cen[j] += zs[i][j];
        }
        for (auto& c : cen) c /= static_cast<double>(k);

        auto blend = [&](double coef) {
            std::vector<double> z(k);
            for (std::size_t j = 0; j < k; ++j) {
                z[j] = cen[j] + coef * (cen[j] - zs[k][j]);
            }
            return z;
        };

        const auto zr = blend(1.0); // reflection
        const double fr = eval(zr);
        if (fr > fv[0]) {
            const auto ze = blend(2.0); // expansion
            const double fe = eval(ze);
            if (fe > fr) {
                zs[k] = ze; fv[k] = fe;
            } else {
                zs[k] = zr; fv[k] = fr;
            }
        } else if (fr > fv[k - 1]) {
            zs[k] = zr; fv[k] = fr;
        } else {
            const auto zc = blend(fr > fv[k] ? 0.5 : -0.5); // contraction
            const double fc = eval(zc);
            if (fc > std::max(fr, fv[k])) {
                zs[k] = zc; fv[k] = fc;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 1; i <= k; ++i) {
                    for (std::size_t j = 0; j < k; ++j) {
                        zs[i][j] = zs[0][j] + 0.5 * (zs[i][j] - zs[0][j]);
                    }
                    fv[i] = eval(zs[i]);
                }
            }
        }
    }
    order();
    return {zs[0], fv[0], converged, iter};
}

} // namespace

OptimResult maximize(const ObjectiveFn& f, const std::vector<double>& init,
                     const std::vector<double>& lower,
                     const std::vector<double>& upper) {
    const std::size_t k = init.size();
    if (k == 0) throw std::invalid_argument("maximize: empty initial point");
    BoxTransform tr;
    tr.lower = lower.empty() ? std::vector<double>(k, -kInf) : lower;
    tr.upper = upper.empty() ? std::vector<double>(k, kInf) : upper;
    if (tr.lower.size() != k || tr.upper.size() != k) {
        throw std::invalid_argument("maximize: bounds dimension mismatch");
    }

    std::vector<double> z0(k);
    for (std::size_t i = 0; i < k; ++i) z0[i] = tr.to_z(init[i], i);

    const double f_init = f(init);

    const NmRun first = nelder_mead(f, tr, z0, 0.25, kMaxIter);
    // One restart from the incumbent with a smaller simplex to polish, within
    // the remaining iteration budget.
    const NmRun second = nelder_mead(f, tr, first.best_z, 0.02,
                                     std::max(0, kMaxIter - first.iterations));
    const NmRun& best = (second.best_f >= first.best_f) ? second : first;

    OptimResult result;
    result.iterations = first.iterations + second.iterations;
    result.converged = second.converged || first.converged;
    if (best.best_f >= f_init || std::isnan(f_init)) {
        result.argmax = tr.to_x(best.best_z);
        result.value = best.best_f;
    } else {
        result.argmax = init;
        result.value = f_init;
    }
    return result;
}

std::vector<std::vector<double>> hessian_fd(const ObjectiveFn& f,
                                            const std::vector<double>& point,
                                            double step) {
    const std::size_t k = point.size();
    std::vector<double> h(k);
    for (std::size_t i = 0; i < k; ++i) {
        h[i] = step > 0.0 ? step : std::max(1e-5, 1e-4 * std::fabs(point[i]));
    }
    std::vector<std::vector<double>> hess(k, std::vector<double>(k, 0.0));
    const double f0 = f(point);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            std::vector<double> p = point;
            if (i == j) {
                p[i] = point[i] + h[i];
                const double fp = f(p);
                p[i] = point[i] - h[i];
                const double fm = f(p);
                hess[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
            } else {
                p[i] = point[i] + h[i]; p[j] = point[j] + h[j];
                const double fpp = f(p);
                p[j] = point[j] - h[j];
                const double fpm = f(p);
                p[i] = point[i] - h[i]; p[j] = point[j] + h[j];
                const double fmp = f(p);
                p[j] = point[j] - h[j];
                const double fmm = f(p);
                hess[i][j] = hess[j][i] =
                    (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            }
        }
    }
    return hess;
}

bool invert_matrix(const std::vector<std::vector<double>>& m,
                   std::vector<std::vector<double>>& out) {
    const std::size_t k = m.size();
    std::vector<std::vector<double>> a = m;
    out.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        if (a[i].size() != k) return false;
        out[i][i] = 1.0;
    }
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        if (!(std::fabs(a[piv][col]) > 1e-300)) return false;
        std::swap(a[piv], a[col]);
        std::swap(out[piv], out[col]);
        const double d = a[col][col];
        for (std::size_t c = 0; c < k; ++c) {
            a[col][c] /= d;
            out[col][c] /= d;
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c < k; ++c) {
                a[r][c] -= factor * a[col][c];
                out[r][c] -= factor * out[col][c];
            }
        }
    }
    for (const auto& row : out) {
        for (double v : row) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

} // namespace censim
