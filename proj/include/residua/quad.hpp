#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "residua/polynomial.hpp"

namespace residua {

using Complex = std::complex<double>;

/// RESIDUE_THREADS caps worker count; unset means hardware concurrency.
inline int max_threads() {
    if (const char* s = std::getenv("RESIDUE_THREADS")) {
        int v = std::atoi(s);
        if (v >= 1) return v;
    }
    unsigned h = std::thread::hardware_concurrency();
    return h ? static_cast<int>(h) : 1;
}

namespace quaddetail {

/// Flattened polynomial for tight inner loops: one contiguous exponent block
/// per term, evaluated without allocation.
struct CompiledPoly {
    int nvars = 0;
    std::vector<std::uint32_t> exps;  // nvars entries per term
    std::vector<Complex> coeffs;

    static CompiledPoly from(const MultiPoly& p) {
        CompiledPoly c;
        c.nvars = p.nvars();
        for (const auto& [m, coef] : p.terms()) {
            for (int v = 0; v < c.nvars; ++v) c.exps.push_back(m.e[static_cast<std::size_t>(v)]);
            c.coeffs.push_back(coef.to_complex());
        }
        return c;
    }

    Complex eval(std::span<const Complex> z) const {
        Complex total{0.0, 0.0};
        std::size_t at = 0;
        for (std::size_t t = 0; t < coeffs.size(); ++t) {
            Complex v = coeffs[t];
            for (int i = 0; i < nvars; ++i, ++at)
                for (std::uint32_t k = 0; k < exps[at]; ++k) v *= z[static_cast<std::size_t>(i)];
            total += v;
        }
        return total;
    }
};

constexpr std::size_t kChunk = 4096;

/// Fixed-shape reduction: chunk partial sums are computed independently and
/// combined in index order, so the result is bit-identical for every thread
/// count.
template <class F>
Complex deterministic_sum(std::size_t count, F&& term) {
    std::size_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<Complex> partial(chunks, Complex{0.0, 0.0});
    auto run_chunk = [&](std::size_t c) {
        Complex s{0.0, 0.0};
        std::size_t lo = c * kChunk, hi = std::min(count, lo + kChunk);
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[c] = s;
    };
    int workers = std::min<int>(max_threads(), static_cast<int>(chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::future<void>> fs;
        for (int w = 0; w < workers; ++w)
            fs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t c = static_cast<std::size_t>(w); c < chunks;
                     c += static_cast<std::size_t>(workers))
                    run_chunk(c);
            }));
        for (auto& f : fs) f.get();
    }
    Complex total{0.0, 0.0};
    for (const auto& s : partial) total += s;
    return total;
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = t;
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

inline Complex det3(const Complex m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline void check_finite(const Complex& v) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::runtime_error("quad: non-finite sample, the cycle touches a singularity");
}

}  // namespace quaddetail

/// One dz_I ^ dzbar_J component of a numeric form; masks are variable sets.
struct FormComponent {
    std::uint32_t holo = 0;
    std::uint32_t anti = 0;
    Complex value{0.0, 0.0};
};

/// Numeric shadow of a differential form: an evaluator producing the
/// components at a point.
struct NumericForm {
    int nvars = 0;
    std::function<std::vector<FormComponent>(std::span<const Complex>)> eval;
};

/// Integration cycle: a real n-torus {|z_i| = r_i} with one angle grid per
/// variable, or the sphere S^{2n-1} of one radius (circle for n = 1, Hopf
/// coordinates for n = 2).
struct ParametrizedCycle {
    enum class Kind { torus, sphere };
    Kind kind = Kind::torus;
    int nvars = 0;
    std::vector<double> radii;
    std::vector<int> grid;  // torus: one per angle; sphere n=2: {eta, xi1, xi2}
    int orientation = 1;

    static ParametrizedCycle torus(std::vector<double> r, std::vector<int> g) {
        ParametrizedCycle c;
        c.kind = Kind::torus;
        c.nvars = static_cast<int>(r.size());
        c.radii = std::move(r);
        c.grid = std::move(g);
        c.validate();
        return c;
    }

    static ParametrizedCycle sphere(int nvars, double r, std::vector<int> g) {
        ParametrizedCycle c;
        c.kind = Kind::sphere;
        c.nvars = nvars;
        c.radii = {r};
        c.grid = std::move(g);
        c.validate();
        return c;
    }

    void validate() const {
        for (double r : radii)
            if (!(r > 0.0)) throw std::invalid_argument("ParametrizedCycle: radii must be positive");
        for (int g : grid)
            if (g < 8) throw std::invalid_argument("ParametrizedCycle: grid sizes must be >= 8");
        if (kind == Kind::torus && (static_cast<int>(grid.size()) != nvars ||
                                    static_cast<int>(radii.size()) != nvars))
            throw std::invalid_argument("ParametrizedCycle: torus needs one radius and grid per variable");
        if (kind == Kind::sphere) {
            if (nvars == 1 && grid.size() != 1)
                throw std::invalid_argument("ParametrizedCycle: circle needs one grid size");
            if (nvars == 2 && grid.size() != 3)
                throw std::invalid_argument("ParametrizedCycle: S^3 needs {eta, xi1, xi2} grid sizes");
            if (nvars > 2)
                throw std::invalid_argument("ParametrizedCycle: spheres only implemented for n <= 2");
        }
    }

    int dim() const { return kind == Kind::torus ? nvars : 2 * nvars - 1; }
};

/// Pull a form back along the cycle parametrization and integrate: trapezoid
/// on the periodic angles (spectrally accurate), Gauss-Legendre on the polar
/// coordinate of the Hopf chart.
inline Complex integrate_form(const NumericForm& form, const ParametrizedCycle& cycle) {
    using namespace quaddetail;
    if (form.nvars != cycle.nvars)
        throw std::invalid_argument("integrate_form: form and cycle dimension mismatch");
    const int n = cycle.nvars;
    const int d = cycle.dim();
    if (d < 1 || d > 3)
        throw std::invalid_argument("integrate_form: cycles of dimension 1..3 only");
    const double two_pi = 2.0 * std::numbers::pi;

    // Component pullback: rows are the parameter gradients of z_i (for dz_i)
    // and conj gradients (for dzbar_j), stacked I ascending then J ascending.
    auto pullback = [&](std::span<const Complex> z, std::span<const Complex> jac) {
        auto comps = form.eval(z);
        Complex total{0.0, 0.0};
        for (const auto& comp : comps) {
            if (std::popcount(comp.holo) + std::popcount(comp.anti) != d) continue;
            if (comp.value == Complex{0.0, 0.0}) continue;
            check_finite(comp.value);
            Complex rows[3][3];
            int r = 0;
            for (std::uint32_t m = comp.holo; m && r < 3; m &= m - 1, ++r) {
                int i = std::countr_zero(m);
                for (int a = 0; a < d; ++a) rows[r][a] = jac[static_cast<std::size_t>(i * d + a)];
            }
            for (std::uint32_t m = comp.anti; m && r < 3; m &= m - 1, ++r) {
                int j = std::countr_zero(m);
                for (int a = 0; a < d; ++a)
                    rows[r][a] = std::conj(jac[static_cast<std::size_t>(j * d + a)]);
            }
            Complex det;
            if (d == 1)
                det = rows[0][0];
            else if (d == 2)
                det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
            else
                det = det3(rows);
            total += comp.value * det;
        }
        return total;
    };

    Complex result{0.0, 0.0};
    if (cycle.kind == ParametrizedCycle::Kind::torus) {
        std::size_t count = 1;
        for (int g : cycle.grid) count *= static_cast<std::size_t>(g);
        double weight = 1.0;
        for (int g : cycle.grid) weight *= two_pi / g;
        result = deterministic_sum(count, [&](std::size_t idx) {
            std::vector<Complex> z(static_cast<std::size_t>(n));
            std::vector<Complex> jac(static_cast<std::size_t>(n * d), Complex{0.0, 0.0});
            std::size_t rem = idx;
            for (int v = 0; v < n; ++v) {
                int g = cycle.grid[static_cast<std::size_t>(v)];
                double theta = two_pi * static_cast<double>(rem % static_cast<std::size_t>(g)) / g;
                rem /= static_cast<std::size_t>(g);
                z[static_cast<std::size_t>(v)] =
                    cycle.radii[static_cast<std::size_t>(v)] * std::polar(1.0, theta);
                jac[static_cast<std::size_t>(v * d + v)] = Complex{0.0, 1.0} * z[static_cast<std::size_t>(v)];
            }
            return pullback(z, jac);
        });
        result *= weight;
    } else if (n == 1) {
        int g = cycle.grid[0];
        double r = cycle.radii[0];
        result = deterministic_sum(static_cast<std::size_t>(g), [&](std::size_t idx) {
            double theta = two_pi * static_cast<double>(idx) / g;
            Complex z0 = r * std::polar(1.0, theta);
            Complex jac = Complex{0.0, 1.0} * z0;
            std::vector<Complex> z{z0};
            std::vector<Complex> j{jac};
            return pullback(z, j);
        });
        result *= two_pi / g;
    } else {
        // Hopf chart: z1 = R cos(eta) e^{i xi1}, z2 = R sin(eta) e^{i xi2},
        // eta in [0, pi/2], xi_k in [0, 2 pi).
        int ge = cycle.grid[0], g1 = cycle.grid[1], g2 = cycle.grid[2];
        double R = cycle.radii[0];
        std::vector<double> gx, gw;
        gauss_legendre(ge, gx, gw);
        std::size_t count = static_cast<std::size_t>(ge) * static_cast<std::size_t>(g1) *
                            static_cast<std::size_t>(g2);
        result = deterministic_sum(count, [&](std::size_t idx) {
            std::size_t ie = idx % static_cast<std::size_t>(ge);
            std::size_t rest = idx / static_cast<std::size_t>(ge);
            std::size_t i1 = rest % static_cast<std::size_t>(g1);
            std::size_t i2 = rest / static_cast<std::size_t>(g1);
            double eta = (gx[ie] + 1.0) * (std::numbers::pi / 4.0);
            double weta = gw[ie] * (std::numbers::pi / 4.0);
            double xi1 = two_pi * static_cast<double>(i1) / g1;
            double xi2 = two_pi * static_cast<double>(i2) / g2;
            Complex e1 = std::polar(1.0, xi1), e2 = std::polar(1.0, xi2);
            Complex z1 = R * std::cos(eta) * e1;
            Complex z2 = R * std::sin(eta) * e2;
            // rows of the Jacobian: d/d eta, d/d xi1, d/d xi2
            std::vector<Complex> jac{-R * std::sin(eta) * e1, Complex{0.0, 1.0} * z1, {0.0, 0.0},
                                     R * std::cos(eta) * e2, {0.0, 0.0}, Complex{0.0, 1.0} * z2};
            std::vector<Complex> z{z1, z2};
            return weta * pullback(z, jac);
        });
        result *= (two_pi / g1) * (two_pi / g2);
    }
    return static_cast<double>(cycle.orientation) * result;
}

/// Eq.-(1)-style torus residue for the monomial tuple z_i^{m_i}:
/// (1/2 pi i)^n of the integral of h / z^m over {|z_i| = r_i}. Pulled back,
/// the integrand is the mean of h(z) * prod r_i^{1-m_i} e^{i(1-m_i) theta_i}.
inline Complex torus_residue(std::span<const int> powers, const MultiPoly& h,
                             std::span<const double> radii, int grid) {
    const int n = h.nvars();
    if (static_cast<int>(powers.size()) != n || static_cast<int>(radii.size()) != n)
        throw std::invalid_argument("torus_residue: power/radius count mismatch");
    if (grid < 8) throw std::invalid_argument("torus_residue: grid must be >= 8");
    const double two_pi = 2.0 * std::numbers::pi;
    quaddetail::CompiledPoly hc = quaddetail::CompiledPoly::from(h);
    std::size_t count = 1;
    for (int v = 0; v < n; ++v) count *= static_cast<std::size_t>(grid);
    Complex sum = quaddetail::deterministic_sum(count, [&](std::size_t idx) {
        Complex z[8];
        Complex factor{1.0, 0.0};
        std::size_t rem = idx;
        for (int v = 0; v < n; ++v) {
            double theta = two_pi * static_cast<double>(rem % static_cast<std::size_t>(grid)) / grid;
            rem /= static_cast<std::size_t>(grid);
            double r = radii[static_cast<std::size_t>(v)];
            z[v] = r * std::polar(1.0, theta);
            int k = 1 - powers[static_cast<std::size_t>(v)];
            factor *= std::pow(r, k) * std::polar(1.0, k * theta);
        }
        Complex val = hc.eval(std::span<const Complex>(z, static_cast<std::size_t>(n))) * factor;
        quaddetail::check_finite(val);
        return val;
    });
    return sum / static_cast<double>(count);
}

namespace quaddetail {

/// Raw (uncalibrated) boundary integral of the Bochner-Martinelli
/// representative: integral over the sphere of
///   h * sum_j (-1)^{j-1} fbar_j dfbar_{(j)} ^ dz / |f|^{2n}.
inline Complex sphere_bm_raw(std::span<const MultiPoly> f, const MultiPoly& h, double radius,
                             int grid_eta, int grid_xi) {
    const int n = static_cast<int>(f.size());
    std::vector<CompiledPoly> fc, dfc;
    for (int j = 0; j < n; ++j) fc.push_back(CompiledPoly::from(f[static_cast<std::size_t>(j)]));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            dfc.push_back(CompiledPoly::from(f[static_cast<std::size_t>(j)].derivative(k)));
    CompiledPoly hc = CompiledPoly::from(h);

    NumericForm form;
    form.nvars = n;
    if (n == 1) {
        form.eval = [&fc, &hc](std::span<const Complex> z) {
            Complex fv = fc[0].eval(z);
            Complex denom = std::norm(fv);
            std::vector<FormComponent> comps;
            comps.push_back({1u, 0u, hc.eval(z) * std::conj(fv) / denom});
            return comps;
        };
    } else {
        form.eval = [&fc, &dfc, &hc, n](std::span<const Complex> z) {
            Complex fv0 = fc[0].eval(z), fv1 = fc[1].eval(z);
            double denom = std::norm(fv0) + std::norm(fv1);
            Complex scale = hc.eval(z) / std::pow(denom, n);
            // a[j][k] = conj(d f_j / d z_k)(z) is the dzbar_k coefficient of dfbar_j.
            Complex a11 = std::conj(dfc[0].eval(z)), a12 = std::conj(dfc[1].eval(z));
            Complex a21 = std::conj(dfc[2].eval(z)), a22 = std::conj(dfc[3].eval(z));
            Complex fb1 = std::conj(fv0), fb2 = std::conj(fv1);
            std::vector<FormComponent> comps;
            comps.push_back({3u, 1u, scale * (fb1 * a21 - fb2 * a11)});
            comps.push_back({3u, 2u, scale * (fb1 * a22 - fb2 * a12)});
            return comps;
        };
    }

    ParametrizedCycle cycle =
        n == 1 ? ParametrizedCycle::sphere(1, radius, {grid_xi})
               : ParametrizedCycle::sphere(2, radius, {grid_eta, grid_xi, grid_xi});
    return integrate_form(form, cycle);
}

}  // namespace quaddetail

/// Calibration constant kappa_n fixed by requiring the identity tuple
/// f = (z_1..z_n), h = 1 to integrate to exactly +1; cached per grid. This
/// pins the (1/2 pi i)^n-and-orientation convention once for all tuples.
inline Complex sphere_calibration(int n, int grid_eta = 64, int grid_xi = 96) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, Complex> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, grid_eta, grid_xi);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<MultiPoly> id;
    for (int v = 0; v < n; ++v) id.push_back(MultiPoly::variable(n, v));
    Complex raw = quaddetail::sphere_bm_raw(id, MultiPoly::one(n), 1.0, grid_eta, grid_xi);
    Complex kappa = 1.0 / raw;
    cache.emplace(key, kappa);
    return kappa;
}

/// Boundary-integral residue of h dz against the CI tuple f over a sphere
/// around the origin, calibrated so the identity tuple gives +1. n <= 2.
inline Complex sphere_bm_residue(std::span<const MultiPoly> f, const MultiPoly& h, double radius,
                                 int grid_eta = 64, int grid_xi = 96) {
    const int n = static_cast<int>(f.size());
    if (n < 1 || n > 2)
        throw std::invalid_argument("sphere_bm_residue: implemented for n = 1, 2 only");
    if (f[0].nvars() != n || h.nvars() != n)
        throw std::invalid_argument("sphere_bm_residue: tuple size must equal variable count");
    Complex kappa = sphere_calibration(n, grid_eta, grid_xi);
    return kappa * quaddetail::sphere_bm_raw(f, h, radius, grid_eta, grid_xi);
}

}  // namespace residua
