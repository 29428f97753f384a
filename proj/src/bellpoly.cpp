#include "qbell/bellpoly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qbell/rng.hpp"

namespace qbell {

namespace {

std::vector<double> flatten_settings(
    std::initializer_list<const MeasurementSetting*> ss) {
    std::vector<double> v;
    v.reserve(2 * ss.size());
    for (const MeasurementSetting* s : ss) {
        v.push_back(s->theta);
        v.push_back(s->phi);
    }
    return v;
}

// ---- Nelder-Mead simplex minimization -------------------------------

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, double scale,
                          double tol, int max_iters) {
    const std::size_t d = start.size();
    std::vector<std::vector<double>> pts(d + 1, start);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += scale;
    std::vector<double> vals(d + 1);
    for (std::size_t i = 0; i <= d; ++i) vals[i] = f(pts[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(d + 1);
        for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2(d + 1);
        std::vector<double> v2(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            p2[i] = pts[idx[i]];
            v2[i] = vals[idx[i]];
        }
        pts.swap(p2);
        vals.swap(v2);
    };

    bool converged = false;
    for (int iter = 0; iter < max_iters; ++iter) {
        order();
        if (vals[d] - vals[0] < tol) {
            converged = true;
            break;
        }
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        auto point_at = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j) {
                p[j] = centroid[j] + t * (pts[d][j] - centroid[j]);
            }
            return p;
        };

        std::vector<double> refl = point_at(-1.0);
        double f_refl = f(refl);
        if (f_refl < vals[0]) {
            std::vector<double> expd = point_at(-2.0);
            double f_expd = f(expd);
            if (f_expd < f_refl) {
                pts[d] = std::move(expd);
                vals[d] = f_expd;
            } else {
                pts[d] = std::move(refl);
                vals[d] = f_refl;
            }
        } else if (f_refl < vals[d - 1]) {
            pts[d] = std::move(refl);
            vals[d] = f_refl;
        } else {
            double t = (f_refl < vals[d]) ? -0.5 : 0.5;
            std::vector<double> contr = point_at(t);
            double f_contr = f(contr);
            if (f_contr < std::min(f_refl, vals[d])) {
                pts[d] = std::move(contr);
                vals[d] = f_contr;
            } else {
                for (std::size_t i = 1; i <= d; ++i) { // shrink toward best
                    for (std::size_t j = 0; j < d; ++j) {
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    }
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    return {pts[0], vals[0], converged};
}

constexpr double kValueTol = 1e-9;
constexpr int kMaxIters = 5000;
constexpr double kTieTol = 1e-6;

std::vector<double> normalize_flat(const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); i += 2) {
        MeasurementSetting s(v[i], v[i + 1]);
        out.push_back(s.theta);
        out.push_back(s.phi);
    }
    return out;
}

OptimizationResult maximize_multistart(
    const std::function<double(const std::vector<double>&)>& objective,
    std::size_t dim, int restarts, std::uint64_t seed) {
    if (restarts < 1) {
        throw std::domain_error("optimizer: restarts must be >= 1");
    }
    auto neg = [&objective](const std::vector<double>& x) {
        return -objective(x);
    };

    OptimizationResult best;
    best.seed = seed;
    best.restarts_used = restarts;
    best.value = -std::numeric_limits<double>::infinity();

    struct Candidate {
        std::vector<double> angles;
        double value;
    };
    std::vector<Candidate> candidates;

    for (int r = 0; r < restarts; ++r) {
        auto rng = derived_rng(seed, 0x6f7074u, static_cast<std::uint64_t>(r));
        std::uniform_real_distribution<double> u_theta(0.0, std::numbers::pi);
        std::uniform_real_distribution<double> u_phi(0.0, 2 * std::numbers::pi);
        std::vector<double> start(dim);
        for (std::size_t i = 0; i < dim; i += 2) {
            start[i] = u_theta(rng);
            start[i + 1] = u_phi(rng);
        }
        SimplexResult coarse = nelder_mead(neg, start, 0.5, kValueTol, kMaxIters);
        SimplexResult fine =
            nelder_mead(neg, coarse.x, 0.02, kValueTol / 10, kMaxIters);
        candidates.push_back({normalize_flat(fine.x), -fine.value});
        if (-fine.value > best.value) {
            best.value = -fine.value;
            best.angles = candidates.back().angles;
            best.converged = fine.converged;
        }
    }

    for (const Candidate& c : candidates) {
        if (best.value - c.value > kTieTol) continue;
        bool duplicate = false;
        for (const auto& kept : best.tied_optima) {
            double dist = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                dist = std::max(dist, std::abs(kept[i] - c.angles[i]));
            }
            if (dist < 1e-3) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) best.tied_optima.push_back(c.angles);
    }
    return best;
}

} // namespace

std::vector<double> ChshAngles::flatten() const {
    return flatten_settings({&a, &a_prime, &b, &b_prime});
}

ChshAngles ChshAngles::from_flat(const std::vector<double>& v) {
    if (v.size() != 8) throw std::invalid_argument("ChshAngles: need 8 values");
    return {MeasurementSetting(v[0], v[1]), MeasurementSetting(v[2], v[3]),
            MeasurementSetting(v[4], v[5]), MeasurementSetting(v[6], v[7])};
}

std::vector<double> DickeAngles::flatten() const {
    return flatten_settings(
        {&a, &a_prime, &b, &b_prime, &c, &c_prime, &d, &d_prime});
}

DickeAngles DickeAngles::from_flat(const std::vector<double>& v) {
    if (v.size() != 16) {
        throw std::invalid_argument("DickeAngles: need 16 values");
    }
    return {MeasurementSetting(v[0], v[1]),  MeasurementSetting(v[2], v[3]),
            MeasurementSetting(v[4], v[5]),  MeasurementSetting(v[6], v[7]),
            MeasurementSetting(v[8], v[9]),  MeasurementSetting(v[10], v[11]),
            MeasurementSetting(v[12], v[13]), MeasurementSetting(v[14], v[15])};
}

double chsh_closed_form(const ChshAngles& an) {
    const double ta = an.a.theta, tap = an.a_prime.theta;
    const double tb = an.b.theta, tbp = an.b_prime.theta;
    const double pa = an.a.phi, pap = an.a_prime.phi;
    const double pb = an.b.phi, pbp = an.b_prime.phi;
    return std::cos(tap) * (-std::cos(tb) + std::cos(tbp)) +
           std::cos(ta) * (std::cos(tb) + std::cos(tbp)) +
           std::cos(pa + pb) * std::sin(ta) * std::sin(tb) -
           std::cos(pap + pb) * std::sin(tap) * std::sin(tb) +
           std::cos(pa + pbp) * std::sin(ta) * std::sin(tbp) +
           std::cos(pap + pbp) * std::sin(tap) * std::sin(tbp);
}

double dicke_term_closed_form(const MeasurementSetting& a,
                              const MeasurementSetting& b,
                              const MeasurementSetting& c,
                              const MeasurementSetting& d) {
    const double ta = a.theta, tb = b.theta, tc = c.theta, td = d.theta;
    const double pa = a.phi, pb = b.phi, pc = c.phi, pd = d.phi;
    const double sa = std::sin(ta), sb = std::sin(tb), sc = std::sin(tc),
                 sd = std::sin(td);
    const double ca = std::cos(ta), cb = std::cos(tb), cc = std::cos(tc),
                 cd = std::cos(td);

    const double part_a =
        sa * (-2.0 * cc * (cd * std::cos(pa - pb) * sb +
                           cb * std::cos(pa - pd) * sd) +
              sc * (-2.0 * cb * cd * std::cos(pa - pc) +
                    (std::cos(pa + pb - pc - pd) +
                     2.0 * std::cos(pa - pb) * std::cos(pc - pd)) *
                        sb * sd));
    const double part_b =
        ca * (-2.0 * sb * (cd * std::cos(pb - pc) * sc +
                           cc * std::cos(pb - pd) * sd) +
              cb * (3.0 * cc * cd - 2.0 * std::cos(pc - pd) * sc * sd));
    return (part_a + part_b) / 3.0;
}

double dicke_bell_value(const DickeAngles& an) {
    return dicke_term_closed_form(an.a, an.b, an.c, an.d) +
           dicke_term_closed_form(an.a, an.b_prime, an.c_prime, an.d_prime) +
           dicke_term_closed_form(an.a_prime, an.b, an.c_prime, an.d) -
           dicke_term_closed_form(an.a_prime, an.b_prime, an.c, an.d_prime);
}

OptimizationResult optimize_chsh(int restarts, std::uint64_t seed) {
    auto objective = [](const std::vector<double>& v) {
        return chsh_closed_form(ChshAngles::from_flat(v));
    };
    return maximize_multistart(objective, 8, restarts, seed);
}

OptimizationResult optimize_dicke(int restarts, std::uint64_t seed) {
    auto objective = [](const std::vector<double>& v) {
        return dicke_bell_value(DickeAngles::from_flat(v));
    };
    return maximize_multistart(objective, 16, restarts, seed);
}

ChshAngles chsh_reference_angles() {
    auto s = MeasurementSetting::from_degrees;
    return {s(45.03, 0.014), s(44.98, 180.0), s(90.03, 0.036),
            s(0.027, 33.88)};
}

DickeAngles dicke_reference_angles() {
    auto s = MeasurementSetting::from_degrees;
    const double phi = 57.2234;
    return {s(107.792, phi), s(30.3962, phi), s(107.793, phi),
            s(69.0948, phi), s(30.3962, phi), s(107.792, phi),
            s(107.793, phi), s(69.0964, phi)};
}

} // namespace qbell
