#include "rgas/collision_ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace rgas {

namespace {

using GL24 = boost::math::quadrature::gauss<double, 24>;
using GL48 = boost::math::quadrature::gauss<double, 48>;

// Full abscissa/weight arrays (boost stores the non-negative half).
void gl_nodes(int n, double a, double b, std::vector<double>& xs, std::vector<double>& ws) {
    const auto fill = [&](const auto& half_x, const auto& half_w) {
        xs.clear();
        ws.clear();
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = half_x.size(); i-- > 0;) {
            if (half_x[i] == 0.0) continue;
            xs.push_back(mid - half * half_x[i]);
            ws.push_back(half * half_w[i]);
        }
        for (std::size_t i = 0; i < half_x.size(); ++i) {
            if (half_x[i] == 0.0) {
                xs.push_back(mid);
                ws.push_back(half * half_w[i]);
                continue;
            }
            xs.push_back(mid + half * half_x[i]);
            ws.push_back(half * half_w[i]);
        }
    };
    if (n <= 24)
        fill(GL24::abscissa(), GL24::weights());
    else
        fill(GL48::abscissa(), GL48::weights());
}

struct SphereNode {
    Vec3 dir, e1, e2;
    double weight;
};

// Product grid on S^2: Gauss-Legendre in cos(theta), uniform in phi.
std::vector<SphereNode> sphere_grid(int n_theta, int n_phi) {
    std::vector<double> mus, ws;
    gl_nodes(n_theta <= 24 ? 24 : 48, -1.0, 1.0, mus, ws);
    std::vector<SphereNode> nodes;
    nodes.reserve(mus.size() * static_cast<std::size_t>(n_phi));
    for (std::size_t i = 0; i < mus.size(); ++i) {
        const double mu = mus[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
            SphereNode n;
            n.dir = {s * std::cos(phi), s * std::sin(phi), mu};
            // orthonormal frame (e1, e2, dir)
            const Vec3 seed = std::fabs(n.dir.x) < 0.7 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
            Vec3 u = seed - n.dir * dot(seed, n.dir);
            u = u / norm(u);
            n.e1 = u;
            n.e2 = {n.dir.y * u.z - n.dir.z * u.y, n.dir.z * u.x - n.dir.x * u.z,
                    n.dir.x * u.y - n.dir.y * u.x};
            n.weight = ws[i] * (2.0 * M_PI / n_phi);
            nodes.push_back(n);
        }
    }
    return nodes;
}

void parallel_rows(std::size_t n, const std::function<void(std::size_t, std::size_t)>& work) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw == 1 || n < 256) {
        work(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + hw - 1) / hw;
    for (unsigned t = 0; t < hw; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
}

} // namespace

KineticDensity semigroup_T(const KineticDensity& f, double t, const RateCache& rates) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup_T: t must be >= 0");
    KineticDensity out = f;
    const std::size_t nvc = f.velocity_cells();
    if (f.mode() == KineticDensity::Mode::VelocityOnly) {
        for (std::size_t i = 0; i < nvc; ++i)
            out.values()[i] = f.values()[i] * std::exp(-t * rates.lambda(f.velocity_center(i)));
        return out;
    }
    // PhaseSpace: attenuate and shift each velocity slice by -t v periodically
    const int ns = f.ns();
    const double hs = 1.0 / ns;
    for (std::size_t vi = 0; vi < nvc; ++vi) {
        const Vec3 v = f.velocity_center(vi);
        const double decay = std::exp(-t * rates.lambda(v));
        const Vec3 shift = v * (-t);
        for (int sx = 0; sx < ns; ++sx)
            for (int sy = 0; sy < ns; ++sy)
                for (int sz = 0; sz < ns; ++sz) {
                    // source point of the characteristic, wrapped
                    const double px = (sx + 0.5) * hs + shift.x;
                    const double py = (sy + 0.5) * hs + shift.y;
                    const double pz = (sz + 0.5) * hs + shift.z;
                    auto sample = [&](double q, int& i0, double& w1) {
                        double u = q / hs - 0.5;
                        u -= std::floor(u / ns) * ns;
                        i0 = static_cast<int>(std::floor(u));
                        w1 = u - i0;
                        i0 = ((i0 % ns) + ns) % ns;
                    };
                    int ix, iy, iz;
                    double fx, fy, fz;
                    sample(px, ix, fx);
                    sample(py, iy, fy);
                    sample(pz, iz, fz);
                    double acc = 0.0;
                    for (int dx = 0; dx < 2; ++dx)
                        for (int dy = 0; dy < 2; ++dy)
                            for (int dz = 0; dz < 2; ++dz) {
                                const int jx = (ix + dx) % ns, jy = (iy + dy) % ns,
                                          jz = (iz + dz) % ns;
                                const std::size_t cell =
                                    (static_cast<std::size_t>(jx) * ns + jy) * ns + jz;
                                const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) *
                                                 (dz ? fz : 1.0 - fz);
                                acc += w * f.values()[cell * nvc + vi];
                            }
                    const std::size_t cell = (static_cast<std::size_t>(sx) * ns + sy) * ns + sz;
                    out.values()[cell * nvc + vi] = decay * acc;
                }
    }
    return out;
}

GainValue gain_sphere_detailed(const KineticDensity& f, const Vec3& v,
                               const BackgroundLaw& g0, const GainQuadrature& q) {
    if (f.mode() != KineticDensity::Mode::VelocityOnly)
        throw std::invalid_argument("gain_sphere: expected a VelocityOnly density");
    const auto nodes = sphere_grid(q.n_sphere_theta, q.n_sphere_phi);

    // line reach: beyond this the pre-collision point is outside the grid
    const double line_reach = norm(v) + std::sqrt(3.0) * f.v_max();
    std::vector<double> us, uw;
    gl_nodes(q.n_line, 0.0, line_reach, us, uw);

    const double plane_reach = g0.effective_support() + norm(v);
    std::vector<double> bs, bw;
    gl_nodes(q.n_plane, -plane_reach, plane_reach, bs, bw);

    const double vmax = f.v_max();
    auto in_box = [&](const Vec3& p) {
        return std::fabs(p.x) <= vmax && std::fabs(p.y) <= vmax && std::fabs(p.z) <= vmax;
    };
    auto clamp_box = [&](Vec3 p) {
        for (int a = 0; a < 3; ++a) p[a] = std::clamp(p[a], -vmax, vmax);
        return p;
    };

    // out-of-grid pre-collision velocities contribute zero; the discarded
    // mass is estimated by extrapolating the boundary value constantly
    double total = 0.0, risk = 0.0;
    for (const auto& node : nodes) {
        // plane factor: int g0(v + b e1 + c e2) db dc
        double plane = 0.0;
        for (std::size_t ib = 0; ib < bs.size(); ++ib) {
            const Vec3 pb = v + node.e1 * bs[ib];
            double row = 0.0;
            for (std::size_t ic = 0; ic < bs.size(); ++ic)
                row += bw[ic] * g0.density(pb + node.e2 * bs[ic]);
            plane += bw[ib] * row;
        }
        // line factor: int_0^inf u f(v - u nu) du
        double line = 0.0, line_risk = 0.0;
        for (std::size_t iu = 0; iu < us.size(); ++iu) {
            const Vec3 vp = v - node.dir * us[iu];
            if (in_box(vp))
                line += us[iu] * uw[iu] * f.interp_cubic(vp);
            else
                line_risk += us[iu] * uw[iu] * f.interp_cubic(clamp_box(vp));
        }
        total += node.weight * plane * line;
        risk += node.weight * plane * line_risk;
    }
    GainValue out;
    out.value = total;
    out.out_of_grid_fraction = total + risk > 0.0 ? risk / (total + risk) : 0.0;
    return out;
}

double gain_sphere(const KineticDensity& f, const Vec3& v, const BackgroundLaw& g0,
                   const GainQuadrature& q) {
    return gain_sphere_detailed(f, v, g0, q).value;
}

double carleman_k(const Vec3& v, const Vec3& v_star, const BackgroundLaw& g0) {
    const Vec3 d = v - v_star;
    const double r = norm(d);
    if (r == 0.0) throw std::invalid_argument("carleman_k: kernel is singular at v = v*");
    const double dist = std::fabs(dot(v, d)) / r;
    return g0.plane_integral(dist) / r;
}

double carleman_apply(const KineticDensity& f, const Vec3& v, const BackgroundLaw& g0,
                      int n_radial, int n_sphere_theta, int n_sphere_phi) {
    if (f.mode() != KineticDensity::Mode::VelocityOnly)
        throw std::invalid_argument("carleman_apply: expected a VelocityOnly density");
    const auto nodes = sphere_grid(n_sphere_theta, n_sphere_phi);
    const double reach = norm(v) + std::sqrt(3.0) * f.v_max();
    std::vector<double> rs, rw;
    gl_nodes(n_radial, 0.0, reach, rs, rw);

    // in spherical coordinates around v the 1/|v - v*| singularity cancels:
    // int k f dv* = int_{S^2} plane(|v.w|) int_0^inf r f(v + r w) dr dw
    double total = 0.0;
    for (const auto& node : nodes) {
        const double plane = g0.plane_integral(std::fabs(dot(v, node.dir)));
        if (plane == 0.0) continue;
        double radial = 0.0;
        for (std::size_t i = 0; i < rs.size(); ++i)
            radial += rw[i] * rs[i] * f.interp_cubic(v + node.dir * rs[i]);
        total += node.weight * plane * radial;
    }
    return total;
}

GainMatrix::GainMatrix(const KineticDensity& shape, const BackgroundLaw& g0,
                       const RateCache& rates) {
    if (shape.mode() != KineticDensity::Mode::VelocityOnly)
        throw std::invalid_argument("GainMatrix: expected a VelocityOnly grid");
    n_ = shape.velocity_cells();
    k_.assign(n_ * n_, 0.0f);

    const int nv = shape.nv();
    const double h = shape.cell_side();
    const double vol = h * h * h;
    const double ball_r = std::cbrt(vol * 3.0 / (4.0 * M_PI));
    const auto ball_nodes = sphere_grid(8, 16);

    std::vector<Vec3> centers(n_);
    for (std::size_t i = 0; i < n_; ++i) centers[i] = shape.velocity_center(i);

    parallel_rows(n_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Vec3 vi = centers[i];
            float* row = k_.data() + i * n_;
            for (std::size_t j = 0; j < n_; ++j) {
                const Vec3 cj = centers[j];
                if (i == j) {
                    // equal-volume ball around the singularity:
                    // int_{B_rho} k dv* = (rho^2/2) int_{S^2} plane(|v.w|) dw
                    double avg = 0.0;
                    for (const auto& node : ball_nodes)
                        avg += node.weight * g0.plane_integral(std::fabs(dot(vi, node.dir)));
                    row[j] = static_cast<float>(0.5 * ball_r * ball_r * avg);
                    continue;
                }
                const double d = inf_norm(vi - cj);
                if (d <= 3.0 * h + 1e-12) {
                    // near the singularity: 4^3 midpoint subcells
                    double acc = 0.0;
                    const double sub = h / 4.0;
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b)
                            for (int c = 0; c < 4; ++c) {
                                const Vec3 p{cj.x + (a - 1.5) * sub, cj.y + (b - 1.5) * sub,
                                             cj.z + (c - 1.5) * sub};
                                acc += carleman_k(vi, p, g0);
                            }
                    row[j] = static_cast<float>(acc * sub * sub * sub);
                } else {
                    row[j] = static_cast<float>(carleman_k(vi, cj, g0) * vol);
                }
            }
        }
    });

    // keep the discrete operator substochastic: sum_i K_ij approximates
    // int k(v, c_j) dv = lambda(c_j); columns that overshoot (quadrature
    // error) are scaled down to the exact rate
    for (std::size_t j = 0; j < n_; ++j) {
        double colsum = 0.0;
        for (std::size_t i = 0; i < n_; ++i) colsum += k_[i * n_ + j];
        const double target = rates.lambda(centers[j]);
        if (colsum > target && colsum > 0.0) {
            const float scale = static_cast<float>(target / colsum);
            for (std::size_t i = 0; i < n_; ++i) k_[i * n_ + j] *= scale;
        }
    }
    (void)nv;
}

void GainMatrix::apply(const std::vector<double>& in, std::vector<double>& out) const {
    if (in.size() != n_) throw std::invalid_argument("GainMatrix::apply: size mismatch");
    out.assign(n_, 0.0);
    parallel_rows(n_, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const float* row = k_.data() + i * n_;
            double acc = 0.0;
            for (std::size_t j = 0; j < n_; ++j) acc += static_cast<double>(row[j]) * in[j];
            out[i] = acc;
        }
    });
}

DuhamelResult duhamel_solve(const KineticDensity& f0, const BackgroundLaw& g0, double t,
                            int j_max, int n_time_steps, double deficit_tolerance) {
    if (f0.mode() != KineticDensity::Mode::VelocityOnly)
        throw std::invalid_argument("duhamel_solve: expected a VelocityOnly density");
    if (j_max < 0 || n_time_steps < 1)
        throw std::invalid_argument("duhamel_solve: bad j_max or n_time_steps");
    if (!(t >= 0.0)) throw std::invalid_argument("duhamel_solve: t must be >= 0");

    const std::size_t n = f0.velocity_cells();
    const RateCache rates(g0);
    const double initial_mass = f0.mass();

    DuhamelResult result;
    result.density = f0;

    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = rates.lambda(f0.velocity_center(i));

    // P^(0) at t
    std::vector<double> sum_at_t(n);
    for (std::size_t i = 0; i < n; ++i) sum_at_t[i] = f0.values()[i] * std::exp(-t * lam[i]);
    {
        double m = 0.0;
        for (double x : sum_at_t) m += x;
        result.level_masses.push_back(m * result.density.cell_volume());
    }

    if (j_max > 0 && t > 0.0) {
        const GainMatrix gain(f0, g0, rates);
        const int ns = n_time_steps;
        const double hstep = t / ns;

        // decay tables: D[d][i] = exp(-d h lambda_i); quarter-step and
        // half-offset variants for the trailing subinterval and the final time
        std::vector<std::vector<double>> decay(static_cast<std::size_t>(ns) + 1,
                                               std::vector<double>(n));
        std::vector<double> e1(n), quarter(n);
        for (std::size_t i = 0; i < n; ++i) {
            e1[i] = std::exp(-hstep * lam[i]);
            quarter[i] = std::exp(-0.25 * hstep * lam[i]);
            decay[0][i] = 1.0;
        }
        for (int d = 1; d <= ns; ++d)
            for (std::size_t i = 0; i < n; ++i) decay[static_cast<std::size_t>(d)][i] =
                decay[static_cast<std::size_t>(d - 1)][i] * e1[i];
        std::vector<double> half(n);
        for (std::size_t i = 0; i < n; ++i) half[i] = std::exp(-0.5 * hstep * lam[i]);

        // level values at the midpoint nodes theta_k = (k + 1/2) h
        std::vector<std::vector<double>> level(static_cast<std::size_t>(ns),
                                               std::vector<double>(n));
        for (int k = 0; k < ns; ++k) {
            const double theta = (k + 0.5) * hstep;
            auto& g = level[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < n; ++i)
                g[i] = f0.values()[i] * std::exp(-theta * lam[i]);
        }

        std::vector<std::vector<double>> bp(static_cast<std::size_t>(ns));
        std::vector<std::vector<double>> next(static_cast<std::size_t>(ns),
                                              std::vector<double>(n));
        std::vector<double> level_at_t(n);

        for (int j = 1; j <= j_max; ++j) {
            for (int k = 0; k < ns; ++k)
                gain.apply(level[static_cast<std::size_t>(k)], bp[static_cast<std::size_t>(k)]);

            // P^(j) at the nodes (needed by the next level)
            for (int k = 0; k < ns; ++k) {
                auto& acc = next[static_cast<std::size_t>(k)];
                std::fill(acc.begin(), acc.end(), 0.0);
                for (int kp = 0; kp < k; ++kp) {
                    const auto& d = decay[static_cast<std::size_t>(k - kp)];
                    const auto& src = bp[static_cast<std::size_t>(kp)];
                    for (std::size_t i = 0; i < n; ++i) acc[i] += hstep * d[i] * src[i];
                }
                // trailing half interval [k h, theta_k]
                const auto& src = bp[static_cast<std::size_t>(k)];
                for (std::size_t i = 0; i < n; ++i)
                    acc[i] += 0.5 * hstep * quarter[i] * src[i];
            }

            // P^(j) at the final time t: full midpoint rule over [0, t]
            std::fill(level_at_t.begin(), level_at_t.end(), 0.0);
            for (int k = 0; k < ns; ++k) {
                // t - theta_k = (ns - k - 1) h + h/2
                const auto& d = decay[static_cast<std::size_t>(ns - k - 1)];
                const auto& src = bp[static_cast<std::size_t>(k)];
                for (std::size_t i = 0; i < n; ++i)
                    level_at_t[i] += hstep * d[i] * half[i] * src[i];
            }

            double m = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sum_at_t[i] += level_at_t[i];
                m += level_at_t[i];
            }
            result.level_masses.push_back(m * result.density.cell_volume());
            level.swap(next);
        }
    } else {
        for (int j = 1; j <= j_max; ++j) result.level_masses.push_back(0.0);
    }

    result.density.values() = sum_at_t;
    result.partial_mass = 0.0;
    for (double m : result.level_masses) result.partial_mass += m;
    result.mass_deficit = initial_mass - result.partial_mass;
    result.deficit_warning = result.mass_deficit > deficit_tolerance;
    return result;
}

} // namespace rgas
