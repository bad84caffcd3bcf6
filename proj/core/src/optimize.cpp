#include "gcpc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace gcpc::optim {

namespace {

double safe_eval(const Objective& f, const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

}  // namespace

Result nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const Options& opts) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i)
        pts[i + 1][i] += opts.initial_step * std::max(1.0, std::abs(x0[i]));
    for (int i = 0; i <= n; ++i) vals[i] = safe_eval(f, pts[i]);

    std::vector<int> order(n + 1);
    Result res;
    for (res.iterations = 0; res.iterations < opts.max_iterations * n; ++res.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return vals[a] < vals[b]; });
        const int best = order[0], worst = order[n], second = order[n - 1];
        if (std::abs(vals[worst] - vals[best]) <=
            opts.tol * (1.0 + std::abs(vals[best]))) {
            res.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= n;

        const Eigen::VectorXd refl = centroid + (centroid - pts[worst]);
        const double f_refl = safe_eval(f, refl);
        if (f_refl < vals[best]) {
            const Eigen::VectorXd exp_pt = centroid + 2.0 * (centroid - pts[worst]);
            const double f_exp = safe_eval(f, exp_pt);
            if (f_exp < f_refl) {
                pts[worst] = exp_pt;
                vals[worst] = f_exp;
            } else {
                pts[worst] = refl;
                vals[worst] = f_refl;
            }
        } else if (f_refl < vals[second]) {
            pts[worst] = refl;
            vals[worst] = f_refl;
        } else {
            const Eigen::VectorXd cand = (f_refl < vals[worst]) ? refl : pts[worst];
            const double f_cand = std::min(f_refl, vals[worst]);
            const Eigen::VectorXd contr = centroid + 0.5 * (cand - centroid);
            const double f_contr = safe_eval(f, contr);
            if (f_contr < f_cand) {
                pts[worst] = contr;
                vals[worst] = f_contr;
            } else {  // shrink toward the best vertex
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                    vals[i] = safe_eval(f, pts[i]);
                }
            }
        }
    }
    const int best =
        static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    res.x = pts[best];
    res.fx = vals[best];
    return res;
}

Eigen::VectorXd numeric_gradient(const Objective& f, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd g(n), xp = x;
    for (int i = 0; i < n; ++i) {
        const double h = 6e-6 * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd numeric_hessian(const Objective& f, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd h(n);
    for (int i = 0; i < n; ++i) h[i] = 1.2e-4 * std::max(0.1, std::abs(x[i]));
    Eigen::MatrixXd hess(n, n);
    const double f0 = f(x);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < n; ++i) {
        xp[i] = x[i] + h[i];
        const double fp = f(xp);
        xp[i] = x[i] - h[i];
        const double fm = f(xp);
        xp[i] = x[i];
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            xp[i] = x[i] + h[i];
            xp[j] = x[j] + h[j];
            const double fpp = f(xp);
            xp[j] = x[j] - h[j];
            const double fpm = f(xp);
            xp[i] = x[i] - h[i];
            const double fmm = f(xp);
            xp[j] = x[j] + h[j];
            const double fmp = f(xp);
            xp[i] = x[i];
            xp[j] = x[j];
            hess(i, j) = hess(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
        }
    }
    return hess;
}

Result bfgs(const Objective& f, const Eigen::VectorXd& x0, const Options& opts) {
    const int n = static_cast<int>(x0.size());
    Result res;
    res.x = x0;
    res.fx = safe_eval(f, x0);
    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g = numeric_gradient(f, res.x);
    int stall = 0;

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        if (g.lpNorm<Eigen::Infinity>() < 1e-9 * (1.0 + std::abs(res.fx))) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd dir = -h_inv * g;
        double slope = g.dot(dir);
        if (slope >= 0.0) {  // reset a corrupted metric
            h_inv.setIdentity();
            dir = -g;
            slope = g.dot(dir);
        }

        double step = 1.0;
        double f_new = res.fx;
        Eigen::VectorXd x_new = res.x;
        bool moved = false;
        for (int ls = 0; ls < 50; ++ls) {
            x_new = res.x + step * dir;
            f_new = safe_eval(f, x_new);
            if (f_new <= res.fx + 1e-4 * step * slope) {
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            res.converged = true;  // no decrease possible along the gradient
            break;
        }

        const Eigen::VectorXd g_new = numeric_gradient(f, x_new);
        const Eigen::VectorXd s = x_new - res.x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            h_inv = (eye - rho * s * y.transpose()) * h_inv *
                        (eye - rho * y * s.transpose()) +
                    rho * s * s.transpose();
        }

        const double decrease = res.fx - f_new;
        res.x = x_new;
        res.fx = f_new;
        g = g_new;
        stall = decrease <= opts.tol * (1.0 + std::abs(res.fx)) ? stall + 1 : 0;
        if (stall > 0 && (g.lpNorm<Eigen::Infinity>() < 1e-7 * (1.0 + std::abs(res.fx)) ||
                          stall >= 3)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

Result minimize(const Objective& f, const Eigen::VectorXd& x0, const Options& opts) {
    Options nm_opts = opts;
    nm_opts.tol = std::max(opts.tol, 1e-10);
    Result stage1 = nelder_mead(f, x0, nm_opts);
    Result stage2 = bfgs(f, stage1.x, opts);
    stage2.iterations += stage1.iterations;
    if (stage2.fx > stage1.fx) {  // keep the simplex point if refinement failed
        stage2.x = stage1.x;
        stage2.fx = stage1.fx;
        stage2.converged = stage1.converged;
    }
    stage2.converged = stage2.converged || stage1.converged;
    return stage2;
}

Result brent(const std::function<double(double)>& f, double a, double b, double tol,
             int max_iterations) {
    const double gold = 0.3819660112501051;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    Result res;
    for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::abs(x) + 1e-12;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
            res.converged = true;
            break;
        }
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, m - x);
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        const double u = (std::abs(d) >= tol1) ? x + d : x + std::copysign(tol1, d);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x)
                b = x;
            else
                a = x;
            v = w, fv = fw;
            w = x, fw = fx;
            x = u, fx = fu;
        } else {
            if (u < x)
                a = u;
            else
                b = u;
            if (fu <= fw || w == x) {
                v = w, fv = fw;
                w = u, fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u, fv = fu;
            }
        }
    }
    res.x = Eigen::VectorXd::Constant(1, x);
    res.fx = fx;
    return res;
}

}  // namespace gcpc::optim
