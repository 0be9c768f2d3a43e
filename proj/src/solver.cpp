#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <vector>

#include "opf/conic.hpp"

// Homogeneous self-dual primal-dual interior-point method with
// Nesterov-Todd scaling and Mehrotra predictor-corrector, for programs
//   min c'x  s.t.  A x = b,  G x + s = h,  s in K,
// K a product of a nonnegative orthant and second-order cones.

namespace opf {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Vec = Eigen::VectorXd;

struct StdForm {
    int n = 0;  // variables
    int p = 0;  // equality rows
    int m = 0;  // cone dimension
    int lp_dim = 0;
    std::vector<int> soc_dims;
    SpMat A, G;
    Vec b, h, c;
    double cost_scale = 1.0;
    Vec col_scale;                  // x = col_scale .* x_scaled
    Vec eq_row_scale, cone_row_scale;
    int num_user_eq = 0;            // leading rows of A from prog.eq
    int num_user_ineq = 0;          // leading LP rows of G from prog.ineq
};

// Ruiz equilibration on the stacked [A; G]; rows belonging to one cone block
// share a single scale so the cone geometry survives.
void equilibrate(StdForm& sf) {
    sf.col_scale = Vec::Ones(sf.n);
    sf.eq_row_scale = Vec::Ones(sf.p);
    sf.cone_row_scale = Vec::Ones(sf.m);

    std::vector<int> block_of(static_cast<size_t>(sf.m), -1);
    {
        int off = sf.lp_dim;
        for (size_t k = 0; k < sf.soc_dims.size(); ++k)
            for (int i = 0; i < sf.soc_dims[k]; ++i)
                block_of[static_cast<size_t>(off++)] = static_cast<int>(k);
    }

    for (int pass = 0; pass < 3; ++pass) {
        Vec row_max_a = Vec::Zero(sf.p), row_max_g = Vec::Zero(sf.m);
        Vec col_max = Vec::Zero(sf.n);
        for (int c = 0; c < sf.A.outerSize(); ++c)
            for (SpMat::InnerIterator jt(sf.A, c); jt; ++jt) {
                double v = std::abs(jt.value());
                row_max_a[jt.row()] = std::max(row_max_a[jt.row()], v);
                col_max[c] = std::max(col_max[c], v);
            }
        for (int c = 0; c < sf.G.outerSize(); ++c)
            for (SpMat::InnerIterator jt(sf.G, c); jt; ++jt) {
                double v = std::abs(jt.value());
                row_max_g[jt.row()] = std::max(row_max_g[jt.row()], v);
                col_max[c] = std::max(col_max[c], v);
            }
        // cone rows share their block maximum
        std::vector<double> blk_max(sf.soc_dims.size(), 0.0);
        for (int r = sf.lp_dim; r < sf.m; ++r)
            blk_max[static_cast<size_t>(block_of[static_cast<size_t>(r)])] =
                std::max(blk_max[static_cast<size_t>(block_of[static_cast<size_t>(r)])],
                         row_max_g[r]);
        for (int r = sf.lp_dim; r < sf.m; ++r)
            row_max_g[r] = blk_max[static_cast<size_t>(block_of[static_cast<size_t>(r)])];

        auto factor = [](double mx) {
            return mx > 0 ? 1.0 / std::sqrt(mx) : 1.0;
        };
        Vec da(sf.p), dg(sf.m), dc(sf.n);
        for (int r = 0; r < sf.p; ++r) da[r] = factor(row_max_a[r]);
        for (int r = 0; r < sf.m; ++r) dg[r] = factor(row_max_g[r]);
        for (int c = 0; c < sf.n; ++c) dc[c] = factor(col_max[c]);

        sf.A = da.asDiagonal() * sf.A * dc.asDiagonal();
        sf.G = dg.asDiagonal() * sf.G * dc.asDiagonal();
        sf.b = sf.b.cwiseProduct(da);
        sf.h = sf.h.cwiseProduct(dg);
        sf.eq_row_scale = sf.eq_row_scale.cwiseProduct(da);
        sf.cone_row_scale = sf.cone_row_scale.cwiseProduct(dg);
        sf.col_scale = sf.col_scale.cwiseProduct(dc);
    }
    sf.c = sf.c.cwiseProduct(sf.col_scale);
}

StdForm build_standard_form(const ConicProgram& prog) {
    StdForm sf;
    sf.n = prog.num_vars();

    std::vector<Triplet> ta, tg;
    std::vector<double> b, h;

    sf.num_user_eq = static_cast<int>(prog.eq.size());
    for (const LinearRow& row : prog.eq) {
        int r = static_cast<int>(b.size());
        for (const auto& [v, a] : row.coeffs) ta.emplace_back(r, v, a);
        b.push_back(row.rhs);
    }
    // fixed variables enter as equality rows
    for (int i = 0; i < sf.n; ++i) {
        if (prog.lb[i] == prog.ub[i]) {
            int r = static_cast<int>(b.size());
            ta.emplace_back(r, i, 1.0);
            b.push_back(prog.lb[i]);
        }
    }

    sf.num_user_ineq = static_cast<int>(prog.ineq.size());
    for (const LinearRow& row : prog.ineq) {
        int r = static_cast<int>(h.size());
        for (const auto& [v, a] : row.coeffs) tg.emplace_back(r, v, a);
        h.push_back(row.rhs);
    }
    for (int i = 0; i < sf.n; ++i) {
        if (prog.lb[i] == prog.ub[i]) continue;
        if (prog.ub[i] < kInf) {
            tg.emplace_back(static_cast<int>(h.size()), i, 1.0);
            h.push_back(prog.ub[i]);
        }
        if (prog.lb[i] > -kInf) {
            tg.emplace_back(static_cast<int>(h.size()), i, -1.0);
            h.push_back(-prog.lb[i]);
        }
    }
    sf.lp_dim = static_cast<int>(h.size());

    for (const ConeBlock& blk : prog.cones) {
        sf.soc_dims.push_back(static_cast<int>(blk.members.size()));
        for (int v : blk.members) {
            tg.emplace_back(static_cast<int>(h.size()), v, -1.0);
            h.push_back(0.0);
        }
    }

    sf.p = static_cast<int>(b.size());
    sf.m = static_cast<int>(h.size());
    sf.A.resize(sf.p, sf.n);
    sf.A.setFromTriplets(ta.begin(), ta.end());
    sf.G.resize(sf.m, sf.n);
    sf.G.setFromTriplets(tg.begin(), tg.end());
    sf.b = Eigen::Map<Vec>(b.data(), sf.p);
    sf.h = Eigen::Map<Vec>(h.data(), sf.m);
    sf.c = Eigen::Map<const Vec>(prog.obj.data(), sf.n);

    equilibrate(sf);

    sf.cost_scale = std::max(1.0, sf.c.lpNorm<Eigen::Infinity>());
    sf.c /= sf.cost_scale;
    return sf;
}

// Nesterov-Todd scaling point per cone. For a second-order block the
// scaling matrix is W = eta * [[w0, wv'], [wv, I + wv wv'/(1+w0)]] with
// W^2 = eta^2 (2 w w' - J), and W^-1 = J W J / eta^2.
struct Scaling {
    Vec w_lp;
    std::vector<Vec> soc_wbar;
    std::vector<double> soc_eta;
};

class Kernel {
  public:
    explicit Kernel(const StdForm& sf) : sf_(sf) {}

    int lp_dim() const { return sf_.lp_dim; }

    double max_step(const Vec& u, const Vec& du) const {
        double alpha = kInf;
        for (int i = 0; i < sf_.lp_dim; ++i)
            if (du[i] < 0) alpha = std::min(alpha, -u[i] / du[i]);
        int off = sf_.lp_dim;
        for (int dim : sf_.soc_dims) {
            double u0 = u[off], d0 = du[off];
            auto uv = u.segment(off + 1, dim - 1);
            auto dv = du.segment(off + 1, dim - 1);
            double a = d0 * d0 - dv.squaredNorm();
            double bq = 2.0 * (u0 * d0 - uv.dot(dv));
            double cq = std::max((u0 - uv.norm()) * (u0 + uv.norm()), 0.0);
            double root = -1.0;
            if (std::abs(a) < 1e-14) {
                if (bq < 0) root = -cq / bq;
            } else {
                double disc = bq * bq - 4.0 * a * cq;
                if (disc >= 0) {
                    double sq = std::sqrt(disc);
                    double r1 = (-bq - sq) / (2.0 * a);
                    double r2 = (-bq + sq) / (2.0 * a);
                    if (r1 > r2) std::swap(r1, r2);
                    if (r1 > 1e-14) root = r1;
                    else if (r2 > 1e-14 && a < 0) root = r2;
                }
            }
            if (root > 0) alpha = std::min(alpha, root);
            off += dim;
        }
        return alpha;
    }

    // strict interior with a relative floor, so the next scaling stays finite
    bool in_cone(const Vec& u) const {
        for (int i = 0; i < sf_.lp_dim; ++i)
            if (u[i] <= 0.0) return false;
        int off = sf_.lp_dim;
        for (int dim : sf_.soc_dims) {
            double margin = 1e-14 * std::max(1.0, std::abs(u[off]));
            if (u[off] - u.segment(off + 1, dim - 1).norm() <= margin) return false;
            off += dim;
        }
        return true;
    }

    void bring_to_cone(Vec& u) const {
        double worst = -0.99;
        for (int i = 0; i < sf_.lp_dim; ++i) worst = std::max(worst, -u[i]);
        int off = sf_.lp_dim;
        for (int dim : sf_.soc_dims) {
            double margin = u[off] - u.segment(off + 1, dim - 1).norm();
            worst = std::max(worst, -margin);
            off += dim;
        }
        if (worst < 0) return;
        double shift = 1.0 + worst;
        for (int i = 0; i < sf_.lp_dim; ++i) u[i] += shift;
        off = sf_.lp_dim;
        for (int dim : sf_.soc_dims) {
            u[off] += shift;
            off += dim;
        }
    }

    bool compute_scaling(const Vec& s, const Vec& z, Scaling& W) const {
        W.w_lp.resize(sf_.lp_dim);
        for (int i = 0; i < sf_.lp_dim; ++i) {
            if (s[i] <= 0 || z[i] <= 0) return false;
            W.w_lp[i] = std::sqrt(s[i] / z[i]);
        }
        W.soc_wbar.assign(sf_.soc_dims.size(), Vec());
        W.soc_eta.assign(sf_.soc_dims.size(), 1.0);
        int off = sf_.lp_dim;
        for (size_t k = 0; k < sf_.soc_dims.size(); ++k) {
            int dim = sf_.soc_dims[k];
            auto sb = s.segment(off, dim);
            auto zb = z.segment(off, dim);
            double sn_tail = sb.tail(dim - 1).norm();
            double zn_tail = zb.tail(dim - 1).norm();
            double res_s = (sb[0] - sn_tail) * (sb[0] + sn_tail);
            double res_z = (zb[0] - zn_tail) * (zb[0] + zn_tail);
            if (res_s <= 0 || res_z <= 0 || sb[0] <= 0 || zb[0] <= 0) return false;
            double snorm = std::sqrt(res_s), znorm = std::sqrt(res_z);
            Vec sn = sb / snorm, zn = zb / znorm;
            double gamma = std::sqrt((1.0 + sn.dot(zn)) / 2.0);
            Vec wbar(dim);
            wbar[0] = (sn[0] + zn[0]) / (2.0 * gamma);
            wbar.tail(dim - 1) = (sn.tail(dim - 1) - zn.tail(dim - 1)) / (2.0 * gamma);
            W.soc_wbar[k] = wbar;
            W.soc_eta[k] = std::sqrt(snorm / znorm);
            off += dim;
        }
        return true;
    }

    Vec apply_W(const Scaling& W, const Vec& u, bool inverse) const {
        Vec out(sf_.m);
        for (int i = 0; i < sf_.lp_dim; ++i)
            out[i] = inverse ? u[i] / W.w_lp[i] : u[i] * W.w_lp[i];
        int off = sf_.lp_dim;
        for (size_t k = 0; k < sf_.soc_dims.size(); ++k) {
            int dim = sf_.soc_dims[k];
            const Vec& w = W.soc_wbar[k];
            double eta = inverse ? 1.0 / W.soc_eta[k] : W.soc_eta[k];
            double sgn = inverse ? -1.0 : 1.0;
            double u0 = u[off];
            auto uv = u.segment(off + 1, dim - 1);
            double dot = w.tail(dim - 1).dot(uv);
            out[off] = eta * (w[0] * u0 + sgn * dot);
            out.segment(off + 1, dim - 1) =
                eta * (uv + (sgn * u0 + dot / (1.0 + w[0])) * w.tail(dim - 1));
            off += dim;
        }
        return out;
    }

    Vec jmul(const Vec& u, const Vec& v) const {
        Vec out(sf_.m);
        for (int i = 0; i < sf_.lp_dim; ++i) out[i] = u[i] * v[i];
        int off = sf_.lp_dim;
        for (int dim : sf_.soc_dims) {
            auto ub = u.segment(off, dim);
            auto vb = v.segment(off, dim);
            out[off] = ub.dot(vb);
            out.segment(off + 1, dim - 1) =
                ub[0] * vb.tail(dim - 1) + vb[0] * ub.tail(dim - 1);
            off += dim;
        }
        return out;
    }

    // Solves lam o x = d for x.
    Vec jdiv(const Vec& lam, const Vec& d) const {
        Vec out(sf_.m);
        for (int i = 0; i < sf_.lp_dim; ++i) out[i] = d[i] / lam[i];
        int off = sf_.lp_dim;
        for (int dim : sf_.soc_dims) {
            auto lb = lam.segment(off, dim);
            auto db = d.segment(off, dim);
            double det = lb[0] * lb[0] - lb.tail(dim - 1).squaredNorm();
            double x0 = (lb[0] * db[0] - lb.tail(dim - 1).dot(db.tail(dim - 1))) / det;
            out[off] = x0;
            out.segment(off + 1, dim - 1) =
                (db.tail(dim - 1) - x0 * lb.tail(dim - 1)) / lb[0];
            off += dim;
        }
        return out;
    }

    Vec cone_unit() const {
        Vec e = Vec::Zero(sf_.m);
        for (int i = 0; i < sf_.lp_dim; ++i) e[i] = 1.0;
        int off = sf_.lp_dim;
        for (int dim : sf_.soc_dims) {
            e[off] = 1.0;
            off += dim;
        }
        return e;
    }

  private:
    const StdForm& sf_;
};

class KktSystem {
  public:
    explicit KktSystem(const StdForm& sf) : sf_(sf) { dim_ = sf.n + sf.p + sf.m; }

    void set_reg(double reg) { reg_ = reg; }
    double reg() const { return reg_; }

    bool factorize(const Scaling& W) {
        std::vector<Triplet> trip;
        trip.reserve(static_cast<size_t>(sf_.A.nonZeros() + sf_.G.nonZeros()) * 2 +
                     static_cast<size_t>(dim_) + 64);
        for (int c = 0; c < sf_.A.outerSize(); ++c)
            for (SpMat::InnerIterator jt(sf_.A, c); jt; ++jt) {
                trip.emplace_back(sf_.n + static_cast<int>(jt.row()), c, jt.value());
                trip.emplace_back(c, sf_.n + static_cast<int>(jt.row()), jt.value());
            }
        int zoff = sf_.n + sf_.p;
        for (int c = 0; c < sf_.G.outerSize(); ++c)
            for (SpMat::InnerIterator jt(sf_.G, c); jt; ++jt) {
                trip.emplace_back(zoff + static_cast<int>(jt.row()), c, jt.value());
                trip.emplace_back(c, zoff + static_cast<int>(jt.row()), jt.value());
            }
        for (int i = 0; i < sf_.n; ++i) trip.emplace_back(i, i, reg_);
        for (int i = 0; i < sf_.p; ++i)
            trip.emplace_back(sf_.n + i, sf_.n + i, -reg_);
        for (int i = 0; i < sf_.lp_dim; ++i)
            trip.emplace_back(zoff + i, zoff + i, -W.w_lp[i] * W.w_lp[i] - reg_);
        int off = sf_.lp_dim;
        for (size_t k = 0; k < sf_.soc_dims.size(); ++k) {
            int dim = sf_.soc_dims[k];
            const Vec& w = W.soc_wbar[k];
            double e2 = W.soc_eta[k] * W.soc_eta[k];
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    double jij = (i == j) ? (i == 0 ? 1.0 : -1.0) : 0.0;
                    double val = e2 * (2.0 * w[i] * w[j] - jij);
                    trip.emplace_back(zoff + off + i, zoff + off + j,
                                      -val - (i == j ? reg_ : 0.0));
                }
            off += dim;
        }
        K_.resize(dim_, dim_);
        K_.setFromTriplets(trip.begin(), trip.end());
        if (!analyzed_) {
            ldlt_.analyzePattern(K_);
            analyzed_ = true;
        }
        ldlt_.factorize(K_);
        return ldlt_.info() == Eigen::Success;
    }

    // Solve against the unregularized system via preconditioned refinement.
    Vec solve(const Vec& rhs) const {
        Vec x = ldlt_.solve(rhs);
        for (int pass = 0; pass < 2; ++pass) {
            Vec r = rhs - K_ * x;
            r.head(sf_.n) += reg_ * x.head(sf_.n);
            r.tail(sf_.p + sf_.m) -= reg_ * x.tail(sf_.p + sf_.m);
            x += ldlt_.solve(r);
        }
        return x;
    }

  private:
    const StdForm& sf_;
    double reg_ = 1e-9;
    int dim_;
    SpMat K_;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
    bool analyzed_ = false;
};

struct IterState {
    Vec x, y, z, s;
    double tau = 1.0, kappa = 1.0;
};

}  // namespace

Solution solve(const ConicProgram& prog_in, const SolverSettings& st) {
    ConicProgram prog = normalize(prog_in);
    StdForm sf = build_standard_form(prog);
    Kernel kern(sf);

    Solution sol;
    sol.status = SolveStatus::NumericalFailure;
    if (sf.m == 0) return sol;

    const double feastol = st.tol;
    const double abstol = st.tol;
    const double reltol = st.tol;
    const double tol_inacc = std::sqrt(st.tol);

    KktSystem kkt(sf);
    Scaling W;
    {
        Vec e = kern.cone_unit();
        kern.compute_scaling(e, e, W);
    }
    while (!kkt.factorize(W)) {
        if (kkt.reg() > 1e-2) return sol;
        kkt.set_reg(kkt.reg() * 100);
    }

    IterState it;
    {
        Vec rhs1 = Vec::Zero(sf.n + sf.p + sf.m);
        rhs1.segment(sf.n, sf.p) = sf.b;
        rhs1.tail(sf.m) = sf.h;
        Vec sol1 = kkt.solve(rhs1);
        it.x = sol1.head(sf.n);
        it.s = -sol1.tail(sf.m);
        kern.bring_to_cone(it.s);

        Vec rhs2 = Vec::Zero(sf.n + sf.p + sf.m);
        rhs2.head(sf.n) = -sf.c;
        Vec sol2 = kkt.solve(rhs2);
        it.y = sol2.segment(sf.n, sf.p);
        it.z = sol2.tail(sf.m);
        kern.bring_to_cone(it.z);
    }

    double resx0 = std::max(1.0, sf.c.norm());
    double resy0 = std::max(1.0, sf.b.norm());
    double resz0 = std::max(1.0, sf.h.norm());
    int cone_deg = kern.lp_dim() + static_cast<int>(sf.soc_dims.size());

    auto finish_optimal = [&](const IterState& state) {
        sol.status = SolveStatus::Optimal;
        sol.primal.resize(sf.n);
        for (int i = 0; i < sf.n; ++i)
            sol.primal[i] = sf.col_scale[i] * state.x[i] / state.tau;
        sol.objective =
            sf.c.dot(state.x) / state.tau * sf.cost_scale + prog_in.obj_constant;
        if (prog_in.cones.empty()) {
            sol.dual_eq.resize(sf.num_user_eq);
            for (int i = 0; i < sf.num_user_eq; ++i)
                sol.dual_eq[i] =
                    state.y[i] / state.tau * sf.cost_scale * sf.eq_row_scale[i];
            sol.dual_ineq.resize(sf.num_user_ineq);
            for (int i = 0; i < sf.num_user_ineq; ++i)
                sol.dual_ineq[i] =
                    state.z[i] / state.tau * sf.cost_scale * sf.cone_row_scale[i];
        }
    };

    bool converged = false;
    double best_err = kInf;
    IterState best = it;

    for (int iter = 0; iter <= st.max_iters; ++iter) {
        Vec rx = sf.A.transpose() * it.y + sf.G.transpose() * it.z + sf.c * it.tau;
        Vec ry = sf.A * it.x - sf.b * it.tau;
        Vec rz = it.s + sf.G * it.x - sf.h * it.tau;
        double cx = sf.c.dot(it.x);
        double by = sf.p > 0 ? sf.b.dot(it.y) : 0.0;
        double hz = sf.h.dot(it.z);
        double rt = it.kappa + cx + by + hz;

        double nx = it.x.norm(), ny = it.y.norm(), nz = it.z.norm(), ns = it.s.norm();
        double gap = it.s.dot(it.z);
        double mu = (gap + it.tau * it.kappa) / (cone_deg + 1);

        double pres = std::max(ry.norm() / std::max(resy0 + nx, 1.0),
                               rz.norm() / std::max(resz0 + nx + ns, 1.0)) /
                      it.tau;
        double dres = rx.norm() / std::max(resx0 + ny + nz, 1.0) / it.tau;
        double pcost = cx / it.tau;
        double dcost = -(by + hz) / it.tau;
        double absgap = gap / (it.tau * it.tau);
        double relgap = kInf;
        if (pcost < 0) relgap = absgap / (-pcost);
        else if (dcost > 0) relgap = absgap / dcost;

        double err = std::max({pres, dres, std::min(relgap, absgap)});
        if (err < best_err) {
            best_err = err;
            best = it;
        }
        if (st.verbose)
            std::cerr << "it " << iter << " pcost " << pcost * sf.cost_scale << " gap "
                      << absgap << " pres " << pres << " dres " << dres << " tau "
                      << it.tau << " kap " << it.kappa << "\n";

        if (pres < feastol && dres < feastol &&
            (absgap < abstol * std::max(1.0, std::abs(pcost)) || relgap < reltol)) {
            converged = true;
            finish_optimal(it);
            sol.iterations = iter;
            break;
        }
        if (it.tau < it.kappa * 1e-2) {
            double hrx = (rx - sf.c * it.tau).norm();
            double hry = (ry + sf.b * it.tau).norm();
            double hrz = (rz + sf.h * it.tau).norm();
            if (by + hz < -reltol * std::max(ny + nz, 1.0) &&
                hrx / std::max(ny + nz, 1.0) < feastol * 100) {
                sol.status = SolveStatus::Infeasible;
                sol.iterations = iter;
                return sol;
            }
            if (cx < -reltol * std::max(nx, 1.0) &&
                std::max(hry / std::max(nx, 1.0), hrz / std::max(nx + ns, 1.0)) <
                    feastol * 100) {
                sol.status = SolveStatus::Unbounded;
                sol.iterations = iter;
                return sol;
            }
        }
        if (iter == st.max_iters) break;

        if (!kern.compute_scaling(it.s, it.z, W)) { if (st.verbose) std::cerr << "break: scaling\n"; break; }
        if (!kkt.factorize(W)) {
            kkt.set_reg(kkt.reg() * 100);
            if (kkt.reg() > 1e-2 || !kkt.factorize(W)) { if (st.verbose) std::cerr << "break: kkt\n"; break; }
        }
        Vec lambda = kern.apply_W(W, it.z, false);

        Vec rhs1(sf.n + sf.p + sf.m);
        rhs1.head(sf.n) = -sf.c;
        rhs1.segment(sf.n, sf.p) = sf.b;
        rhs1.tail(sf.m) = sf.h;
        Vec sol1 = kkt.solve(rhs1);
        double denom_base = sf.c.dot(sol1.head(sf.n)) +
                            (sf.p > 0 ? sf.b.dot(sol1.segment(sf.n, sf.p)) : 0.0) +
                            sf.h.dot(sol1.tail(sf.m));

        auto direction = [&](double sigma, const Vec& ds_target, double dk_target,
                             Vec& dx, Vec& dy, Vec& dz, Vec& ds, double& dtau,
                             double& dkappa) {
            double oms = 1.0 - sigma;
            Vec wk = kern.apply_W(W, kern.jdiv(lambda, ds_target), false);
            Vec rhs(sf.n + sf.p + sf.m);
            rhs.head(sf.n) = -oms * rx;
            rhs.segment(sf.n, sf.p) = -oms * ry;
            rhs.tail(sf.m) = -oms * rz - wk;
            Vec sol2 = kkt.solve(rhs);
            double num = -oms * rt - dk_target / it.tau -
                         (sf.c.dot(sol2.head(sf.n)) +
                          (sf.p > 0 ? sf.b.dot(sol2.segment(sf.n, sf.p)) : 0.0) +
                          sf.h.dot(sol2.tail(sf.m)));
            double den = denom_base - it.kappa / it.tau;
            dtau = num / den;
            dx = sol2.head(sf.n) + dtau * sol1.head(sf.n);
            dy = sol2.segment(sf.n, sf.p) + dtau * sol1.segment(sf.n, sf.p);
            dz = sol2.tail(sf.m) + dtau * sol1.tail(sf.m);
            ds = kern.apply_W(
                W, kern.jdiv(lambda, ds_target) - kern.apply_W(W, dz, false), false);
            dkappa = (dk_target - it.kappa * dtau) / it.tau;
        };

        Vec ds_aff = -kern.jmul(lambda, lambda);
        double dk_aff = -it.tau * it.kappa;
        Vec dx_a, dy_a, dz_a, ds_a;
        double dtau_a, dkappa_a;
        direction(0.0, ds_aff, dk_aff, dx_a, dy_a, dz_a, ds_a, dtau_a, dkappa_a);

        double alpha_aff =
            std::min({kern.max_step(it.s, ds_a), kern.max_step(it.z, dz_a), 1.0});
        if (dtau_a < 0) alpha_aff = std::min(alpha_aff, -it.tau / dtau_a);
        if (dkappa_a < 0) alpha_aff = std::min(alpha_aff, -it.kappa / dkappa_a);
        double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 1e-8, 0.999);

        Vec corr =
            kern.jmul(kern.apply_W(W, ds_a, true), kern.apply_W(W, dz_a, false));
        Vec ds_comb =
            -kern.jmul(lambda, lambda) - corr + sigma * mu * kern.cone_unit();
        double dk_comb = -it.tau * it.kappa - dtau_a * dkappa_a + sigma * mu;
        Vec dx, dy, dz, ds;
        double dtau, dkappa;
        direction(sigma, ds_comb, dk_comb, dx, dy, dz, ds, dtau, dkappa);

        auto feasible_step = [&](const Vec& dss, const Vec& dzz, double dtt,
                                 double dkk) {
            double a = std::min(kern.max_step(it.s, dss), kern.max_step(it.z, dzz));
            if (dtt < 0) a = std::min(a, -it.tau / dtt);
            if (dkk < 0) a = std::min(a, -it.kappa / dkk);
            a = std::min(0.99 * a, 1.0);
            for (int back = 0; back < 30; ++back) {
                if (kern.in_cone(it.s + a * dss) && kern.in_cone(it.z + a * dzz) &&
                    it.tau + a * dtt > 0 && it.kappa + a * dkk > 0)
                    break;
                a *= 0.8;
            }
            return a;
        };
        double alpha = feasible_step(ds, dz, dtau, dkappa);
        if (alpha < 1e-8) {
            // combined direction collapsed; fall back to a pure centering step
            Vec ds_cent = -kern.jmul(lambda, lambda) + mu * kern.cone_unit();
            double dk_cent = -it.tau * it.kappa + mu;
            direction(0.999, ds_cent, dk_cent, dx, dy, dz, ds, dtau, dkappa);
            alpha = feasible_step(ds, dz, dtau, dkappa);
        }
        if (alpha < 1e-10) { if (st.verbose) std::cerr << "break: alpha " << alpha << "\n"; break; }

        it.x += alpha * dx;
        it.y += alpha * dy;
        it.z += alpha * dz;
        it.s += alpha * ds;
        it.tau += alpha * dtau;
        it.kappa += alpha * dkappa;
        sol.iterations = iter + 1;
    }

    if (!converged && sol.status == SolveStatus::NumericalFailure &&
        best_err < tol_inacc)
        finish_optimal(best);

    if (sol.status == SolveStatus::Optimal) {
        // worst violation of the original constraints, relative to 1 + |rhs|
        // (or the cone magnitude), so mixed scales stay comparable
        double viol = 0.0;
        const std::vector<double>& xv = sol.primal;
        auto eval = [&](const LinearRow& row) {
            double acc = 0.0;
            for (const auto& [v, a] : row.coeffs) acc += a * xv[v];
            return acc;
        };
        for (const auto& row : prog_in.eq)
            viol = std::max(viol,
                            std::abs(eval(row) - row.rhs) / (1.0 + std::abs(row.rhs)));
        for (const auto& row : prog_in.ineq)
            viol = std::max(viol, (eval(row) - row.rhs) / (1.0 + std::abs(row.rhs)));
        for (int i = 0; i < prog_in.num_vars(); ++i) {
            if (prog_in.lb[i] > -kInf)
                viol = std::max(viol, (prog_in.lb[i] - xv[i]) /
                                          (1.0 + std::abs(prog_in.lb[i])));
            if (prog_in.ub[i] < kInf)
                viol = std::max(viol, (xv[i] - prog_in.ub[i]) /
                                          (1.0 + std::abs(prog_in.ub[i])));
        }
        for (const auto& blk : prog_in.cones) {
            if (blk.kind == ConeKind::SecondOrder) {
                double t = xv[blk.members[0]];
                double nrm = 0.0;
                for (size_t i = 1; i < blk.members.size(); ++i)
                    nrm += xv[blk.members[i]] * xv[blk.members[i]];
                viol = std::max(viol, (std::sqrt(nrm) - t) / (1.0 + std::abs(t)));
            } else {
                double u = xv[blk.members[0]], v = xv[blk.members[1]];
                double nrm = 0.0;
                for (size_t i = 2; i < blk.members.size(); ++i)
                    nrm += xv[blk.members[i]] * xv[blk.members[i]];
                viol = std::max({viol, (nrm - u * v) / (1.0 + std::abs(u * v)), -u, -v});
            }
        }
        sol.max_residual = viol;
    }
    return sol;
}

}  // namespace opf
