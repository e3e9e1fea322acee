#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "airy_internal.hpp"
#include "pngd/determinantal.hpp"
#include "pngd/special_fn.hpp"

namespace pngd {

namespace {

using special::AiryValue;

// e^{-yH}(u,v) for H = -d^2/du^2 + u
double heat_kernel(double u, double v, double y) {
    const double d = u - v;
    return std::exp(-d * d / (4 * y) - y * (u + v) / 2 + y * y * y / 12) / std::sqrt(4 * std::numbers::pi * y);
}

// Gauss-Legendre panels with 16 nodes each on [0, len].
void lambda_rule(double len, int per_unit, std::vector<double>& x, std::vector<double>& w) {
    const int panels = std::max(1, static_cast<int>(std::ceil(len * per_unit / 16.0)));
    const QuadratureGrid g = QuadratureGrid::gauss_legendre(0.0, len, 16, panels);
    x = g.nodes;
    w = g.weights;
}

// mu range for e^{-+mu y} Ai(u+mu) Ai(v+mu): beyond u + mu = 12 the product is < 1e-23
double mu_extent(double umin) { return std::max(4.0, 12.0 - umin); }

}  // namespace

double airy_k_ba(double u, double v, double y) {
    if (!(y > 0)) throw std::invalid_argument("airy_k_ba: y must be positive");
    std::vector<double> mu, w;
    lambda_rule(mu_extent(std::min(u, v)), 32, mu, w);
    double s = 0;
    for (std::size_t k = 0; k < mu.size(); ++k)
        s += w[k] * std::exp(-mu[k] * y) * special::airy_ai(u + mu[k]) * special::airy_ai(v + mu[k]);
    return s;
}

double airy_k_ab(double u, double v, double y) {
    if (!(y > 0)) throw std::invalid_argument("airy_k_ab: y must be positive");
    std::vector<double> lam, w;
    double s = 0;
    if (y < 0.5) {
        lambda_rule(mu_extent(std::min(u, v)), 32, lam, w);
        for (std::size_t k = 0; k < lam.size(); ++k)
            s += w[k] * std::exp(lam[k] * y) * special::airy_ai(u + lam[k]) * special::airy_ai(v + lam[k]);
        return s - heat_kernel(u, v, y);
    }
    lambda_rule(39.0 / y, 32, lam, w);
    for (std::size_t k = 0; k < lam.size(); ++k)
        s += w[k] * std::exp(-lam[k] * y) * special::airy_ai(u - lam[k]) * special::airy_ai(v - lam[k]);
    return -s;
}

double extended_airy_kernel(double u, double y, double u2, double y2) {
    if (y == y2) return airy_kernel(u, u2);
    return y < y2 ? airy_k_ba(u, u2, y2 - y) : airy_k_ab(u, u2, y - y2);
}

// ---------------------------------------------------------------------------

namespace {

// Nodes of one threshold window plus the Airy rows that factor the kernels:
// K_ba = R_p R_p^T, heat route E = R_h R_h^T, spectral K_ab = -R_s R_s^T.
struct NodeBlock {
    std::vector<double> x, sw;
    std::vector<AiryValue> ai;
    Eigen::MatrixXd rp, rh, rs;
    int size() const { return static_cast<int>(x.size()); }
};

enum class Kind { K, AB, BA };

}  // namespace

struct TwoPointEngine::Impl {
    double y;
    bool heat;
    int npp;
    std::vector<double> breaks;
    std::vector<double> mu, mu_w, lam, lam_w;
    NodeBlock global;
    Eigen::MatrixXd cache_k, cache_ab, cache_ba;
    std::mutex mtx;
    std::map<double, std::shared_ptr<NodeBlock>> partial;

    void fill_rows(NodeBlock& b) const {
        const int n = b.size();
        b.ai.resize(static_cast<std::size_t>(n));
        const int nm = static_cast<int>(mu.size());
        b.rp.resize(n, nm);
        if (heat) b.rh.resize(n, nm);
        if (!heat) b.rs.resize(n, static_cast<int>(lam.size()));
        for (int i = 0; i < n; ++i) {
            const double x = b.x[static_cast<std::size_t>(i)];
            b.ai[static_cast<std::size_t>(i)] = special::airy(x);
            for (int k = 0; k < nm; ++k) {
                const double a = special::airy_ai(x + mu[static_cast<std::size_t>(k)]);
                const double sw = std::sqrt(mu_w[static_cast<std::size_t>(k)]);
                b.rp(i, k) = sw * std::exp(-0.5 * mu[static_cast<std::size_t>(k)] * y) * a;
                if (heat) b.rh(i, k) = sw * std::exp(0.5 * mu[static_cast<std::size_t>(k)] * y) * a;
            }
            if (!heat)
                for (int k = 0; k < static_cast<int>(lam.size()); ++k) {
                    const double l = lam[static_cast<std::size_t>(k)];
                    b.rs(i, k) = std::sqrt(lam_w[static_cast<std::size_t>(k)]) * std::exp(-0.5 * l * y) *
                                 special::airy_ai(x - l);
                }
        }
    }

    // sw_i sw_j kernel(x_i, y_j) for rows [x0, x0+nx) of X and [y0, y0+ny) of Y
    Eigen::MatrixXd cross(Kind kind, const NodeBlock& X, int x0, int nx, const NodeBlock& Y, int y0, int ny) const {
        Eigen::MatrixXd m(nx, ny);
        if (nx == 0 || ny == 0) return m;
        switch (kind) {
            case Kind::K:
                for (int i = 0; i < nx; ++i)
                    for (int j = 0; j < ny; ++j) {
                        const auto ix = static_cast<std::size_t>(x0 + i), jy = static_cast<std::size_t>(y0 + j);
                        m(i, j) = detail::airy_kernel_from_values(X.x[ix], Y.x[jy], X.ai[ix], Y.ai[jy]);
                    }
                break;
            case Kind::BA:
                m.noalias() = X.rp.middleRows(x0, nx) * Y.rp.middleRows(y0, ny).transpose();
                break;
            case Kind::AB:
                if (heat) {
                    m.noalias() = X.rh.middleRows(x0, nx) * Y.rh.middleRows(y0, ny).transpose();
                    for (int i = 0; i < nx; ++i)
                        for (int j = 0; j < ny; ++j)
                            m(i, j) -= heat_kernel(X.x[static_cast<std::size_t>(x0 + i)],
                                                   Y.x[static_cast<std::size_t>(y0 + j)], y);
                } else {
                    m.noalias() = -X.rs.middleRows(x0, nx) * Y.rs.middleRows(y0, ny).transpose();
                }
                break;
        }
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                m(i, j) *= X.sw[static_cast<std::size_t>(x0 + i)] * Y.sw[static_cast<std::size_t>(y0 + j)];
        return m;
    }

    const Eigen::MatrixXd& cache(Kind k) const { return k == Kind::K ? cache_k : k == Kind::AB ? cache_ab : cache_ba; }

    struct View {
        std::shared_ptr<NodeBlock> part;
        int start = 0;  // first global node used
        int size(int ng) const { return (part ? part->size() : 0) + (ng - start); }
    };

    View view(double a) {
        View v;
        const int ng = global.size();
        if (a < breaks.front() - 1e-12) throw std::invalid_argument("TwoPointEngine: threshold below the lower limit");
        if (a >= breaks.back()) {
            v.start = ng;
            return v;
        }
        const auto it = std::upper_bound(breaks.begin(), breaks.end(), a + 1e-12);
        const int k0 = static_cast<int>(it - breaks.begin());
        v.start = k0 * npp;
        if (breaks[static_cast<std::size_t>(k0)] - a > 1e-12) {
            std::lock_guard<std::mutex> lock(mtx);
            auto& slot = partial[a];
            if (!slot) {
                auto nb = std::make_shared<NodeBlock>();
                const QuadratureGrid g = QuadratureGrid::gauss_legendre(a, breaks[static_cast<std::size_t>(k0)], npp);
                nb->x = g.nodes;
                for (double w : g.weights) nb->sw.push_back(std::sqrt(w));
                fill_rows(*nb);
                slot = nb;
            }
            v.part = slot;
        }
        return v;
    }

    // kernel matrix between the node sets of two views (rows r, columns c)
    Eigen::MatrixXd assemble(Kind kind, const View& r, const View& c) const {
        const int ng = global.size();
        const int pr = r.part ? r.part->size() : 0, pc = c.part ? c.part->size() : 0;
        const int gr = ng - r.start, gc = ng - c.start;
        Eigen::MatrixXd m(pr + gr, pc + gc);
        m.bottomRightCorner(gr, gc) = cache(kind).block(r.start, c.start, gr, gc);
        if (pr > 0) {
            m.topRightCorner(pr, gc) = cross(kind, *r.part, 0, pr, global, c.start, gc);
            if (pc > 0) m.topLeftCorner(pr, pc) = cross(kind, *r.part, 0, pr, *c.part, 0, pc);
        }
        if (pc > 0) m.bottomLeftCorner(gr, pc) = cross(kind, *c.part, 0, pc, global, r.start, gr).transpose();
        return m;
    }
};

TwoPointEngine::TwoPointEngine(double y, TwoPointConfig cfg) : y_(y), cfg_(cfg), impl_(std::make_unique<Impl>()) {
    if (!(y > 0)) throw std::invalid_argument("TwoPointEngine: y must be positive");
    if (!(cfg.upper > cfg.lower) || cfg.nodes_per_panel < 2 || cfg.refine < 1)
        throw std::invalid_argument("TwoPointEngine: bad configuration");
    Impl& im = *impl_;
    im.y = y;
    im.heat = heat_route();
    im.npp = cfg.nodes_per_panel * cfg.refine;
    const double width = std::clamp(cfg.panel_scale * std::sqrt(y), 0.2, 1.0);
    const int panels = static_cast<int>(std::ceil((cfg.upper - cfg.lower) / width - 1e-9));
    for (int p = 0; p <= panels; ++p) im.breaks.push_back(cfg.lower + (cfg.upper - cfg.lower) * p / panels);

    const int per_unit = cfg.lambda_nodes_per_unit * cfg.refine;
    lambda_rule(mu_extent(cfg.lower), per_unit, im.mu, im.mu_w);
    if (!im.heat) lambda_rule(cfg.lambda_cutoff / y, per_unit, im.lam, im.lam_w);

    const QuadratureGrid g = QuadratureGrid::from_breakpoints(im.breaks, im.npp);
    im.global.x = g.nodes;
    for (double w : g.weights) im.global.sw.push_back(std::sqrt(w));
    im.fill_rows(im.global);
    const int ng = im.global.size();
    im.cache_k = im.cross(Kind::K, im.global, 0, ng, im.global, 0, ng);
    im.cache_ab = im.cross(Kind::AB, im.global, 0, ng, im.global, 0, ng);
    im.cache_ba = im.cross(Kind::BA, im.global, 0, ng, im.global, 0, ng);
}

TwoPointEngine::~TwoPointEngine() = default;
TwoPointEngine::TwoPointEngine(TwoPointEngine&&) noexcept = default;

ExtendedAiryBlocks TwoPointEngine::blocks(double a, double b) const {
    const Impl::View va = impl_->view(a), vb = impl_->view(b);
    ExtendedAiryBlocks out;
    out.kaa = impl_->assemble(Kind::K, va, va);
    out.kbb = impl_->assemble(Kind::K, vb, vb);
    out.kab = impl_->assemble(Kind::AB, va, vb);
    out.kba = impl_->assemble(Kind::BA, vb, va);
    auto grid = [&](const Impl::View& v) {
        QuadratureGrid g;
        auto add = [&](const NodeBlock& nb, int from) {
            for (int i = from; i < nb.size(); ++i) {
                g.nodes.push_back(nb.x[static_cast<std::size_t>(i)]);
                g.weights.push_back(nb.sw[static_cast<std::size_t>(i)] * nb.sw[static_cast<std::size_t>(i)]);
            }
        };
        if (v.part) add(*v.part, 0);
        add(impl_->global, v.start);
        g.nodes_per_panel = impl_->npp;
        if (!g.nodes.empty()) g.breakpoints = {g.nodes.front(), impl_->breaks.back()};
        return g;
    };
    out.grid_a = grid(va);
    out.grid_b = grid(vb);
    return out;
}

double TwoPointEngine::joint_cdf(double a, double b) const {
    const ExtendedAiryBlocks bl = blocks(a, b);
    const auto na = bl.kaa.rows(), nb = bl.kbb.rows();
    if (na + nb == 0) return 1.0;
    Eigen::MatrixXd m(na + nb, na + nb);
    m << bl.kaa, bl.kab, bl.kba, bl.kbb;
    m = -m;
    m.diagonal().array() += 1.0;
    return m.partialPivLu().determinant();
}

double joint_cdf(double a, double b, double y, const TwoPointConfig& cfg) {
    return TwoPointEngine(y, cfg).joint_cdf(a, b);
}

// ---------------------------------------------------------------------------

namespace {

const F2Moments& cached_moments() {
    static const F2Moments m = tracy_widom_moments();
    return m;
}

}  // namespace

TwoPointG two_point_g(double y, const TwoPointGConfig& cfg) {
    if (!(y > 0)) throw std::invalid_argument("two_point_g: y must be positive");
    const TwoPointEngine eng(y, cfg.engine);
    TwoPointG out;
    out.a2 = cached_moments().variance;
    const double top = cfg.engine.upper;
    const int panels = static_cast<int>(std::ceil(cfg.box_hi - cfg.box_lo));
    const QuadratureGrid outer = QuadratureGrid::gauss_legendre(cfg.box_lo, cfg.box_hi, cfg.outer_nodes, panels);
    std::map<double, double> fcache;
    // marginal on the engine's own nodes, so that discretisation errors cancel in F - H
    auto F = [&](double a) {
        auto it = fcache.find(a);
        if (it != fcache.end()) return it->second;
        const double v = a >= top ? 1.0 : eng.joint_cdf(a, top);
        fcache[a] = v;
        return v;
    };

    if (y < cfg.increment_route_below) {
        // E(Y-X)^2 = 4 int int_{a<b} [F(a) - H(a,b)] by stationarity and H(a,b) = H(b,a)
        out.method = "increment";
        const double D = 8.0 * std::sqrt(2.0 * y);
        const QuadratureGrid dg = QuadratureGrid::gauss_legendre(0.0, D, 12, 2);
        double s = 0;
        for (std::size_t i = 0; i < outer.size(); ++i) {
            const double a = outer.nodes[i], fa = F(a);
            if (fa < 1e-12) continue;
            double inner = 0;
            for (std::size_t k = 0; k < dg.size(); ++k) {
                const double b = a + dg.nodes[k];
                if (b >= top) continue;
                if (std::min(fa, 1 - tracy_widom_f2(b, QuadratureGrid::gauss_legendre(b, b + 16, 40))) < 1e-12) continue;
                inner += dg.weights[k] * (fa - eng.joint_cdf(a, b));
            }
            s += outer.weights[i] * inner;
        }
        out.g = 4 * s;
        out.covariance = out.a2 - out.g / 2;
    } else {
        out.method = "covariance";
        std::vector<double> f(outer.size());
        for (std::size_t i = 0; i < outer.size(); ++i) f[i] = F(outer.nodes[i]);
        double cov = 0;
        for (std::size_t i = 0; i < outer.size(); ++i)
            for (std::size_t j = i; j < outer.size(); ++j) {
                const double bound = std::sqrt(f[i] * (1 - f[i]) * f[j] * (1 - f[j]));
                if (bound < 1e-12) continue;
                const double h = eng.joint_cdf(outer.nodes[i], outer.nodes[j]);
                cov += (i == j ? 1.0 : 2.0) * outer.weights[i] * outer.weights[j] * (h - f[i] * f[j]);
            }
        out.covariance = cov;
        out.g = 2 * out.a2 - 2 * cov;
    }

    // spot certification: one representative determinant under node doubling
    TwoPointConfig fine = cfg.engine;
    fine.refine = 2 * cfg.engine.refine;
    const double h1 = eng.joint_cdf(-2.0, -1.0), h2 = TwoPointEngine(y, fine).joint_cdf(-2.0, -1.0);
    out.certification_delta = std::fabs(h1 - h2);
    if (out.certification_delta > cfg.certify_tol)
        throw CertificationError("two_point_g: joint determinant moved by " + std::to_string(out.certification_delta) +
                                 " under node doubling at y=" + std::to_string(y));
    return out;
}

TailCoefficient covariance_tail_coefficient(double lambda_cutoff, int a_nodes) {
    if (!(lambda_cutoff > 0) || a_nodes < 14) throw std::invalid_argument("covariance_tail_coefficient: bad arguments");
    const int a_panels = 14;
    const QuadratureGrid ag = QuadratureGrid::gauss_legendre(-7.0, 7.0, std::max(4, a_nodes / a_panels), a_panels);
    // per a: F(a), eigenvalues kappa and squared overlaps (v^T W^{1/2} Ai)^2
    struct Spec {
        double f;
        Eigen::VectorXd kappa, p;
    };
    std::vector<Spec> specs;
    for (double a : ag.nodes) {
        const QuadratureGrid g = QuadratureGrid::gauss_legendre(a, a + 16.0, 48);
        const Eigen::MatrixXd k = detail::airy_nystrom(g);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
        Eigen::VectorXd phi(static_cast<Eigen::Index>(g.size()));
        for (std::size_t i = 0; i < g.size(); ++i) phi(static_cast<Eigen::Index>(i)) = std::sqrt(g.weights[i]) * special::airy_ai(g.nodes[i]);
        Spec s;
        s.kappa = es.eigenvalues();
        s.p = (es.eigenvectors().transpose() * phi).array().square();
        if (s.kappa.maxCoeff() >= 1.0) throw CertificationError("covariance_tail_coefficient: eigenvalue of P_aK reached 1");
        s.f = (1.0 - s.kappa.array()).prod();
        specs.push_back(std::move(s));
    }
    auto I = [&](double lam) {
        const double el = std::exp(lam);
        double s = 0;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const Spec& sp = specs[i];
            const double r = (sp.kappa.array() * sp.p.array() / (el - sp.kappa.array())).sum();
            s += ag.weights[i] * sp.f * r;
        }
        return s;
    };
    auto integrate = [&](double cut) {
        const int panels = static_cast<int>(std::ceil(cut / 0.5));
        const QuadratureGrid lg = QuadratureGrid::gauss_legendre(0.0, cut, 12, panels);
        double c = 0;
        for (std::size_t k = 0; k < lg.size(); ++k) {
            const double v = I(lg.nodes[k]);
            c += lg.weights[k] * v * v;
        }
        return c;
    };
    TailCoefficient out;
    out.value = integrate(lambda_cutoff);
    out.value_doubled_cutoff = integrate(2 * lambda_cutoff);
    return out;
}

namespace detail {

Eigen::MatrixXd extended_airy_matrix(const std::vector<double>& u, double y, const std::vector<double>& v, double y2) {
    const int n = static_cast<int>(u.size()), m = static_cast<int>(v.size());
    Eigen::MatrixXd out(n, m);
    if (y == y2) {
        std::vector<AiryValue> au, av;
        for (double x : u) au.push_back(special::airy(x));
        for (double x : v) av.push_back(special::airy(x));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                out(i, j) = airy_kernel_from_values(u[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)],
                                                    au[static_cast<std::size_t>(i)], av[static_cast<std::size_t>(j)]);
        return out;
    }
    double umin = 0.0;
    for (double x : u) umin = std::min(umin, x);
    for (double x : v) umin = std::min(umin, x);
    const double d = std::fabs(y - y2);
    // rows r(x, k) = sqrt(w_k) e^{s lam_k d / 2} Ai(x + sign lam_k); K = sign * R_u R_v^T
    std::vector<double> lam, w;
    double sgn = 1.0, dir = 1.0, grow = -1.0;
    const bool heat = y > y2 && d < 0.5;
    if (y < y2 || heat) {
        lambda_rule(mu_extent(umin), 32, lam, w);
        if (heat) grow = 1.0;
    } else {
        lambda_rule(39.0 / d, 32, lam, w);
        sgn = -1.0;
        dir = -1.0;
    }
    auto rows = [&](const std::vector<double>& pts) {
        Eigen::MatrixXd r(static_cast<int>(pts.size()), static_cast<int>(lam.size()));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = 0; k < lam.size(); ++k)
                r(static_cast<int>(i), static_cast<int>(k)) =
                    std::sqrt(w[k]) * std::exp(0.5 * grow * lam[k] * d) * special::airy_ai(pts[i] + dir * lam[k]);
        return r;
    };
    out = sgn * rows(u) * rows(v).transpose();
    if (heat)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                out(i, j) -= heat_kernel(u[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)], d);
    return out;
}

}  // namespace detail

}  // namespace pngd
