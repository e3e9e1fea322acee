#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "pngd/cli.hpp"
#include "pngd/determinantal.hpp"
#include "pngd/multilayer.hpp"
#include "pngd/sim.hpp"
#include "pngd/stats.hpp"

namespace pngd::cli {

namespace {

std::string num(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// out[r] = f(r); replica r never depends on which thread runs it.
template <class T>
std::vector<T> parallel_map(std::int64_t n, int threads, const std::function<T(std::int64_t)>& f) {
    std::vector<T> out(static_cast<std::size_t>(n));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr err;
    std::mutex em;
    auto work = [&] {
        for (std::int64_t r; (r = next.fetch_add(1)) < n;) {
            try {
                out[static_cast<std::size_t>(r)] = f(r);
            } catch (...) {
                std::lock_guard<std::mutex> l(em);
                if (!err) err = std::current_exception();
                next = n;
            }
        }
    };
    const int k = std::max(1, std::min<int>(threads, static_cast<int>(std::min<std::int64_t>(n, 256))));
    std::vector<std::thread> pool;
    for (int i = 1; i < k; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

DistTable pmf_table(const std::vector<std::int64_t>& v) {
    DistTable t;
    t.meta["kind"] = "pmf";
    t.columns = {"value", "count", "probability"};
    if (v.empty()) return t;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    std::vector<std::int64_t> counts(static_cast<std::size_t>(*hi - *lo + 1));
    for (auto x : v) ++counts[static_cast<std::size_t>(x - *lo)];
    for (std::size_t i = 0; i < counts.size(); ++i)
        t.rows.push_back({static_cast<double>(*lo + static_cast<std::int64_t>(i)), static_cast<double>(counts[i]),
                          static_cast<double>(counts[i]) / static_cast<double>(v.size())});
    return t;
}

void provenance(DistTable& t, const std::string& command) {
    t.meta["command"] = command;
    t.meta["version"] = kVersion;
}

// Discrete distribution on integers: support start and probabilities.
struct Pmf {
    std::int64_t lo = 0;
    std::vector<double> p;
};

Pmf pmf_of(const DistTable& t) {
    const std::string kind = t.get("kind");
    Pmf out;
    std::vector<double> x, p;
    if (kind == "pmf") {
        x = t.col("value");
        p = t.col("probability");
    } else if (kind == "cdf" && t.get("domain") == "integer") {
        x = t.col("x");
        p = t.col("pmf");
    } else {
        throw InputError("table is not an integer distribution");
    }
    if (x.empty()) throw InputError("empty distribution");
    out.lo = static_cast<std::int64_t>(std::llround(x.front()));
    out.p.assign(static_cast<std::size_t>(std::llround(x.back()) - out.lo + 1), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto k = std::llround(x[i]) - out.lo;
        if (k < 0 || k >= static_cast<std::int64_t>(out.p.size())) throw InputError("integer support not sorted");
        out.p[static_cast<std::size_t>(k)] = p[i];
    }
    return out;
}

bool is_integer_dist(const DistTable& t) {
    return t.get("kind") == "pmf" || (t.get("kind") == "cdf" && t.get("domain") == "integer");
}

std::pair<double, double> pmf_moments(const Pmf& a) {
    double m = 0, s = 0, z = 0;
    for (std::size_t i = 0; i < a.p.size(); ++i) {
        const double x = static_cast<double>(a.lo) + static_cast<double>(i);
        z += a.p[i];
        m += x * a.p[i];
        s += x * x * a.p[i];
    }
    m /= z;
    return {m, s / z - m * m};
}

std::pair<double, double> sample_moments(const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return {m, s / static_cast<double>(v.size() > 1 ? v.size() - 1 : 1)};
}

// Piecewise linear CDF from a real-domain cdf table, clamped outside.
struct CdfCurve {
    std::vector<double> x, f;
    double operator()(double v) const {
        if (v <= x.front()) return v < x.front() ? 0.0 : f.front();
        if (v >= x.back()) return 1.0;
        const auto it = std::upper_bound(x.begin(), x.end(), v);
        const std::size_t k = static_cast<std::size_t>(it - x.begin());
        const double w = (v - x[k - 1]) / (x[k] - x[k - 1]);
        return f[k - 1] + w * (f[k] - f[k - 1]);
    }
    std::pair<double, double> moments() const {
        double m = 0, s = 0, z = 0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            const double dp = f[i] - f[i - 1], c = 0.5 * (x[i] + x[i - 1]);
            z += dp;
            m += c * dp;
            s += c * c * dp;
        }
        m /= z;
        return {m, s / z - m * m};
    }
};

std::vector<double> shifted_samples(const DistTable& t) {
    std::vector<double> v = t.col("value");
    // h_t(y) + y^2 has the same limit law as h_t(0)
    const double y = std::stod(t.get("y", "0"));
    for (double& x : v) x += y * y;
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<double> parse_values(const std::string& spec) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw InputError("bad number '" + s + "' in '" + spec + "'");
        }
        if (used != s.size()) throw InputError("bad number '" + s + "' in '" + spec + "'");
        return v;
    };
    std::vector<std::string> parts;
    {
        std::string cur;
        std::istringstream in(spec);
        while (std::getline(in, cur, ':')) parts.push_back(cur);
    }
    std::vector<double> out;
    if (parts.size() == 1) {
        std::string cur;
        std::istringstream in(spec);
        while (std::getline(in, cur, ',')) out.push_back(number(cur));
        if (out.empty()) throw InputError("empty value list");
        return out;
    }
    if (parts.size() < 3 || parts.size() > 4) throw InputError("range must be lo:hi:step or lo:hi:log[:n]: " + spec);
    const double lo = number(parts[0]), hi = number(parts[1]);
    if (!(hi >= lo)) throw InputError("range with hi < lo: " + spec);
    if (parts[2] == "log") {
        const int n = parts.size() == 4 ? static_cast<int>(number(parts[3])) : 12;
        if (!(lo > 0) || n < 2) throw InputError("log range needs lo > 0 and n >= 2: " + spec);
        for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
        return out;
    }
    if (parts.size() != 3) throw InputError("bad range: " + spec);
    const double step = number(parts[2]);
    if (!(step > 0)) throw InputError("range step must be positive: " + spec);
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    if (n > 10'000'000) throw InputError("range too long: " + spec);
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

DistTable cmd_simulate(const SimulateConfig& c) {
    if (c.samples < 1) throw InputError("--samples must be at least 1");
    if (!(c.t > 0)) throw InputError("--t must be positive");
    if (c.threads < 1) throw InputError("--threads must be at least 1");
    const std::string& o = c.observable;
    auto rng = [&](std::int64_t r) { return Rng::for_replica(c.seed, static_cast<std::uint64_t>(r)); };
    using I = std::int64_t;
    DistTable t;
    if (o == "h0" || o == "rsk-h0" || o == "rsk-steps" || o == "gw-h0" || o == "gw-steps" || o == "discrete-h0") {
        int tau = 0;
        double q = 0;
        if (o == "discrete-h0") {
            if (!(c.delta > 0)) throw InputError("--delta must be positive");
            q = 4 * c.delta * c.delta;
            if (!(q < 1)) throw InputError("--delta must satisfy 4 delta^2 < 1");
            tau = static_cast<int>(std::floor(c.t / c.delta + 1e-9));
        }
        const auto v = parallel_map<I>(c.samples, c.threads, [&](I r) -> I {
            Rng g = rng(r);
            if (o == "h0") return lis_length(sample_poisson_triangle(c.t, g));
            if (o == "rsk-h0") return rsk_evolve(sample_poisson_triangle(c.t, g)).height(0, 0.0);
            if (o == "rsk-steps") return rsk_evolve(sample_poisson_triangle(c.t, g)).total_up_steps();
            if (o == "gw-h0") return gw_evolve(c.t, g).height(0, 0.0);
            if (o == "gw-steps") return gw_evolve(c.t, g).total_up_steps();
            return discrete_evolve(tau, c.delta, q, g).height(0, 0);
        });
        t = pmf_table(v);
        if (o == "discrete-h0") {
            t.meta["delta"] = num(c.delta);
            t.meta["tau"] = std::to_string(tau);
            t.meta["q"] = num(q);
        }
    } else if (o == "flat-prob") {
        const auto v = parallel_map<I>(c.samples, c.threads,
                                       [&](I r) -> I { Rng g = rng(r); return sample_poisson_triangle(c.t, g).points.empty(); });
        const double k = static_cast<double>(std::accumulate(v.begin(), v.end(), I{0}));
        const double n = static_cast<double>(c.samples), p = k / n;
        t.meta["kind"] = "curve";
        t.columns = {"flat_count", "samples", "fraction", "sigma", "expected"};
        t.rows.push_back({k, n, p, std::sqrt(p * (1 - p) / n), std::exp(-2 * c.t * c.t)});
    } else if (o == "scaled" || o == "joint") {
        if (!(std::fabs(c.y) * std::pow(c.t, 2.0 / 3) < c.t)) throw InputError("--y leaves the light cone");
        const auto v = parallel_map<std::pair<double, double>>(c.samples, c.threads, [&](I r) {
            Rng g = rng(r);
            // h(x,t) is the longest chain through the cone of (x,t); much cheaper than the droplet
            const PointSet ps = sample_poisson_triangle(c.t, g);
            const double c3 = std::cbrt(c.t);
            auto sc = [&](double y) { return (static_cast<double>(lis_length_at(ps, y * c3 * c3)) - 2 * c.t) / c3; };
            return std::pair{sc(0.0), sc(c.y)};
        });
        t.meta["kind"] = "samples";
        t.meta["y"] = num(o == "scaled" ? c.y : 0.0);
        t.meta["lattice_step"] = num(1.0 / std::cbrt(c.t));
        if (o == "scaled") {
            t.columns = {"value"};
            for (const auto& [a, b] : v) t.rows.push_back({b});
        } else {
            t.meta["y2"] = num(c.y);
            t.columns = {"value", "value_y"};
            for (const auto& [a, b] : v) t.rows.push_back({a, b});
        }
    } else {
        throw InputError("unknown observable '" + o + "'");
    }
    provenance(t, "simulate");
    t.meta["observable"] = o;
    t.meta["t"] = num(c.t);
    t.meta["samples"] = std::to_string(c.samples);
    t.meta["seed"] = std::to_string(c.seed);
    t.meta["seed_schedule"] = "replica r uses Rng::for_replica(seed, r)";
    if (o == "scaled" || o == "joint") t.meta["y_requested"] = num(c.y);
    return t;
}

DistTable cmd_exact(const ExactConfig& c) {
    if (!(c.fredholm_tol > 0)) throw InputError("Fredholm tolerance must be positive");
    DistTable t;
    t.meta["fredholm_tol"] = num(c.fredholm_tol);
    if (c.curve == "f2") {
        t.meta["kind"] = "cdf";
        t.meta["domain"] = "real";
        t.columns = {"x", "cdf"};
        for (double a : parse_values(c.grid))
            t.rows.push_back({a, a > 40 ? 1.0 : std::clamp(tracy_widom_f2_certified(a, c.fredholm_tol).value, 0.0, 1.0)});
        t.meta["grid"] = c.grid;
    } else if (c.curve == "density") {
        t.meta["kind"] = "curve";
        t.columns = {"x", "density"};
        for (double u : parse_values(c.grid)) t.rows.push_back({u, airy_density(u)});
        t.meta["grid"] = c.grid;
    } else if (c.curve == "painleve") {
        t.meta["kind"] = "curve";
        t.columns = {"x", "q", "qp", "f2"};
        for (double a : parse_values(c.grid)) {
            if (a < -8) throw InputError("painleve curve is validated for x >= -8");
            const auto p = painleve_ii(a);
            t.rows.push_back({a, p.q, p.qp, p.f2});
        }
        t.meta["grid"] = c.grid;
    } else if (c.curve == "height-cdf") {
        if (!(c.t > 0)) throw InputError("--t must be positive");
        t.meta["kind"] = "cdf";
        t.meta["domain"] = "integer";
        t.meta["t"] = num(c.t);
        t.columns = {"x", "cdf", "pmf"};
        double prev = 0.0;
        for (int n = 0;; ++n) {
            const double f = height_cdf_exact(c.t, n + 1, c.fredholm_tol).value;  // P(h <= n)
            t.rows.push_back({static_cast<double>(n), f, f - prev});
            prev = f;
            if (1 - f < c.fredholm_tol && n >= 2 * c.t) break;
        }
    } else if (c.curve == "joint") {
        const auto ys = parse_values(c.y);
        if (ys.size() != 1 || !(ys[0] > 0)) throw InputError("joint curve needs a single --y > 0");
        const TwoPointEngine eng(ys[0]);
        t.meta["kind"] = "curve";
        t.meta["y"] = num(ys[0]);
        t.meta["grid"] = c.grid;
        t.columns = {"a", "b", "cdf"};
        const auto g = parse_values(c.grid);
        for (double a : g) {
            if (a < -8) throw InputError("joint curve grid must stay above -8");
            for (double b : g) t.rows.push_back({a, b, std::clamp(eng.joint_cdf(std::min(a, 8.0), std::min(b, 8.0)), 0.0, 1.0)});
        }
    } else if (c.curve == "g") {
        t.meta["kind"] = "curve";
        t.meta["y"] = c.y;
        t.meta["route_codes"] = "0=increment,1=covariance";
        t.columns = {"y", "g", "a2", "covariance", "route", "certification_delta"};
        for (double y : parse_values(c.y)) {
            if (!(y > 0)) throw InputError("g curve needs y > 0");
            const auto r = two_point_g(y);
            t.rows.push_back({y, r.g, r.a2, r.covariance, r.method == "increment" ? 0.0 : 1.0, r.certification_delta});
        }
    } else {
        throw InputError("unknown curve '" + c.curve + "'");
    }
    provenance(t, "exact");
    t.meta["curve"] = c.curve;
    return t;
}

DistTable ComparisonReport::table() const {
    DistTable t;
    provenance(t, "compare");
    t.meta["kind"] = "curve";
    t.meta["verdict"] = pass ? "pass" : "fail";
    t.columns = {"ks", "tv", "mean_delta", "variance_delta", "pass"};
    t.rows.push_back({ks, tv, mean_delta, variance_delta, pass ? 1.0 : 0.0});
    return t;
}

ComparisonReport cmd_compare(const DistTable& a, const DistTable& b, const Tolerances& tol) {
    ComparisonReport r;
    r.tv = std::nan("");
    const std::string ka = a.get("kind"), kb = b.get("kind");
    if (is_integer_dist(a) && is_integer_dist(b)) {
        const Pmf pa = pmf_of(a), pb = pmf_of(b);
        const std::int64_t lo = std::min(pa.lo, pb.lo);
        const std::int64_t hi = std::max(pa.lo + static_cast<std::int64_t>(pa.p.size()), pb.lo + static_cast<std::int64_t>(pb.p.size()));
        std::vector<double> p(static_cast<std::size_t>(hi - lo)), q(p.size());
        for (std::size_t i = 0; i < pa.p.size(); ++i) p[static_cast<std::size_t>(pa.lo - lo) + i] = pa.p[i];
        for (std::size_t i = 0; i < pb.p.size(); ++i) q[static_cast<std::size_t>(pb.lo - lo) + i] = pb.p[i];
        r.tv = stats::total_variation(p, q);
        double fp = 0, fq = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            fp += p[i];
            fq += q[i];
            r.ks = std::max(r.ks, std::fabs(fp - fq));
        }
        const auto ma = pmf_moments(pa), mb = pmf_moments(pb);
        r.mean_delta = ma.first - mb.first;
        r.variance_delta = ma.second - mb.second;
    } else if ((ka == "samples" && kb == "cdf") || (ka == "cdf" && kb == "samples")) {
        const DistTable& s = ka == "samples" ? a : b;
        const DistTable& c = ka == "samples" ? b : a;
        if (c.get("domain") != "real") throw InputError("samples can only be compared with a real-domain cdf");
        const CdfCurve F{c.col("x"), c.col("cdf")};
        if (F.x.size() < 2) throw InputError("cdf table too short");
        const auto v = shifted_samples(s);
        if (v.empty()) throw InputError("no samples");
        const double n = static_cast<double>(v.size());
        const std::string step_s = s.get("lattice_step");
        if (!step_s.empty()) {
            // lattice-valued samples: compare distribution functions at every lattice point of the range
            const double step = std::stod(step_s), eps = 1e-6 * step;
            const auto k0 = static_cast<std::int64_t>(std::floor((F.x.front() - v.front()) / step));
            const auto k1 = static_cast<std::int64_t>(std::ceil((std::max(F.x.back(), v.back()) - v.front()) / step));
            for (std::int64_t k = std::min<std::int64_t>(k0, 0); k <= k1; ++k) {
                const double x = v.front() + static_cast<double>(k) * step;
                const double e = static_cast<double>(std::upper_bound(v.begin(), v.end(), x + eps) - v.begin()) / n;
                r.ks = std::max(r.ks, std::fabs(e - F(x)));
            }
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
                const double f = F(v[i]);
                r.ks = std::max(r.ks, std::max(std::fabs(static_cast<double>(i + 1) / n - f), std::fabs(f - static_cast<double>(i) / n)));
            }
        }
        const auto ms = sample_moments(v), mc = F.moments();
        r.mean_delta = ms.first - mc.first;
        r.variance_delta = ms.second - mc.second;
    } else if (ka == "samples" && kb == "samples") {
        auto va = shifted_samples(a), vb = shifted_samples(b);
        if (va.empty() || vb.empty()) throw InputError("no samples");
        r.ks = stats::ks_two_sample(va, vb);
        const auto ma = sample_moments(va), mb = sample_moments(vb);
        r.mean_delta = ma.first - mb.first;
        r.variance_delta = ma.second - mb.second;
    } else if (ka == kb && a.columns == b.columns && a.rows.size() == b.rows.size() && !a.columns.empty()) {
        // same-grid curves: sup difference of the last column, first column must match
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            if (a.rows[i].front() != b.rows[i].front()) throw InputError("curves are on different grids");
            r.ks = std::max(r.ks, std::fabs(a.rows[i].back() - b.rows[i].back()));
        }
    } else {
        throw InputError("incompatible tables: kind '" + ka + "' vs '" + kb + "'");
    }
    r.pass = r.ks <= tol.ks && (std::isnan(r.tv) || r.tv <= tol.tv);
    return r;
}

DistTable cmd_convergence(const ConvergenceConfig& c) {
    DistTable t;
    t.meta["kind"] = "curve";
    if (c.kind == "kernel") {
        const auto ts = parse_values(c.t_list);
        for (double x : ts)
            if (!(x >= 1)) throw InputError("kernel convergence needs t >= 1");
        const auto rep = convergence_report(ts, c.y, c.y2, c.lo, c.hi);
        t.columns = {"t", "sup_lattice", "sup_box", "points"};
        for (const auto& row : rep.rows) t.rows.push_back({row.t, row.sup_lattice, row.sup_box, static_cast<double>(row.points)});
        t.meta["monotone"] = rep.monotone ? "true" : "false";
        t.meta["y"] = num(c.y);
        t.meta["y2"] = num(c.y2);
        t.meta["box"] = num(c.lo) + ":" + num(c.hi);
    } else if (c.kind == "discrete") {
        if (c.replicas < 1) throw InputError("--replicas must be at least 1");
        const auto ds = parse_values(c.deltas);
        const auto rep = discrete_to_continuum_check(c.t, ds, c.seed, c.replicas, c.replicas);
        t.columns = {"delta", "tau", "q", "ks"};
        for (const auto& row : rep.rows) t.rows.push_back({row.delta, static_cast<double>(row.tau), row.q, row.ks_distance});
        t.meta["monotone"] = rep.monotone ? "true" : "false";
        t.meta["t"] = num(c.t);
        t.meta["replicas"] = std::to_string(c.replicas);
        t.meta["seed"] = std::to_string(c.seed);
    } else {
        throw InputError("unknown convergence kind '" + c.kind + "'");
    }
    provenance(t, "convergence");
    t.meta["convergence"] = c.kind;
    return t;
}

}  // namespace pngd::cli
