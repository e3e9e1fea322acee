#include <iostream>

#include "CLI11.hpp"
#include "pngd/cli.hpp"
#include "pngd/determinantal.hpp"

namespace pngd::cli {

int run(int argc, char** argv) {
    CLI::App app{"PNG droplet simulations and exact determinantal curves"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string output = "-", format;
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output, "output file, '-' for stdout");
        sub->add_option("--format", format, "csv or json (default: by file extension)")->check(CLI::IsMember({"csv", "json"}));
    };

    SimulateConfig sim;
    auto* s = app.add_subcommand("simulate", "Monte Carlo samples of an observable");
    s->add_option("--observable", sim.observable, "h0 flat-prob scaled joint rsk-h0 rsk-steps gw-h0 gw-steps discrete-h0");
    s->add_option("--t", sim.t, "time")->required();
    s->add_option("--y", sim.y, "scaled position for scaled/joint");
    s->add_option("--delta", sim.delta, "lattice spacing for discrete-h0");
    s->add_option("--samples", sim.samples, "number of replicas");
    s->add_option("--seed", sim.seed, "master seed");
    s->add_option("--threads", sim.threads, "worker threads (results do not depend on it)");
    add_output(s);

    ExactConfig ex;
    auto* e = app.add_subcommand("exact", "exact curves from the determinantal formulas");
    e->add_option("--curve", ex.curve, "f2 density painleve height-cdf joint g")->required();
    e->add_option("--t", ex.t, "time for height-cdf");
    e->add_option("--grid", ex.grid, "lo:hi:step or a,b,c");
    e->add_option("--y", ex.y, "y value(s): v, a,b,c, lo:hi:step or lo:hi:log[:n]");
    add_output(e);

    std::string file_a, file_b;
    auto* c = app.add_subcommand("compare", "distances between a simulated and an exact table");
    c->add_option("sim", file_a, "first table")->required();
    c->add_option("exact", file_b, "second table")->required();
    double ks_tol = 0, tv_tol = 0;
    c->add_option("--ks-tol", ks_tol, "KS tolerance (default 0.05 or PNGD_KS_TOL)");
    c->add_option("--tv-tol", tv_tol, "TV tolerance (default 0.02 or PNGD_TV_TOL)");
    add_output(c);

    ConvergenceConfig cv;
    auto* v = app.add_subcommand("convergence", "edge-scaling or discrete-to-continuum convergence tables");
    v->add_option("--kind", cv.kind, "kernel or discrete");
    v->add_option("--t-list", cv.t_list, "times for the kernel report");
    v->add_option("--y", cv.y, "scaled position of the first point");
    v->add_option("--y2", cv.y2, "scaled position of the second point");
    v->add_option("--lo", cv.lo, "left end of the u window");
    v->add_option("--hi", cv.hi, "right end of the u window");
    v->add_option("--t", cv.t, "time for the discrete report");
    v->add_option("--deltas", cv.deltas, "lattice spacings for the discrete report");
    v->add_option("--replicas", cv.replicas, "replicas per spacing");
    v->add_option("--seed", cv.seed, "master seed");
    add_output(v);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        const Tolerances tol = Tolerances::from_env();
        const Format f = format.empty() ? format_from_path(output) : format_from_name(format);
        if (s->parsed()) {
            write_table(cmd_simulate(sim), output, f);
        } else if (e->parsed()) {
            ex.fredholm_tol = tol.fredholm;
            write_table(cmd_exact(ex), output, f);
        } else if (c->parsed()) {
            Tolerances t = tol;
            if (ks_tol > 0) t.ks = ks_tol;
            if (tv_tol > 0) t.tv = tv_tol;
            const ComparisonReport r = cmd_compare(read_table(file_a), read_table(file_b), t);
            DistTable out = r.table();
            out.meta["ks_tol"] = std::to_string(t.ks);
            out.meta["tv_tol"] = std::to_string(t.tv);
            out.meta["inputs"] = file_a + " " + file_b;
            write_table(out, output, f);
            return r.pass ? kOk : kCompareFail;
        } else if (v->parsed()) {
            write_table(cmd_convergence(cv), output, f);
        }
    } catch (const CertificationError& err) {
        std::cerr << "pngd: certification failure: " << err.what() << '\n';
        return kCertification;
    } catch (const InputError& err) {
        std::cerr << "pngd: " << err.what() << '\n';
        return kInvalidInput;
    } catch (const std::invalid_argument& err) {
        std::cerr << "pngd: invalid argument: " << err.what() << '\n';
        return kInvalidInput;
    } catch (const std::exception& err) {
        std::cerr << "pngd: error: " << err.what() << '\n';
        return kInvalidInput;
    }
    return kOk;
}

}  // namespace pngd::cli
