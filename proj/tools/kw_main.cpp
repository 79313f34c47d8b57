// kw -- scenario runner for the lattice Kapustin-Witten / complex Yang-Mills
// identity suite.  Exit codes: 0 all checks pass, 2 usage/config error,
// 3 check failure, 4 numerical divergence.

#include <iostream>

#include <CLI11.hpp>

#include "kw/scenarios.hpp"

int main(int argc, char **argv) {
    CLI::App app{"lattice Kapustin-Witten / complex Yang-Mills toolkit"};
    app.option_defaults()->always_capture_default();

    kw::RunConfig cfg;
    std::string sizes_csv;

    app.add_option("scenario", cfg.scenario,
                   "one of: identities, kw-check, gauge-fix, minimize, flow, converge")
        ->required();
    app.set_config("--config", "", "TOML config file; command-line flags win");
    app.allow_config_extras(false);

    app.add_option("--dim", cfg.dim, "torus dimension (3 or 4)");
    app.add_option("--n", cfg.n, "sites per axis (even, >= 4)");
    app.add_option("--length", cfg.length, "physical period per axis");
    app.add_option("--stencil", cfg.stencil, "central2 | central4");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--amplitude", cfg.amplitude, "sup-norm of the random fields");
    app.add_option("--band", cfg.band, "frequency band of the random fields");
    app.add_option("--theta", cfg.theta, "family angle in radians");
    app.add_option("--out", cfg.out_dir, "output directory (report.json, CSV, snapshots)");
    app.add_option("--tol-exact", cfg.tol_exact, "tolerance for pointwise algebra checks");
    app.add_option("--tol-algebra", cfg.tol_algebra, "tolerance for assembled identities");
    app.add_option("--tol-gradient", cfg.tol_gradient, "relative finite-difference tolerance");
    app.add_option("--min-order", cfg.min_order, "required convergence order");
    app.add_option("--minimize-tol", cfg.minimize_tol, "target residual for minimize");
    app.add_option("--max-iter", cfg.max_iter, "iteration cap for minimize");
    app.add_option("--gauge-tol", cfg.gauge_tol, "Coulomb gauge tolerance on |d*A|");
    app.add_option("--gauge-max-iter", cfg.gauge_max_iter, "gauge fixing iteration cap");
    app.add_option("--dt", cfg.dt, "flow time step");
    app.add_option("--steps", cfg.steps, "flow step count");
    app.add_option("--scheme", cfg.flow_scheme, "rk4 | euler");
    app.add_option("--study", cfg.study, "convergence study name");
    app.add_option("--sizes", cfg.sizes, "grid sizes for convergence studies");

    try {
        app.parse(argc, argv);
        cfg.validate();
    } catch (const CLI::CallForHelp &e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        kw::Report rep = kw::run_scenario(cfg);
        rep.print(std::cout);
        if (rep.diverged) {
            std::cerr << "divergence: " << rep.divergence_note << "\n";
            return 4;
        }
        return rep.all_pass() ? 0 : 3;
    } catch (const kw::DivergenceError &e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
