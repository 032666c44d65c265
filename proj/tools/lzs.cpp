// lzs: build multistate Landau-Zener models, compute and compare S-matrices,
// print adiabatic spectra, check zero curvature and run parameter sweeps.
#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lzs/cli/commands.hpp"

namespace {

using lzs::cli::ModelOptions;

void add_model_options(CLI::App* sub, ModelOptions& mo) {
    sub->add_option("--family", mo.family, "model family: " + lzs::models::valid_family_list());
    sub->add_option("--k", mo.k, "dimension (spin family; checked for the others)");
    sub->add_option("--delta", mo.delta, "coupling: number or comma list (bowtieN)");
    sub->add_option("--slope", mo.slope, "slope: number or comma list (bowtieN)");
    sub->add_option("--eps", mo.eps, "second parameter of the bow-tie families");
    sub->add_option("--descriptor", mo.descriptor, "model descriptor JSON, inline or a file path");
    sub->add_option("--partner-form", mo.partner_form,
                    "alternative partner: su3six verified|k-on-flat-pair|b=<value>; su3adj8 adjoint|tabulated");
}

std::string join_args(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multistate Landau-Zener scattering toolkit"};
    app.require_subcommand(1);

    ModelOptions mo;
    std::optional<std::string> out, ledger_path, method, grid;
    lzs::cli::NumericOptions num;
    std::optional<double> horizon;
    std::vector<std::string> methods, entries;
    std::string trange = "-10:10";
    int steps = 400;
    bool corrupt = false;

    auto common = [&](CLI::App* sub) {
        add_model_options(sub, mo);
        sub->add_option("--out", out, "write the result to this file instead of stdout");
        sub->add_option("--ledger", ledger_path, "run ledger path (default $LZS_LEDGER or lzs_ledger.jsonl)");
    };
    auto numeric = [&](CLI::App* sub) {
        sub->add_option("--T", horizon, "oracle horizon: integrate over [-T, T]");
        sub->add_option("--rtol", num.rtol, "oracle relative tolerance");
    };

    CLI::App* model = app.add_subcommand("model", "model operations");
    model->require_subcommand(1);
    CLI::App* show = model->add_subcommand("show", "print A(eps), B and the partner E as JSON");
    common(show);

    CLI::App* smatrix = app.add_subcommand("smatrix", "S-matrix by one method");
    common(smatrix);
    numeric(smatrix);
    smatrix->add_option("--method", method, "algebraic | crossings | numeric (default depends on the family)");

    CLI::App* compare = app.add_subcommand("compare", "compare methods entrywise");
    common(compare);
    numeric(compare);
    compare->add_option("--method,--methods", methods, "methods to compare (comma list; default all available)");
    compare->add_flag("--inject-corruption", corrupt, "test mode: perturb the first result");

    CLI::App* spectrum = app.add_subcommand("spectrum", "adiabatic spectrum as CSV");
    common(spectrum);
    spectrum->add_option("--trange", trange, "time range start:stop");
    spectrum->add_option("--steps", steps, "number of grid points (>= 2)");

    CLI::App* zc = app.add_subcommand("zero-curvature", "check the zero-curvature condition");
    common(zc);
    zc->add_option("--grid", grid, "grid as t=..,..;eps=..,..");

    CLI::App* sweep = app.add_subcommand("sweep", "S-matrix entries over one ranged parameter");
    common(sweep);
    numeric(sweep);
    sweep->add_option("--method", method, "algebraic | crossings | numeric");
    sweep->add_option("--entry", entries, "row,col of an S entry to print (repeatable; default 1,1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lzs::cli::kExitInput;
    }

    lzs::cli::Ledger ledger(lzs::cli::resolve_ledger_path(ledger_path));
    const lzs::cli::Context ctx{std::cout, std::cerr, ledger, join_args(argc, argv)};
    num.horizon = horizon;

    return lzs::cli::run_guarded(std::cerr, [&]() -> int {
        if (show->parsed()) return lzs::cli::cmd_model_show(ctx, mo, out);
        if (smatrix->parsed()) return lzs::cli::cmd_smatrix(ctx, mo, method, num, out);
        if (compare->parsed()) return lzs::cli::cmd_compare(ctx, mo, methods, num, corrupt, out);
        if (spectrum->parsed()) return lzs::cli::cmd_spectrum(ctx, mo, trange, steps, out);
        if (zc->parsed()) return lzs::cli::cmd_zero_curvature(ctx, mo, grid, out);
        if (sweep->parsed()) return lzs::cli::cmd_sweep(ctx, mo, method, entries, num, out);
        return lzs::cli::kExitInput;
    });
}
