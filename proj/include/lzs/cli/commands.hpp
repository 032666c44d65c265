// Subcommands of the command-line tool. Each returns a process exit code:
// 0 success, 1 failed check or invariant, 2 input error.
#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lzs/cli/formats.hpp"
#include "lzs/cli/ledger.hpp"
#include "lzs/cli/methods.hpp"
#include "lzs/zerocurv/zerocurv.hpp"

namespace lzs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;

/// Largest row/column-sum error accepted in printed S-matrices.
inline constexpr double kStochasticTolerance = 1e-8;

struct Context {
    std::ostream& out;
    std::ostream& err;
    Ledger& ledger;
    std::string command_line;
};

/// Raw model flags as typed on the command line.
struct ModelOptions {
    std::optional<std::string> family;
    std::optional<int> k;
    std::optional<std::string> delta;
    std::optional<std::string> slope;
    std::optional<std::string> eps;
    /// Descriptor JSON, inline or as a file path (also accepts `model show` output).
    std::optional<std::string> descriptor;
    /// su3six: verified | k-on-flat-pair | b=<value> (comma-separated);
    /// su3adj8: adjoint | tabulated.
    std::optional<std::string> partner_form;
};

inline double parse_number(const std::string& text, const char* what) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(x)) {
        throw ValidationError(std::string(what) + ": '" + text + "' is not a finite number");
    }
    return x;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) out.push_back(item);
    if (!text.empty() && text.back() == sep) out.emplace_back();
    return out;
}

/// "0.5" or "0.5,0.7,1".
inline models::ScalarOrList parse_param(const std::string& text, const char* what) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return parse_number(parts[0], what);
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_number(p, what));
    return out;
}

inline bool is_range(const std::optional<std::string>& s) { return s && s->find(':') != std::string::npos; }

/// start:stop:step, inclusive of stop up to rounding; start > stop is empty.
inline std::vector<double> parse_range(const std::string& text, const char* what) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError(std::string(what) + ": range must be start:stop:step");
    const double start = parse_number(parts[0], what), stop = parse_number(parts[1], what);
    const double step = parse_number(parts[2], what);
    if (!(step > 0.0)) throw ValidationError(std::string(what) + ": range step must be positive");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double x = start + static_cast<double>(i) * step;
        if (x > stop + 1e-9 * step) break;
        out.push_back(x);
        if (out.size() > 1000000) throw ValidationError(std::string(what) + ": range has too many points");
    }
    return out;
}

inline std::string read_text_or_file(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

inline models::ModelDescriptor descriptor_from_options(const ModelOptions& o) {
    if (o.descriptor) {
        if (o.family || o.k || o.delta || o.slope || o.eps) {
            throw ValidationError("--descriptor cannot be combined with --family/--k/--delta/--slope/--eps");
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_or_file(*o.descriptor));
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(std::string("descriptor: invalid JSON: ") + e.what());
        }
        if (j.is_object() && j.contains("descriptor")) j = j["descriptor"];
        return models::descriptor_from_json(j);
    }
    if (!o.family) throw ValidationError("--family is required (valid: " + models::valid_family_list() + ")");
    models::ModelDescriptor d;
    d.family = models::parse_family(*o.family);
    d.k = o.k;
    if (!o.delta) throw ValidationError("--delta is required");
    if (!o.slope) throw ValidationError("--slope is required");
    d.delta = parse_param(*o.delta, "--delta");
    d.slope = parse_param(*o.slope, "--slope");
    if (o.eps) d.eps = parse_number(*o.eps, "--eps");
    return d;
}

inline models::AffineModel build_with_form(const models::ModelDescriptor& d, const std::optional<std::string>& form) {
    if (!form || form->empty()) return models::build_model(d);
    if (d.family == models::Family::su3six) {
        models::Su3SixPartnerForm f;
        for (const auto& token : split(*form, ',')) {
            if (token == "verified") continue;
            if (token == "k-on-flat-pair") {
                f.k_on_flat_pair = true;
            } else if (token.rfind("b=", 0) == 0) {
                f.slope_at_52 = parse_number(token.substr(2), "--partner-form b");
            } else {
                throw ValidationError("--partner-form for su3six: expected verified, k-on-flat-pair or b=<value>, got '" +
                                      token + "'");
            }
        }
        models::build_model(d);  // validates the descriptor itself
        return models::build_su3six(models::as_scalar(d.delta, "delta"), models::as_scalar(d.slope, "slope"), d.eps, f);
    }
    if (d.family == models::Family::su3adj8) {
        models::Su3Adj8PartnerForm f;
        if (*form == "adjoint") {
            f = models::Su3Adj8PartnerForm::adjoint_of_bowtie3;
        } else if (*form == "tabulated") {
            f = models::Su3Adj8PartnerForm::tabulated;
        } else {
            throw ValidationError("--partner-form for su3adj8: expected adjoint or tabulated, got '" + *form + "'");
        }
        models::build_model(d);
        return models::build_su3adj8(models::as_scalar(d.delta, "delta"), models::as_scalar(d.slope, "slope"), d.eps, f);
    }
    throw ValidationError("--partner-form applies only to su3six and su3adj8");
}

/// Writes text to the path, or to ctx.out when no path is given.
inline void emit(const Context& ctx, const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        ctx.out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + *path + "' for writing");
    f << text;
    if (!f) throw ValidationError("cannot write '" + *path + "'");
}

inline Json laurent_json(const models::EpsLaurent& e) {
    Json j;
    j["inv_eps"] = complex_matrix_json(e.inv);
    j["const"] = complex_matrix_json(e.c0);
    j["eps"] = complex_matrix_json(e.lin);
    return j;
}

/// {descriptor, dim, A: {inv_eps, const, eps}, B: diag, E: null | {inv_eps, const, eps, t}}
inline Json model_json(const models::AffineModel& m) {
    Json j;
    j["descriptor"] = models::descriptor_to_json(m.descriptor());
    j["dim"] = m.dim();
    j["A"] = laurent_json(m.a_series());
    Json b = Json::array();
    for (Eigen::Index i = 0; i < m.slopes().size(); ++i) b.push_back(m.slopes()(i));
    j["B"] = b;
    if (m.has_partner()) {
        Json e = laurent_json(m.partner().e);
        e["t"] = complex_matrix_json(m.partner().e_t);
        j["E"] = e;
    } else {
        j["E"] = nullptr;
    }
    return j;
}

inline int cmd_model_show(const Context& ctx, const ModelOptions& mo, const std::optional<std::string>& out) {
    const models::ModelDescriptor d = descriptor_from_options(mo);
    const models::AffineModel m = build_with_form(d, mo.partner_form);
    const std::string text = model_json(m).dump(2) + "\n";
    emit(ctx, out, text);
    ctx.ledger.append({ctx.command_line, "model show", d, "", digest(text), std::nullopt, true});
    return kExitOk;
}

inline int cmd_smatrix(const Context& ctx, const ModelOptions& mo, const std::optional<std::string>& method_flag,
                       const NumericOptions& num, const std::optional<std::string>& out) {
    const models::ModelDescriptor d = descriptor_from_options(mo);
    const models::AffineModel m = build_with_form(d, mo.partner_form);
    const Method method = method_flag ? parse_method(*method_flag) : default_method(d.family);
    const SmatrixReport r = compute_smatrix(m, method, num);
    const std::string text = smatrix_json(r).dump(2) + "\n";
    emit(ctx, out, text);
    const double defect = stochastic_defect(r.matrix);
    const bool ok = defect <= kStochasticTolerance && r.matrix.minCoeff() >= 0.0 && r.matrix.maxCoeff() <= 1.0;
    ctx.ledger.append({ctx.command_line, "smatrix", d, r.method, digest(text),
                       r.horizon ? std::optional<double>(r.error_estimate) : std::nullopt, ok});
    if (r.unverified) ctx.err << "note: no independent check exists for this schedule; result is unverified\n";
    if (!ok) {
        ctx.err << "error: S-matrix row/column sums deviate from 1 by " << defect << "\n";
        return kExitFailure;
    }
    return kExitOk;
}

/// Entrywise tolerance for a method pair: max(1e-2, 3 x oracle error estimate).
inline double compare_tolerance(const SmatrixReport& a, const SmatrixReport& b) {
    double est = 0.0;
    if (a.horizon) est = std::max(est, a.error_estimate);
    if (b.horizon) est = std::max(est, b.error_estimate);
    return std::max(1e-2, 3.0 * est);
}

/// Runs each method on its own worker thread; results keep the input order.
inline std::vector<SmatrixReport> run_methods(const models::AffineModel& m, const std::vector<Method>& methods,
                                              const NumericOptions& num) {
    std::vector<std::optional<SmatrixReport>> slots(methods.size());
    std::vector<std::exception_ptr> errors(methods.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        pool.emplace_back([&, i] {
            try {
                slots[i] = compute_smatrix(m, methods[i], num);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<SmatrixReport> out;
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

inline int cmd_compare(const Context& ctx, const ModelOptions& mo, const std::vector<std::string>& method_names,
                       const NumericOptions& num, bool inject_corruption, const std::optional<std::string>& out) {
    const models::ModelDescriptor d = descriptor_from_options(mo);
    const models::AffineModel m = build_with_form(d, mo.partner_form);
    std::vector<Method> methods;
    for (const auto& name : method_names) {
        for (const auto& part : split(name, ',')) methods.push_back(parse_method(part));
    }
    if (methods.empty()) methods = supported_methods(m);
    if (methods.size() < 2) {
        throw ValidationError("compare needs at least two methods; family '" +
                              std::string(models::family_name(d.family)) + "' supports only one");
    }
    std::vector<SmatrixReport> results = run_methods(m, methods, num);
    if (inject_corruption) {
        results.front().matrix(0, 0) += 0.5;
        results.front().matrix(0, 1) -= 0.5;
    }
    Json report;
    report["family"] = std::string(models::family_name(d.family));
    report["params"] = params_json(d);
    Json res = Json::array();
    for (const auto& r : results) {
        Json item;
        item["method"] = r.method;
        item["matrix"] = real_matrix_json(r.matrix);
        item["error_estimate"] = r.error_estimate;
        res.push_back(item);
    }
    report["results"] = res;
    Json pairs = Json::array();
    bool pass = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (std::size_t j = i + 1; j < results.size(); ++j) {
            const double dev = (results[i].matrix - results[j].matrix).cwiseAbs().maxCoeff();
            const double tol = compare_tolerance(results[i], results[j]);
            const bool ok = dev <= tol;
            pass = pass && ok;
            Json p;
            p["first"] = results[i].method;
            p["second"] = results[j].method;
            p["max_deviation"] = dev;
            p["tolerance"] = tol;
            p["pass"] = ok;
            pairs.push_back(p);
        }
    }
    report["pairs"] = pairs;
    report["pass"] = pass;
    const std::string text = report.dump(2) + "\n";
    emit(ctx, out, text);
    std::string used;
    for (const auto& r : results) used += (used.empty() ? "" : ",") + r.method;
    double est = 0.0;
    for (const auto& r : results) est = std::max(est, r.error_estimate);
    ctx.ledger.append({ctx.command_line, "compare", d, used, digest(text), est, pass});
    ctx.err << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitFailure;
}

/// "a:b" with a < b.
inline std::pair<double, double> parse_interval(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ValidationError("--trange must be start:stop");
    const double a = parse_number(parts[0], "--trange"), b = parse_number(parts[1], "--trange");
    if (!(a < b)) throw ValidationError("--trange: start must be below stop");
    return {a, b};
}

inline int cmd_spectrum(const Context& ctx, const ModelOptions& mo, const std::string& trange, int steps,
                        const std::optional<std::string>& out) {
    const models::ModelDescriptor d = descriptor_from_options(mo);
    const models::AffineModel m = build_with_form(d, mo.partner_form);
    if (steps < 2) throw ValidationError("--steps must be at least 2");
    const auto [t0, t1] = parse_interval(trange);
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) grid[i] = i + 1 == steps ? t1 : t0 + (t1 - t0) * i / (steps - 1);
    const oracle::Spectrum s = oracle::adiabatic_spectrum(m, m.default_eps(), grid);
    std::ostringstream csv;
    write_spectrum_csv(csv, s);
    emit(ctx, out, csv.str());
    ctx.ledger.append({ctx.command_line, "spectrum", d, "", digest(csv.str()), std::nullopt, true});
    return kExitOk;
}

/// "t=-10,0,10;eps=-1,1" (either part may be left out).
inline std::pair<std::vector<double>, std::vector<double>> parse_grid(const std::optional<std::string>& text) {
    std::vector<double> ts = zerocurv::default_t_grid(), es = zerocurv::default_eps_grid();
    if (!text) return {ts, es};
    for (const auto& part : split(*text, ';')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ValidationError("--grid: expected t=...;eps=..., got '" + part + "'");
        const std::string key = part.substr(0, eq);
        std::vector<double> vals;
        for (const auto& v : split(part.substr(eq + 1), ',')) vals.push_back(parse_number(v, "--grid"));
        if (vals.empty()) throw ValidationError("--grid: empty list for '" + key + "'");
        if (key == "t") {
            ts = vals;
        } else if (key == "eps") {
            es = vals;
        } else {
            throw ValidationError("--grid: unknown axis '" + key + "' (use t and eps)");
        }
    }
    return {ts, es};
}

inline int cmd_zero_curvature(const Context& ctx, const ModelOptions& mo, const std::optional<std::string>& grid,
                              const std::optional<std::string>& out) {
    const models::ModelDescriptor d = descriptor_from_options(mo);
    const models::AffineModel m = build_with_form(d, mo.partner_form);
    if (!m.has_partner()) m.partner();  // raises the missing-partner error
    const auto [ts, es] = parse_grid(grid);
    const zerocurv::CurvatureReport rep = zerocurv::verify_pair(m, ts, es);
    const std::string text = zerocurv::report_to_json(rep).dump(2) + "\n";
    emit(ctx, out, text);
    ctx.ledger.append({ctx.command_line, "zero-curvature", d, "", digest(text), std::nullopt, rep.pass});
    ctx.err << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitOk : kExitFailure;
}

/// "1,1" (1-based row, column).
inline std::pair<int, int> parse_entry(const std::string& text, int k) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw ValidationError("--entry must be row,col");
    const double r = parse_number(parts[0], "--entry"), c = parse_number(parts[1], "--entry");
    if (r != std::floor(r) || c != std::floor(c) || r < 1 || c < 1 || r > k || c > k) {
        throw ValidationError("--entry '" + text + "' is outside 1.." + std::to_string(k));
    }
    return {static_cast<int>(r) - 1, static_cast<int>(c) - 1};
}

inline int cmd_sweep(const Context& ctx, const ModelOptions& mo, const std::optional<std::string>& method_flag,
                     const std::vector<std::string>& entry_flags, const NumericOptions& num,
                     const std::optional<std::string>& out) {
    if (mo.descriptor) throw ValidationError("sweep takes its model from --family/--delta/--slope/--eps");
    struct Axis {
        const char* name;
        std::optional<std::string> ModelOptions::*field;
    };
    const Axis axes[] = {{"delta", &ModelOptions::delta}, {"slope", &ModelOptions::slope}, {"eps", &ModelOptions::eps}};
    const Axis* ranged = nullptr;
    for (const auto& ax : axes) {
        if (is_range(mo.*ax.field)) {
            if (ranged) throw ValidationError("sweep: exactly one parameter may be a range, found several");
            ranged = &ax;
        }
    }
    if (!ranged) throw ValidationError("sweep: give exactly one of --delta/--slope/--eps as start:stop:step");
    const std::vector<double> values = parse_range(*(mo.*ranged->field), ranged->name);

    // the model at the first value fixes dimension and method
    ModelOptions probe = mo;
    probe.*ranged->field = format_double(values.empty() ? 1.0 : values.front());
    const models::ModelDescriptor d0 = descriptor_from_options(probe);
    const models::AffineModel m0 = build_with_form(d0, mo.partner_form);
    const Method method = method_flag ? parse_method(*method_flag) : default_method(d0.family);
    std::vector<std::pair<int, int>> entries;
    for (const auto& e : entry_flags) entries.push_back(parse_entry(e, m0.dim()));
    if (entries.empty()) entries.push_back({0, 0});

    std::vector<std::vector<double>> rows(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(values.size(), std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < values.size(); i += workers) {
                try {
                    ModelOptions row = mo;
                    row.*ranged->field = format_double(values[i]);
                    const models::AffineModel m = build_with_form(descriptor_from_options(row), mo.partner_form);
                    const SmatrixReport r = compute_smatrix(m, method, num);
                    for (const auto& [a, b] : entries) rows[i].push_back(r.matrix(a, b));
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::ostringstream csv;
    csv << ranged->name;
    for (const auto& [a, b] : entries) csv << ",S" << a + 1 << "_" << b + 1;
    csv << "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        csv << format_double(values[i]);
        for (double x : rows[i]) csv << "," << format_double(x);
        csv << "\n";
    }
    emit(ctx, out, csv.str());
    ctx.ledger.append({ctx.command_line, "sweep", d0, std::string(method_name(method)), digest(csv.str()),
                       std::nullopt, true});
    return kExitOk;
}

/// Maps exceptions to exit codes and prints the message.
template <class Fn>
int run_guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const UnsupportedCrossingError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace lzs::cli
