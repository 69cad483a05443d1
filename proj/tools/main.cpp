// sgfract -- build, evaluate and verify fractal interpolation surfaces on
// the Sierpinski gasket, and export the point-cloud datasets behind the
// four parameter-sweep figures.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "png_writer.hpp"
#include "sgfract/fractal.hpp"
#include "sgfract/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "sgfract 0.1.0";

// exit codes: 0 ok / all checks passed, 1 some check failed,
// 2 parse error, 3 validation error, 4 I/O error
enum ExitCode { kOk = 0, kCheckFailed = 1, kParseError = 2, kValidationError = 3, kIoError = 4 };

struct IoFailure {
    std::string message;
};

struct FieldArgs {
    std::string f_text;
    std::string b_text;
    int figure = 0;  // 0 = use --f/--b
};

struct ResolvedFields {
    sgf::ScalarField f;
    sgf::ScalarField b;
    std::string f_text;
    std::string b_text;
    double default_tol = sgf::kDefaultCompatTol;
};

ResolvedFields resolve_fields(const FieldArgs& args) {
    ResolvedFields out;
    if (args.figure != 0) {
        auto [f, b] = sgf::builtin_figure_fields(args.figure);
        out.f_text = f.text();
        out.b_text = b.text();
        out.f = std::move(f);
        out.b = std::move(b);
        out.default_tol = sgf::kFigureCompatTol;
        return out;
    }
    if (args.f_text.empty() || args.b_text.empty())
        throw CLI::ValidationError("--f and --b are required unless --figure is given");
    out.f = sgf::ScalarField::expression(args.f_text);
    out.b = sgf::ScalarField::expression(args.b_text);
    out.f_text = args.f_text;
    out.b_text = args.b_text;
    return out;
}

sgf::ScaleVector parse_alpha(const std::string& text) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string tok =
            text.substr(start, comma == std::string::npos ? std::string::npos
                                                          : comma - start);
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw sgf::SyntaxError("bad scale component '" + tok + "'", start);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (parts.size() == 1) return sgf::ScaleVector::uniform(parts[0]);
    if (parts.size() == 3) return {parts[0], parts[1], parts[2]};
    throw sgf::SyntaxError("--alpha wants one value or a1,a2,a3", 0);
}

void add_field_flags(CLI::App* cmd, FieldArgs& args) {
    auto* f = cmd->add_option("--f", args.f_text, "original function f(x,y)");
    auto* b = cmd->add_option("--b", args.b_text, "base function b(x,y), must equal f on V_0");
    auto* fig = cmd->add_option("--figure", args.figure, "built-in figure pair 1..4")
                    ->check(CLI::Range(1, 4));
    fig->excludes(f);
    fig->excludes(b);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Row {
    double x, y, value;
};

void write_csv(const fs::path& path, std::vector<Row> rows, bool sort_rows) {
    if (sort_rows)
        std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.y != b.y) return a.y < b.y;
            return a.x < b.x;
        });
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw IoFailure{"cannot open " + path.string() + " for writing"};
    std::fputs("x,y,value\n", fp);
    for (const Row& r : rows)
        std::fprintf(fp, "%.17g,%.17g,%.17g\n", r.x, r.y, r.value);
    if (std::fclose(fp) != 0) throw IoFailure{"write failed for " + path.string()};
}

fs::path manifest_path(const fs::path& out) {
    fs::path p = out;
    if (p.extension() == ".csv") p.replace_extension("");
    p += ".manifest.json";
    return p;
}

void write_manifest(const fs::path& out, const std::string& command,
                    const std::string& f_text, const std::string& b_text,
                    const sgf::ScaleVector& alpha, int m,
                    std::optional<std::uint64_t> seed,
                    const std::vector<fs::path>& outputs) {
    ordered_json j;
    j["command"] = command;
    j["f_text"] = f_text;
    j["b_text"] = b_text;
    j["alpha"] = {alpha.a1, alpha.a2, alpha.a3};
    j["m"] = m;
    if (seed) j["seed"] = *seed;
    j["tool_version"] = kToolVersion;
    ordered_json files = ordered_json::array();
    for (const auto& p : outputs) files.push_back(p.filename().string());
    j["output_files"] = std::move(files);

    const fs::path path = manifest_path(out);
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw IoFailure{"cannot open " + path.string() + " for writing"};
    const std::string text = j.dump(2) + "\n";
    const bool ok = std::fwrite(text.data(), 1, text.size(), fp) == text.size();
    if (std::fclose(fp) != 0 || !ok) throw IoFailure{"write failed for " + path.string()};
}

// Scatter render: orthographic drop of z, z mapped to a monotone
// dark-blue -> yellow ramp, 1px points, 1024x896 canvas.
void render_scatter(const fs::path& path, const std::vector<Row>& rows) {
    constexpr int kW = 1024, kH = 896, kMargin = 32;
    sgtool::Image img(kW, kH);
    double zmin = rows.front().value, zmax = rows.front().value;
    for (const Row& r : rows) {
        zmin = std::min(zmin, r.value);
        zmax = std::max(zmax, r.value);
    }
    const double zspan = (zmax > zmin) ? (zmax - zmin) : 1.0;
    const double scale = std::min((kW - 2.0 * kMargin) / 1.0,
                                  (kH - 2.0 * kMargin) / 0.8660254037844386);
    for (const Row& r : rows) {
        const double c = (r.value - zmin) / zspan;
        const auto ch = [c](double lo, double hi) {
            return static_cast<std::uint8_t>(lo + c * (hi - lo) + 0.5);
        };
        img.set(static_cast<int>(kMargin + r.x * scale + 0.5),
                kH - 1 - static_cast<int>(kMargin + r.y * scale + 0.5),
                ch(20, 250), ch(24, 235), ch(120, 60));
    }
    if (!sgtool::write_png(path.string(), img))
        throw IoFailure{"cannot write " + path.string()};
}

std::vector<Row> table_rows(const sgf::VmTable& table) {
    std::vector<Row> rows;
    rows.reserve(table.lattice().size());
    for (std::size_t i = 0; i < table.lattice().size(); ++i) {
        const auto& p = table.lattice()[i].pt;
        rows.push_back({p.x, p.y, table.values()[i]});
    }
    return rows;
}

// ---------------------------------------------------------------- commands

struct TableArgs {
    FieldArgs fields;
    std::string alpha_text = "0.5";
    int m = 6;
    std::string out;
    double tol = -1.0;  // <0: default for the field source
};

int run_table(const TableArgs& a) {
    auto fields = resolve_fields(a.fields);
    const double tol = a.tol >= 0 ? a.tol : fields.default_tol;
    const auto alpha = parse_alpha(a.alpha_text);
    const auto spec = sgf::validate(fields.f, fields.b, alpha, tol);
    const auto table = sgf::vm_table(spec, a.m);

    const fs::path out(a.out);
    write_csv(out, table_rows(table), /*sort_rows=*/true);
    write_manifest(out, "table", fields.f_text, fields.b_text, alpha, a.m,
                   std::nullopt, {out});
    std::fprintf(stderr, "wrote %zu rows to %s\n", table.lattice().size(),
                 out.string().c_str());
    return kOk;
}

struct EvalArgs {
    FieldArgs fields;
    std::string alpha_text = "0.5";
    std::string address;
    int n = 40;
    double tol = -1.0;
};

int run_eval(const EvalArgs& a) {
    auto fields = resolve_fields(a.fields);
    const double tol = a.tol >= 0 ? a.tol : fields.default_tol;
    const auto addr = sgf::Address::parse(a.address);
    const auto spec = sgf::validate(fields.f, fields.b, parse_alpha(a.alpha_text), tol);
    const auto res = sgf::eval_point(spec, addr, a.n);
    std::printf("value=%s error_bound=%s\n", fmt17(res.value).c_str(),
                fmt17(res.error_bound).c_str());
    return kOk;
}

int emit_reports(const std::vector<sgf::BoundReport>& reports) {
    std::printf("[\n");
    for (std::size_t i = 0; i < reports.size(); ++i)
        std::printf("  %s%s\n", reports[i].json().c_str(),
                    i + 1 < reports.size() ? "," : "");
    std::printf("]\n");
    const bool all_pass = std::all_of(reports.begin(), reports.end(),
                                      [](const auto& r) { return r.pass; });
    return all_pass ? kOk : kCheckFailed;
}

struct VerifyAlphaArgs {
    FieldArgs fields;
    std::string alpha_text = "0.1";
    std::string beta_text = "0.3";
    int m = 6;
    double tol = -1.0;
};

int run_verify_alpha(const VerifyAlphaArgs& a) {
    auto fields = resolve_fields(a.fields);
    const double tol = a.tol >= 0 ? a.tol : fields.default_tol;
    auto rep = sgf::check_alpha_continuity(fields.f, fields.b, parse_alpha(a.alpha_text),
                                           parse_alpha(a.beta_text), a.m, tol);
    return emit_reports({rep});
}

struct VerifyBaseArgs {
    FieldArgs fields;
    std::string c_text;
    std::string alpha_text = "0.5";
    int m = 6;
    double tol = -1.0;
};

int run_verify_base(const VerifyBaseArgs& a) {
    auto fields = resolve_fields(a.fields);
    const double tol = a.tol >= 0 ? a.tol : fields.default_tol;
    auto c = sgf::ScalarField::expression(a.c_text);
    auto rep = sgf::check_base_lipschitz(fields.f, fields.b, c,
                                         parse_alpha(a.alpha_text), a.m, tol);
    return emit_reports({rep});
}

struct VerifyInterpArgs {
    FieldArgs fields;
    std::string alpha_text = "0.5";
    int m = 6;
    double tol = -1.0;     // compat tolerance
    double bound = -1.0;   // rhs of the check
};

int run_verify_interp(const VerifyInterpArgs& a) {
    auto fields = resolve_fields(a.fields);
    const double tol = a.tol >= 0 ? a.tol : fields.default_tol;
    const double bound =
        a.bound >= 0 ? a.bound
                     : (a.fields.figure != 0 ? sgf::kFigureCompatTol : 1e-10);
    const auto spec = sgf::validate(fields.f, fields.b, parse_alpha(a.alpha_text), tol);
    return emit_reports({sgf::check_interpolation(spec, a.m, bound)});
}

struct FiguresArgs {
    std::string out_dir = ".";
    bool render = false;
    int figure = 0;          // 0 = all four
    std::string alpha_text;  // empty = the 0.1/0.3/0.6/0.9 sweep
    int m = 7;
};

int run_figures(const FiguresArgs& a) {
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) throw IoFailure{"cannot create directory " + a.out_dir};

    std::vector<int> figures;
    if (a.figure != 0)
        figures.push_back(a.figure);
    else
        figures = {1, 2, 3, 4};
    std::vector<double> alphas;
    if (!a.alpha_text.empty()) {
        const auto v = parse_alpha(a.alpha_text);
        alphas.push_back(v.a1);  // uniform scaling per panel
    } else {
        alphas = {0.1, 0.3, 0.6, 0.9};
    }

    for (int fig : figures) {
        auto [f, b] = sgf::builtin_figure_fields(fig);
        for (double al : alphas) {
            const auto alpha = sgf::ScaleVector::uniform(al);
            const auto spec = sgf::validate(f, b, alpha, sgf::kFigureCompatTol);
            const auto table = sgf::vm_table(spec, a.m);
            auto rows = table_rows(table);

            char stem[64];
            std::snprintf(stem, sizeof(stem), "fig%d_alpha%g", fig, al);
            const fs::path csv = fs::path(a.out_dir) / (std::string(stem) + ".csv");
            write_csv(csv, rows, /*sort_rows=*/true);
            std::vector<fs::path> outputs = {csv};
            if (a.render) {
                const fs::path png = fs::path(a.out_dir) / (std::string(stem) + ".png");
                render_scatter(png, rows);
                outputs.push_back(png);
            }
            write_manifest(csv, "figures", f.text(), b.text(), alpha, a.m,
                           std::nullopt, outputs);
        }
    }
    std::fprintf(stderr, "wrote %zu dataset(s) to %s\n",
                 figures.size() * alphas.size(), a.out_dir.c_str());
    return kOk;
}

struct ChaosArgs {
    FieldArgs fields;
    std::string alpha_text = "0.5";
    std::size_t points = 10000;
    std::uint64_t seed = 42;
    int burn_in = 50;
    std::string out;
    double tol = -1.0;
};

int run_chaos(const ChaosArgs& a) {
    auto fields = resolve_fields(a.fields);
    const double tol = a.tol >= 0 ? a.tol : fields.default_tol;
    const auto alpha = parse_alpha(a.alpha_text);
    const auto spec = sgf::validate(fields.f, fields.b, alpha, tol);
    const auto sample = sgf::chaos_game(spec, a.points, a.seed, a.burn_in);

    std::vector<Row> rows;
    rows.reserve(sample.points.size());
    for (const auto& p : sample.points) rows.push_back({p.x, p.y, p.z});
    const fs::path out(a.out);
    write_csv(out, rows, /*sort_rows=*/false);  // stream order, seed-deterministic
    write_manifest(out, "chaos", fields.f_text, fields.b_text, alpha, 0, a.seed, {out});
    std::fprintf(stderr, "wrote %zu chaos-game points to %s\n", rows.size(),
                 out.string().c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractal interpolation surfaces on the Sierpinski gasket"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    TableArgs table_args;
    auto* table = app.add_subcommand(
        "table", "write exact V_m values of f_b^alpha as CSV (x,y,value)");
    add_field_flags(table, table_args.fields);
    table->add_option("--alpha", table_args.alpha_text, "scale vector a1,a2,a3 or one value");
    table->add_option("--m", table_args.m, "lattice depth (<= 12)");
    table->add_option("--out", table_args.out, "output CSV path")->required();
    table->add_option("--tol", table_args.tol, "V_0 compatibility tolerance");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "evaluate f_b^alpha at a cell address");
    add_field_flags(eval, eval_args.fields);
    eval->add_option("--alpha", eval_args.alpha_text, "scale vector");
    eval->add_option("--address", eval_args.address,
                     "cell word over {1,2,3}; empty = x_1 corner");
    eval->add_option("--n", eval_args.n, "expansion depth")->check(CLI::PositiveNumber);
    eval->add_option("--tol", eval_args.tol, "V_0 compatibility tolerance");

    auto* verify = app.add_subcommand("verify", "check the stability bounds");
    verify->require_subcommand(1);

    VerifyAlphaArgs va;
    auto* v_alpha = verify->add_subcommand(
        "alpha", "continuity in the scale vector: ||f^a - f^b|| vs |a-b|/(1-r)(||f^a||+||b||)");
    add_field_flags(v_alpha, va.fields);
    v_alpha->add_option("--alpha", va.alpha_text, "center scale vector");
    v_alpha->add_option("--beta", va.beta_text, "probe scale vector");
    v_alpha->add_option("--m", va.m, "lattice depth for the sup");
    v_alpha->add_option("--tol", va.tol, "V_0 compatibility tolerance");

    VerifyBaseArgs vb;
    auto* v_base = verify->add_subcommand(
        "base", "Lipschitz dependence on the base: ||f_b^a - f_c^a|| vs |a|/(1-|a|)||b-c||");
    add_field_flags(v_base, vb.fields);
    v_base->add_option("--c", vb.c_text, "second base function")->required();
    v_base->add_option("--alpha", vb.alpha_text, "scale vector");
    v_base->add_option("--m", vb.m, "lattice depth for the sup");
    v_base->add_option("--tol", vb.tol, "V_0 compatibility tolerance");

    VerifyInterpArgs vi;
    auto* v_interp = verify->add_subcommand(
        "interp", "interpolation identity: f_b^alpha = f on V_1");
    add_field_flags(v_interp, vi.fields);
    v_interp->add_option("--alpha", vi.alpha_text, "scale vector");
    v_interp->add_option("--m", vi.m, "table depth used for the probe");
    v_interp->add_option("--tol", vi.tol, "V_0 compatibility tolerance");
    v_interp->add_option("--bound", vi.bound,
                         "allowed max |f^alpha - f| on V_1 (default 1e-10, 1e-3 for figures)");

    FiguresArgs fa;
    auto* figures = app.add_subcommand(
        "figures", "export the four figure datasets at alpha in {0.1,0.3,0.6,0.9}");
    figures->add_option("--out", fa.out_dir, "output directory")->required();
    figures->add_flag("--render", fa.render, "also write PNG scatter renders");
    figures->add_option("--figure", fa.figure, "restrict to one figure")->check(CLI::Range(1, 4));
    figures->add_option("--alpha", fa.alpha_text, "override the alpha sweep with one value");
    figures->add_option("--m", fa.m, "lattice depth (default 7)");

    ChaosArgs ca;
    auto* chaos = app.add_subcommand("chaos", "sample graph(f_b^alpha) by the chaos game");
    add_field_flags(chaos, ca.fields);
    chaos->add_option("--alpha", ca.alpha_text, "scale vector");
    chaos->add_option("--points", ca.points, "number of points to keep");
    chaos->add_option("--seed", ca.seed, "RNG seed");
    chaos->add_option("--burn-in", ca.burn_in, "points to discard before emitting");
    chaos->add_option("--out", ca.out, "output CSV path")->required();
    chaos->add_option("--tol", ca.tol, "V_0 compatibility tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kParseError;
    }

    try {
        if (*table) return run_table(table_args);
        if (*eval) return run_eval(eval_args);
        if (*v_alpha) return run_verify_alpha(va);
        if (*v_base) return run_verify_base(vb);
        if (*v_interp) return run_verify_interp(vi);
        if (*figures) return run_figures(fa);
        if (*chaos) return run_chaos(ca);
    } catch (const sgf::SyntaxError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kParseError;
    } catch (const sgf::UnknownIdentifier& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kParseError;
    } catch (const IoFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return kIoError;
    } catch (const sgf::Error& e) {
        // validation family: scale out of range, incompatible base, depth
        // exceeds 12, unknown figure, consistency failure, domain error
        std::fprintf(stderr, "error: %s\n", e.what());
        return kValidationError;
    }
    return kOk;
}
