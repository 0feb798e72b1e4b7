// Copyright 2026 The spssvs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spssvs/analytic.h"
#include "spssvs/config.h"
#include "spssvs/error.h"
#include "spssvs/figures.h"
#include "spssvs/format.h"
#include "spssvs/observables.h"
#include "spssvs/states.h"
#include "spssvs/verify.h"
#include "spssvs/wigner.h"

using namespace spssvs;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTruncation = 3;
constexpr int kExitHardAssertion = 4;
constexpr int kExitOther = 1;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Messages printed once to stderr, e.g. the r = 0 refusal of the closed forms.
class Notes {
   public:
    void add(const std::string &message) {
        if (seen_.insert(message).second) {
            std::cerr << message << '\n';
        }
    }

   private:
    std::set<std::string> seen_;
};

double nan_value() {
    return std::numeric_limits<double>::quiet_NaN();
}

double rel_err(Complex analytic, Complex oracle) {
    return std::abs(analytic - oracle) / std::max(std::abs(oracle), 1.0);
}

void refuse(Notes &notes, const Error &e) {
    notes.add("analytic backend refused (" + std::string(e.what()) + "); oracle values are still reported");
}

/// Runs f and returns true, or records a pole-at-zero refusal and returns false.
template <class F>
bool analytic_guard(Notes &notes, F &&f) {
    try {
        f();
        return true;
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::PoleAtZero) {
            throw;
        }
        refuse(notes, e);
        return false;
    }
}

using RowFn = std::vector<double> (*)(const MeasurementConfig &, Notes &);

const std::vector<std::string> kMomentColumns = {
    "a_oracle_re",  "a_oracle_im",   "a_analytic_re",  "a_analytic_im",   "a_rel_err",
    "a2_oracle_re", "a2_oracle_im",  "a2_analytic_re", "a2_analytic_im",  "a2_rel_err",
    "n_oracle",     "n_analytic_re", "n_analytic_im",  "n_rel_err",       "lambda_oracle",
    "lambda_analytic", "lambda_rel_err", "dim"};

std::vector<double> moments_row(const MeasurementConfig &c, Notes &notes) {
    PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
    MomentSet o = oracle_moments(e.post);
    const double lambda_o = 1 / e.raw_norm;
    const double nan = nan_value();
    Complex a(nan, nan), a2(nan, nan), n(nan, nan);
    double lambda_a = nan;
    analytic_guard(notes, [&] {
        analytic::ClosedMoments m = analytic::closed_moments(e.w, c.pointer());
        a = m.a_mean;
        a2 = m.a_sq_mean;
        n = m.n_mean;
        lambda_a = closed_lambda(e.w, c.pointer());
    });
    return {o.a_mean.real(),
            o.a_mean.imag(),
            a.real(),
            a.imag(),
            rel_err(a, o.a_mean),
            o.a_sq_mean.real(),
            o.a_sq_mean.imag(),
            a2.real(),
            a2.imag(),
            rel_err(a2, o.a_sq_mean),
            o.n_mean,
            n.real(),
            n.imag(),
            rel_err(n, o.n_mean),
            lambda_o,
            lambda_a,
            rel_err(lambda_a, lambda_o),
            static_cast<double>(e.dim())};
}

const std::vector<std::string> kSqueezingColumns = {"S_oracle", "S_analytic", "var_oracle", "var_analytic",
                                                    "abs_err",  "clamped",    "dim"};

std::vector<double> squeezing_row(const MeasurementConfig &c, Notes &notes) {
    PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
    QuadratureStats o = quadrature_stats(oracle_moments(e.post), {c.phi});
    double var_a = nan_value();
    analytic_guard(notes, [&] {
        var_a = quadrature_stats(analytic::closed_moments(e.w, c.pointer()).to_moment_set(), {c.phi}).variance;
    });
    return {o.variance - 0.5, var_a - 0.5, o.variance, var_a, std::abs(var_a - o.variance),
            o.clamped ? 1.0 : 0.0, static_cast<double>(e.dim())};
}

const std::vector<std::string> kMandelColumns = {"Q_oracle", "n_oracle", "n2_corr_oracle", "dim"};

std::vector<double> mandel_row(const MeasurementConfig &c, Notes &notes) {
    PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
    MomentSet m = oracle_moments(e.post);
    notes.add("Mandel Q has no closed form here; reporting the oracle only");
    return {mandel_q(m), m.n_mean, *m.n2_corr, static_cast<double>(e.dim())};
}

const std::vector<std::string> kSnrColumns = {"chi_oracle",  "chi_analytic", "Rp_oracle",       "Rn_oracle",
                                              "Rp_analytic", "Rn_analytic",  "post_probability"};

std::vector<double> snr_row(const MeasurementConfig &c, Notes &notes) {
    SnrComparison cmp = snr_ratio(c.qubit(), c.pointer(), c.n_measurements, c.truncation);
    const double nan = nan_value();
    analytic::SnrResult a{};
    if (cmp.analytic) {
        a = *cmp.analytic;
    } else {
        a.chi = a.r_p = a.r_n = nan;
        notes.add("analytic backend refused (" + cmp.analytic_error + "); oracle values are still reported");
    }
    return {cmp.oracle.chi, a.chi, cmp.oracle.r_p, cmp.oracle.r_n, a.r_p, a.r_n, postselection_probability(c.qubit())};
}

const std::vector<std::string> kFidelityColumns = {"F_oracle", "F_analytic", "abs_err", "out_of_range", "dim"};

std::vector<double> fidelity_row(const MeasurementConfig &c, Notes &notes) {
    PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
    double f_o = fidelity(e.phi, e.post);
    double f_a = nan_value();
    bool out_of_range = false;
    analytic_guard(notes, [&] {
        analytic::FidelityClosed f = analytic::fidelity_closed(e.w, c.pointer());
        f_a = f.fidelity;
        out_of_range = f.out_of_range;
    });
    if (out_of_range) {
        notes.add("closed-form fidelity leaves [0, 1]; value reported unclipped");
    }
    return {f_o, f_a, std::abs(f_a - f_o), out_of_range ? 1.0 : 0.0, static_cast<double>(e.dim())};
}

struct PointCommand {
    const char *name;
    const char *description;
    const std::vector<std::string> *columns;
    RowFn row;
};

const std::vector<PointCommand> &point_commands() {
    static const std::vector<PointCommand> cmds = {
        {"moments", "Field moments and lambda on both backends", &kMomentColumns, moments_row},
        {"squeezing", "Squeezing parameter of the quadrature at --phi", &kSqueezingColumns, squeezing_row},
        {"mandel", "Mandel Q (oracle only)", &kMandelColumns, mandel_row},
        {"snr", "SNR ratio of postselected vs non-postselected measurement", &kSnrColumns, snr_row},
        {"fidelity", "Fidelity between initial and postselected pointer", &kFidelityColumns, fidelity_row},
    };
    return cmds;
}

/// Echoed metadata lines ("#@ key = value") that are not config fields.
std::map<std::string, std::string> echo_metadata(const std::string &path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("#@", 0) != 0) {
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        out.emplace(trim(line.substr(2, eq - 2)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::string header(const std::string &command, const std::vector<std::pair<std::string, std::string>> &meta,
                   const MeasurementConfig &echo) {
    std::ostringstream os;
    os << "#@ command = " << command << '\n';
    for (const auto &[k, v] : meta) {
        os << "#@ " << k << " = " << v << '\n';
    }
    os << config_echo(echo);
    return os.str();
}

std::string table_csv(const std::string &head, const Table &t) {
    std::ostringstream os;
    os << head;
    for (size_t i = 0; i < t.columns.size(); ++i) {
        os << (i ? "," : "") << t.columns[i];
    }
    os << '\n';
    for (const auto &row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_number(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

ojson num(double v) {
    if (const char *sentinel = json_sentinel(v)) {
        return sentinel;
    }
    return v == 0 ? 0.0 : v;
}

std::string table_json(const std::string &command, const std::vector<std::pair<std::string, std::string>> &meta,
                       const MeasurementConfig &echo, const Table &t) {
    ojson doc;
    doc["command"] = command;
    for (const auto &[k, v] : meta) {
        doc[k] = v;
    }
    ojson cfg = ojson::object();
    for (const auto &[k, v] : config_entries(echo)) {
        cfg[k] = v;
    }
    doc["config"] = cfg;
    doc["columns"] = t.columns;
    ojson rows = ojson::array();
    for (const auto &row : t.rows) {
        ojson r = ojson::array();
        for (double v : row) {
            r.push_back(num(v));
        }
        rows.push_back(r);
    }
    doc["rows"] = rows;
    return doc.dump(2) + "\n";
}

struct Emitter {
    std::string out_dir;

    /// Writes name into out_dir, or the content to stdout without --out.
    void emit(const std::string &name, const std::string &content) const {
        if (out_dir.empty()) {
            std::cout << content;
            return;
        }
        std::filesystem::create_directories(out_dir);
        std::filesystem::path path = std::filesystem::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        f << content;
        if (!f) {
            throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
        }
        std::cout << path.string() << '\n';
    }
};

PhaseSpaceGrid parse_grid(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    PhaseSpaceGrid g;
    try {
        if (parts.size() == 3) {
            g.x_min = g.p_min = parse_real(parts[0]);
            g.x_max = g.p_max = parse_real(parts[1]);
            g.nx = g.np = std::stoi(parts[2]);
        } else if (parts.size() == 6) {
            g.x_min = parse_real(parts[0]);
            g.x_max = parse_real(parts[1]);
            g.nx = std::stoi(parts[2]);
            g.p_min = parse_real(parts[3]);
            g.p_max = parse_real(parts[4]);
            g.np = std::stoi(parts[5]);
        } else {
            throw Error(ErrorKind::InvalidArgument, "");
        }
    } catch (const std::exception &) {
        throw Error(ErrorKind::InvalidArgument,
                    "grid must look like min:max:points or xmin:xmax:nx:pmin:pmax:np, got '" + text + "'");
    }
    g.validate();
    return g;
}

std::string grid_string(const PhaseSpaceGrid &g) {
    return format_number(g.x_min) + ":" + format_number(g.x_max) + ":" + std::to_string(g.nx) + ":" +
           format_number(g.p_min) + ":" + format_number(g.p_max) + ":" + std::to_string(g.np);
}

std::optional<Backend> parse_backend(const std::string &text) {
    if (text.empty() || text == "both" || text == "default") {
        return std::nullopt;
    }
    if (text == "analytic") {
        return Backend::Analytic;
    }
    if (text == "oracle") {
        return Backend::Oracle;
    }
    throw Error(ErrorKind::InvalidArgument, "backend must be 'analytic' or 'oracle'");
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::InvalidDimension:
        case ErrorKind::DimensionMismatch:
            return kExitUsage;
        case ErrorKind::TruncationInsufficient:
            return kExitTruncation;
        case ErrorKind::HardAssertion:
            return kExitHardAssertion;
        default:
            return kExitOther;
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Postselected weak measurement with a photon-subtracted squeezed vacuum pointer"};
    app.require_subcommand(1);
    app.fallthrough();

    // Config-file keys in the order given; --truncation is applied first.
    std::vector<std::pair<std::string, std::string>> flag_settings;
    auto setting = [&](const std::string &flag, const std::string &key, const std::string &help) {
        app.add_option_function<std::string>(
               flag, [&flag_settings, key](const std::string &v) { flag_settings.emplace_back(key, v); }, help)
            ->type_name("VALUE");
    };
    setting("--r", "r", "Squeezing magnitude");
    setting("--theta", "theta", "Squeezing phase");
    setting("--alpha", "alpha", "Qubit preselection angle");
    setting("--delta", "delta", "Qubit preselection phase");
    setting("--s", "s", "Coupling strength");
    setting("--sigma", "sigma", "Pointer width");
    setting("--phi", "phi", "Quadrature angle");
    setting("--N", "N", "Number of measurements");
    setting("--dim", "dim", "Fixed Fock dimension (implies --truncation fixed)");
    setting("--tail-tol", "tail_tol", "Adaptive tail tolerance");
    setting("--hard-cap", "hard_cap", "Largest Fock dimension");
    setting("--truncation", "truncation", "adaptive or fixed");

    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    std::string sweep_text;
    std::string backend_text;
    app.add_option("--config", config_path, "Key = value or JSON config file; output files are accepted");
    app.add_option("--out", out_dir, "Directory for output files (default: stdout, figures: .)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--sweep", sweep_text, "var:start:stop:steps, e.g. s:0:2:41");
    app.add_option("--backend", backend_text, "Wigner backend: analytic or oracle")
        ->check(CLI::IsMember({"analytic", "oracle"}));

    std::vector<CLI::App *> point_subs;
    for (const PointCommand &cmd : point_commands()) {
        point_subs.push_back(app.add_subcommand(cmd.name, cmd.description));
    }
    CLI::App *wigner_cmd = app.add_subcommand("wigner", "Wigner field of the postselected pointer");
    std::string grid_text;
    wigner_cmd->add_option("--grid", grid_text, "min:max:points or xmin:xmax:nx:pmin:pmax:np");
    CLI::App *figure_cmd = app.add_subcommand("figure", "Write the curve files of a figure preset");
    std::string figure_id;
    figure_cmd->add_option("id", figure_id, "fig1a fig1b fig1c fig2 fig3 fig4a fig4b fig5")->required();
    CLI::App *verify_cmd = app.add_subcommand("verify", "Cross-check closed forms against the Fock-space oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        std::map<std::string, std::string> meta;
        MeasurementConfig config;
        if (!config_path.empty()) {
            config = load_config_file(config_path);
            meta = echo_metadata(config_path);
        }
        for (const auto &[key, value] : flag_settings) {
            if (key == "truncation") {
                apply_setting(config, key, value);
            }
        }
        for (const auto &[key, value] : flag_settings) {
            if (key != "truncation") {
                apply_setting(config, key, value);
            }
        }
        config.validate();
        // Echoed files carry their sweep, grid and backend; flags win.
        const bool takes_sweep = !wigner_cmd->parsed() && !figure_cmd->parsed();
        if (takes_sweep && sweep_text.empty() && meta.count("sweep")) {
            sweep_text = meta["sweep"];
        }
        std::optional<SweepSpec> sweep;
        if (!sweep_text.empty()) {
            sweep = SweepSpec::parse(sweep_text);
        }
        Emitter emitter{out_dir};
        const std::string ext = format == "json" ? ".json" : ".csv";
        Notes notes;

        for (size_t k = 0; k < point_subs.size(); ++k) {
            if (!point_subs[k]->parsed()) {
                continue;
            }
            const PointCommand &cmd = point_commands()[k];
            Table t;
            std::vector<std::pair<std::string, std::string>> head_meta;
            MeasurementConfig echo = config;
            if (sweep) {
                t.columns.push_back(sweep->variable);
                head_meta.emplace_back("sweep", sweep->to_string());
                echo = sweep->at(config, 0);
                for (int i = 0; i < sweep->steps; ++i) {
                    std::vector<double> row = {sweep->value(i)};
                    std::vector<double> values = cmd.row(sweep->at(config, i), notes);
                    row.insert(row.end(), values.begin(), values.end());
                    t.rows.push_back(row);
                }
            } else {
                t.rows.push_back(cmd.row(config, notes));
            }
            t.columns.insert(t.columns.end(), cmd.columns->begin(), cmd.columns->end());
            std::string content = format == "json" ? table_json(cmd.name, head_meta, echo, t)
                                                   : table_csv(header(cmd.name, head_meta, echo), t);
            emitter.emit(std::string(cmd.name) + ext, content);
            return kExitOk;
        }

        if (wigner_cmd->parsed()) {
            if (sweep) {
                throw Error(ErrorKind::InvalidArgument, "wigner does not take --sweep");
            }
            if (grid_text.empty() && meta.count("grid")) {
                grid_text = meta["grid"];
            }
            if (backend_text.empty() && meta.count("backend")) {
                backend_text = meta["backend"];
            }
            PhaseSpaceGrid grid = grid_text.empty() ? PhaseSpaceGrid::default_for(config.r) : parse_grid(grid_text);
            Backend backend = parse_backend(backend_text).value_or(config.r > kAnalyticRMin ? Backend::Analytic
                                                                                             : Backend::Oracle);
            WignerField field;
            if (backend == Backend::Analytic) {
                bool ok = analytic_guard(notes, [&] {
                    field = wigner_field_closed(weak_value(config.qubit()), config.pointer(), grid);
                });
                if (!ok) {
                    backend = Backend::Oracle;
                }
            }
            if (backend == Backend::Oracle) {
                PointerEnsemble e = build_pointer_ensemble(config.pointer(), config.qubit(), config.truncation);
                field = wigner_field(e.post, grid);
            }
            std::vector<std::pair<std::string, std::string>> head_meta = {{"backend", backend_name(backend)},
                                                                          {"grid", grid_string(grid)}};
            Table t{{"x", "p", "W"}, {}};
            t.rows.reserve(static_cast<size_t>(grid.nx) * grid.np);
            for (int i = 0; i < grid.nx; ++i) {
                for (int j = 0; j < grid.np; ++j) {
                    t.rows.push_back({grid.x(i), grid.p(j), field.at(i, j)});
                }
            }
            std::cerr << "integral " << format_number(field_integral(field)) << ", negativity "
                      << format_number(negativity_volume(field)) << ", bound violations "
                      << field.bound_violations() << '\n';
            std::string content = format == "json" ? table_json("wigner", head_meta, config, t)
                                                   : table_csv(header("wigner", head_meta, config), t);
            emitter.emit("wigner" + ext, content);
            return kExitOk;
        }

        if (figure_cmd->parsed()) {
            if (format == "json") {
                throw Error(ErrorKind::InvalidArgument, "figure presets are written as CSV only");
            }
            if (sweep) {
                throw Error(ErrorKind::InvalidArgument, "figure presets fix their own sweeps");
            }
            FigureOptions options;
            options.wigner_backend = parse_backend(backend_text);
            std::vector<FigureFile> files = build_figure(figure_id, config, options);
            Emitter figure_out{out_dir.empty() ? std::string(".") : out_dir};
            for (const FigureFile &f : files) {
                figure_out.emit(f.name, f.content);
            }
            return kExitOk;
        }

        if (verify_cmd->parsed()) {
            VerifyLattice lattice = sweep ? VerifyLattice::from_sweep(config, *sweep) : VerifyLattice::standard();
            DiscrepancyReport report = run_verify(lattice, VerifyOptions{});
            if (out_dir.empty()) {
                std::cout << (format == "json" ? report_json(report, config) : report_csv(report, config));
            } else {
                emitter.emit("discrepancy_report.json", report_json(report, config));
                emitter.emit("discrepancy_report.csv", report_csv(report, config));
            }
            for (const std::string &failure : report.hard_failures) {
                std::cerr << "hard assertion: " << failure << '\n';
            }
            return report.passed() ? kExitOk : kExitHardAssertion;
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
    return kExitUsage;
}
