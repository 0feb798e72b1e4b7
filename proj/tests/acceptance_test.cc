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

// Acceptance run: one PASS/FAIL line per criterion. Usage:
//   spssvs_acceptance SCHEMA_PATH PYTHON
// The exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spssvs/analytic.h"
#include "spssvs/config.h"
#include "spssvs/figures.h"
#include "spssvs/fock.h"
#include "spssvs/observables.h"
#include "spssvs/states.h"
#include "spssvs/verify.h"
#include "spssvs/wigner.h"

using namespace spssvs;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int failures = 0;

void criterion(int id, const std::string &title, const std::function<Outcome()> &body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception &e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) {
        ++failures;
    }
    std::printf("%s criterion %d: %s [%.2f s]%s%s\n", out.pass ? "PASS" : "FAIL", id, title.c_str(), sec,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome s0_reductions() {
    Outcome out;
    double worst_analytic = 0;
    double worst_oracle = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (double r : {0.3, 0.5, 1.0}) {
        for (double theta : {0.0, 5 * kPi / 12}) {
            for (double alpha : {0.0, kPi / 2, 8 * kPi / 9}) {
                PointerParams params{r, theta, 0, 1 / std::sqrt(2.0)};
                QubitConfig q{alpha, kPi / 2};
                const Complex a_exact = 0;
                const double n_exact = 1 + 3 * std::sinh(r) * std::sinh(r);
                const Complex a2_exact = 1.5 * std::polar(std::sinh(2 * r), theta);
                analytic::ClosedMoments m = analytic::closed_moments(weak_value(q), params);
                worst_analytic = std::max({worst_analytic, std::abs(m.a_mean - a_exact),
                                           std::abs(m.n_mean - n_exact), std::abs(m.a_sq_mean - a2_exact)});
                PointerEnsemble e = build_pointer_ensemble(params, q, TruncationPolicy::adaptive());
                MomentSet o = oracle_moments(e.post);
                worst_oracle = std::max({worst_oracle, std::abs(o.a_mean - m.a_mean), std::abs(o.n_mean - m.n_mean),
                                         std::abs(o.a_sq_mean - m.a_sq_mean)});
            }
        }
    }
    const double sec = seconds_since(t0);
    out.check(worst_analytic <= 1e-9, "closed forms off the reductions by " + fmt("%.3g", worst_analytic));
    out.check(worst_oracle <= 1e-9, "oracle off the closed forms by " + fmt("%.3g", worst_oracle));
    out.check(sec < 1, "runtime " + fmt("%.2f", sec) + " s");
    if (out.pass) {
        out.detail = "closed-form residual " + fmt("%.2g", worst_analytic) + ", oracle residual " +
                     fmt("%.2g", worst_oracle);
    }
    return out;
}

Outcome wigner_origin() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    double worst_origin = 0;
    double worst_field = 0;
    for (double r : {0.5, 1.0}) {
        PointerParams params{r, 0, 0, 1 / std::sqrt(2.0)};
        QubitConfig q{8 * kPi / 9, kPi / 2};
        WeakValue w = weak_value(q);
        PointerEnsemble e = build_pointer_ensemble(params, q, TruncationPolicy::adaptive());
        worst_origin = std::max({worst_origin, std::abs(wigner_oracle_point(e.post, 0, 0) + 2 / kPi),
                                 std::abs(analytic::wigner_closed(0, 0, w, params) + 2 / kPi)});
        PhaseSpaceGrid grid = PhaseSpaceGrid::default_for(r);
        FieldDifference d = compare_fields(wigner_field(e.post, grid), wigner_field_closed(w, params, grid));
        worst_field = std::max(worst_field, d.max_abs);
    }
    const double sec = seconds_since(t0);
    out.check(worst_origin <= 1e-6, "W(0,0) off -2/pi by " + fmt("%.3g", worst_origin));
    out.check(worst_field <= 1e-6, "field max difference " + fmt("%.3g", worst_field));
    out.check(sec < 30, "runtime " + fmt("%.1f", sec) + " s");
    if (out.pass) {
        out.detail = "origin residual " + fmt("%.2g", worst_origin) + ", field max difference " +
                     fmt("%.2g", worst_field);
    }
    return out;
}

Outcome bound_suite(const DiscrepancyReport &report, double verify_seconds) {
    Outcome out;
    const size_t points = report.lattice.bound_points();
    out.check(points >= 200, "only " + std::to_string(points) + " parameter points");
    std::string analytic_note;
    int oracle_checks = 0;
    for (const BoundCheck &b : report.bounds) {
        if (b.backend == Backend::Oracle) {
            ++oracle_checks;
            out.check(b.violations == 0, b.name + ": " + std::to_string(b.violations) + " violations");
        } else if (b.violations > 0) {
            analytic_note += (analytic_note.empty() ? "" : ", ") + b.name + " " + std::to_string(b.violations) + "/" +
                             std::to_string(b.evaluations);
        }
    }
    out.check(oracle_checks == 5, "expected 5 oracle bound checks, got " + std::to_string(oracle_checks));
    out.check(verify_seconds < 300, "runtime " + fmt("%.1f", verify_seconds) + " s");
    if (out.pass) {
        out.detail = std::to_string(points) + " points, 0 oracle violations, verify run " + fmt("%.1f", verify_seconds) +
                     " s";
        if (!analytic_note.empty()) {
            out.detail += "; closed-form violations reported as data: " + analytic_note;
        }
    }
    return out;
}

Outcome self_consistency(const DiscrepancyReport &report) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    out.check(report.max_doubling_delta < 1e-8, "doubling delta " + fmt("%.3g", report.max_doubling_delta));

    const int dim = 256;
    const int block = clean_block_size(dim);
    double worst_path = 0;
    for (Complex beta : {Complex(3, 0), Complex(0, -2.5), std::polar(2.0, 0.7), std::polar(1.0, -2.1)}) {
        worst_path = std::max(worst_path,
                              max_abs_diff(displacement_op(beta, dim), displacement_op_laguerre(beta, dim), block));
    }
    out.check(worst_path <= 1e-9, "displacement paths differ by " + fmt("%.3g", worst_path));

    double worst_bogoliubov = 0;
    const int sdim = 384;
    OperatorMatrix a = annihilation_op(sdim);
    for (double r : {0.3, 1.0}) {
        for (double theta : {0.0, 5 * kPi / 12}) {
            OperatorMatrix s = squeeze_op(r, theta, sdim);
            const int sblock = operator_clean_block(s);
            OperatorMatrix lhs = s.adjoint() * a * s;
            OperatorMatrix rhs = Complex(std::cosh(r)) * a + std::polar(std::sinh(r), theta) * a.adjoint();
            worst_bogoliubov = std::max(worst_bogoliubov, max_abs_diff(lhs, rhs, sblock));
        }
    }
    out.check(worst_bogoliubov <= 1e-8, "Bogoliubov residual " + fmt("%.3g", worst_bogoliubov));
    const double sec = seconds_since(t0);
    out.check(sec < 60, "runtime " + fmt("%.1f", sec) + " s");
    if (out.pass) {
        out.detail = "doubling delta " + fmt("%.2g", report.max_doubling_delta) + ", displacement paths " +
                     fmt("%.2g", worst_path) + ", Bogoliubov " + fmt("%.2g", worst_bogoliubov);
    }
    return out;
}

Outcome nonpostselected_exactness() {
    Outcome out;
    double worst = 0;
    for (const LatticePoint &pt : VerifyLattice::standard().points()) {
        PointerParams params{pt.r, pt.theta, pt.s, 1 / std::sqrt(2.0)};
        QubitConfig q{pt.alpha, pt.delta};
        FockVector phi = spsvs_state(params, TruncationPolicy::adaptive());
        NonPostselectedMoments m = nonpostselected_moments(phi, q, params, TruncationPolicy::adaptive());
        const double a_exact = pt.s / 2 * std::sin(pt.alpha) * std::cos(pt.delta);
        const double n_exact = 1 + 3 * std::sinh(pt.r) * std::sinh(pt.r) + pt.s * pt.s / 4;
        worst = std::max({worst, std::abs(m.moments.a_mean - a_exact), std::abs(m.moments.n_mean - n_exact)});
    }
    out.check(worst <= 1e-9, "largest deviation " + fmt("%.3g", worst));
    if (out.pass) {
        out.detail = "largest deviation " + fmt("%.2g", worst);
    }
    return out;
}

std::vector<std::vector<double>> csv_rows(const std::string &content) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(content);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        rows.push_back(row);
    }
    return rows;
}

Outcome fidelity_limit() {
    Outcome out;
    double worst_gap = 0;
    VerifyLattice lattice = VerifyLattice::standard();
    for (double r : lattice.r) {
        for (double theta : lattice.theta) {
            for (double alpha : lattice.alpha) {
                for (double delta : lattice.delta) {
                    PointerParams params{r, theta, 1e-6, 1 / std::sqrt(2.0)};
                    PointerEnsemble e = build_pointer_ensemble(params, {alpha, delta}, TruncationPolicy::adaptive());
                    worst_gap = std::max(worst_gap, 1 - fidelity(e.phi, e.post));
                }
            }
        }
    }
    out.check(worst_gap <= 1e-6, "1 - F reaches " + fmt("%.3g", worst_gap));

    int increases = 0;
    double worst_rise = 0;
    for (const FigureFile &f : build_figure("fig5", MeasurementConfig{})) {
        std::vector<std::vector<double>> rows = csv_rows(f.content);
        for (size_t k = 1; k < rows.size(); ++k) {
            if (rows[k][0] > 1.2 + 1e-12) {
                break;
            }
            const double rise = rows[k][1] - rows[k - 1][1];
            if (rise > 0) {
                ++increases;
                worst_rise = std::max(worst_rise, rise);
            }
        }
    }
    out.check(increases == 0, std::to_string(increases) + " increasing steps in fig5 oracle curves (largest " +
                                  fmt("%.3g", worst_rise) + ")");
    if (out.pass) {
        out.detail = "max 1 - F at s = 1e-6: " + fmt("%.2g", worst_gap) + "; fig5 oracle curves non-increasing";
    }
    return out;
}

Outcome verify_completeness(const DiscrepancyReport &report, const std::string &json, const std::string &csv,
                            const std::string &schema, const std::string &python) {
    Outcome out;
    const size_t points = report.lattice.points().size();
    std::map<std::string, size_t> counts;
    for (const DiscrepancyRecord &rec : report.records) {
        ++counts[rec.formula_id];
    }
    for (const std::string &id : formula_ids()) {
        out.check(counts[id] == points, id + " has " + std::to_string(counts[id]) + " of " + std::to_string(points) +
                                            " records");
    }
    out.check(counts.size() == formula_ids().size(), "unexpected formula ids in the report");
    out.check(report.max_doubling_delta < report.options.convergence_tol, "oracle values not converged");
    out.check(report.passed(), std::to_string(report.hard_failures.size()) + " hard assertion failures");

    DiscrepancyReport again = run_verify(VerifyLattice::standard(), VerifyOptions{});
    out.check(report_json(again, MeasurementConfig{}) == json && report_csv(again, MeasurementConfig{}) == csv,
              "second run differs");

    if (schema.empty() || python.empty()) {
        out.check(false, "schema or python path not given");
    } else {
        std::filesystem::path path = std::filesystem::temp_directory_path() / "spssvs_acceptance_report.json";
        std::ofstream(path, std::ios::binary) << json;
        const std::string cmd = "\"" + python +
                                "\" -c \"import json,sys,jsonschema; "
                                "jsonschema.validate(json.load(open(sys.argv[2])), json.load(open(sys.argv[1])))\" \"" +
                                schema + "\" \"" + path.string() + "\"";
        out.check(std::system(cmd.c_str()) == 0, "report does not validate against the schema");
        std::filesystem::remove(path);
    }
    if (out.pass) {
        out.detail = std::to_string(formula_ids().size()) + " formula ids x " + std::to_string(points) +
                     " points, schema-valid, identical across runs";
    }
    return out;
}

Outcome figure_reproduction() {
    Outcome out;
    const std::map<std::string, size_t> expected_files = {{"fig1a", 4}, {"fig1b", 4}, {"fig1c", 4}, {"fig2", 3},
                                                          {"fig3", 17}, {"fig4a", 3}, {"fig4b", 3}, {"fig5", 3}};
    double total = 0;
    double fig3_seconds = 0;
    for (const std::string &id : figure_ids()) {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<FigureFile> files = build_figure(id, MeasurementConfig{});
        const double sec = seconds_since(t0);
        total += sec;
        if (id == "fig3") {
            fig3_seconds = sec;
        }
        out.check(files.size() == expected_files.at(id), id + " wrote " + std::to_string(files.size()) + " files");
        for (const FigureFile &f : files) {
            MeasurementConfig echoed = parse_config_text(f.content);
            out.check(f.content.find(config_echo(echoed)) != std::string::npos, f.name + " lacks a full config echo");
            out.check(f.content.find("#@ preset = " + id + "\n") != std::string::npos, f.name + " lacks its preset");
        }
    }
    out.check(total < 60, "presets took " + fmt("%.1f", total) + " s");
    out.check(fig3_seconds < 300, "fig3 took " + fmt("%.1f", fig3_seconds) + " s");
    if (out.pass) {
        out.detail = "all presets in " + fmt("%.1f", total) + " s (fig3 " + fmt("%.1f", fig3_seconds) + " s)";
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    const std::string schema = argc > 1 ? argv[1] : "";
    const std::string python = argc > 2 ? argv[2] : "";

    criterion(1, "s=0 reduction suite", s0_reductions);
    criterion(2, "Wigner origin value and s=0 field agreement", wigner_origin);

    const auto t0 = std::chrono::steady_clock::now();
    DiscrepancyReport report;
    std::string verify_error;
    try {
        report = run_verify(VerifyLattice::standard(), VerifyOptions{});
    } catch (const std::exception &e) {
        verify_error = e.what();
    }
    const double verify_seconds = seconds_since(t0);
    auto needs_report = [&](const std::function<Outcome()> &body) {
        return [&verify_error, body] {
            if (!verify_error.empty()) {
                return Outcome{false, "verify failed: " + verify_error};
            }
            return body();
        };
    };
    const std::string json = verify_error.empty() ? report_json(report, MeasurementConfig{}) : "";
    const std::string csv = verify_error.empty() ? report_csv(report, MeasurementConfig{}) : "";

    criterion(3, "bound suite over the verify lattice", needs_report([&] { return bound_suite(report, verify_seconds); }));
    criterion(4, "oracle self-consistency", needs_report([&] { return self_consistency(report); }));
    criterion(5, "non-postselected moments exactness", nonpostselected_exactness);
    criterion(6, "fidelity limit and fig5 monotonicity", fidelity_limit);
    criterion(7, "verify pipeline completeness",
              needs_report([&] { return verify_completeness(report, json, csv, schema, python); }));
    criterion(8, "figure presets", figure_reproduction);

    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
