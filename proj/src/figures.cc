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

#include "spssvs/figures.h"

#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "spssvs/analytic.h"
#include "spssvs/error.h"
#include "spssvs/format.h"
#include "spssvs/observables.h"
#include "spssvs/states.h"
#include "spssvs/wigner.h"

namespace spssvs {

namespace {

constexpr double kPi = std::numbers::pi;

struct Curve {
    std::string label;
    MeasurementConfig config;
};

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string header(const std::string &preset, const std::string &curve, const std::string &sweep,
                   const std::string &backend, const MeasurementConfig &config) {
    std::ostringstream os;
    os << "#@ command = figure\n#@ preset = " << preset << '\n';
    if (!curve.empty()) {
        os << "#@ curve = " << curve << '\n';
    }
    if (!sweep.empty()) {
        os << "#@ sweep = " << sweep << '\n';
    }
    os << "#@ backend = " << backend << '\n' << config_echo(config);
    return os.str();
}

using Row = std::function<std::vector<double>(const MeasurementConfig &)>;

FigureFile sweep_file(const std::string &preset, const std::string &file_tag, const Curve &curve,
                      const SweepSpec &sweep, const std::string &backend, const std::string &columns,
                      const Row &row) {
    MeasurementConfig echo = sweep.at(curve.config, 0);
    std::ostringstream os;
    os << header(preset, curve.label, sweep.to_string(), backend, echo) << sweep.variable << ',' << columns << '\n';
    for (int k = 0; k < sweep.steps; ++k) {
        MeasurementConfig c = sweep.at(curve.config, k);
        os << format_number(sweep.value(k));
        for (double v : row(c)) {
            os << ',' << format_number(v);
        }
        os << '\n';
    }
    return {preset + "_" + file_tag + ".csv", os.str()};
}

double squeezing_oracle(const MeasurementConfig &c) {
    PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
    return squeezing_param(oracle_moments(e.post), {c.phi});
}

double squeezing_closed(const MeasurementConfig &c) {
    analytic::ClosedMoments m = analytic::closed_moments(weak_value(c.qubit()), c.pointer());
    return squeezing_param(m.to_moment_set(), {c.phi});
}

std::vector<double> squeezing_row(const MeasurementConfig &c) {
    return {squeezing_oracle(c), squeezing_closed(c)};
}

MeasurementConfig with(MeasurementConfig c, double r, double theta, double alpha, double delta, double s) {
    c.r = r;
    c.theta = theta;
    c.alpha = alpha;
    c.delta = delta;
    c.s = s;
    return c;
}

struct AlphaValue {
    const char *tag;
    double value;
};

const AlphaValue kAlpha0{"alpha0", 0};
const AlphaValue kAlphaHalf{"alpha_pi_2", kPi / 2};
const AlphaValue kAlphaTwoThirds{"alpha_2pi_3", 2 * kPi / 3};
const AlphaValue kAlphaEightNinths{"alpha_8pi_9", 8 * kPi / 9};

std::vector<FigureFile> fig1a(const MeasurementConfig &base) {
    std::vector<FigureFile> out;
    MeasurementConfig b = base;
    b.phi = kPi / 2;
    SweepSpec sweep{"r", 0.05, 1.5, 59};
    for (double s : {0.0, 0.1, 0.3, 0.5}) {
        Curve curve{"s=" + short_number(s), with(b, 0.05, 0, 8 * kPi / 9, kPi / 2, s)};
        out.push_back(sweep_file("fig1a", "s" + short_number(s), curve, sweep, "both", "S_oracle,S_analytic",
                                 squeezing_row));
    }
    return out;
}

std::vector<FigureFile> fig1b(const MeasurementConfig &base) {
    std::vector<FigureFile> out;
    MeasurementConfig b = base;
    b.phi = kPi / 2;
    SweepSpec sweep{"s", 0, 2, 41};
    for (AlphaValue a : {kAlpha0, kAlphaHalf, kAlphaTwoThirds, kAlphaEightNinths}) {
        Curve curve{std::string("alpha=") + format_number(a.value), with(b, 0.5, 0, a.value, kPi / 2, 0)};
        out.push_back(sweep_file("fig1b", a.tag, curve, sweep, "both", "S_oracle,S_analytic", squeezing_row));
    }
    return out;
}

std::vector<FigureFile> fig1c(const MeasurementConfig &base) {
    std::vector<FigureFile> out;
    MeasurementConfig b = base;
    b.phi = kPi / 2;
    SweepSpec sweep{"alpha", 0, 17 * kPi / 18, 35};
    for (double s : {0.0, 0.1, 0.3, 0.5}) {
        Curve curve{"s=" + short_number(s), with(b, 0.5, 0, 0, kPi / 2, s)};
        out.push_back(sweep_file("fig1c", "s" + short_number(s), curve, sweep, "both", "S_oracle,S_analytic",
                                 squeezing_row));
    }
    return out;
}

std::vector<FigureFile> fig2(const MeasurementConfig &base) {
    std::vector<FigureFile> out;
    SweepSpec sweep{"s", 0, 2, 41};
    for (AlphaValue a : {kAlpha0, kAlphaHalf, kAlphaEightNinths}) {
        Curve curve{std::string("alpha=") + format_number(a.value), with(base, 0.1, 0, a.value, kPi / 2, 0)};
        out.push_back(sweep_file("fig2", a.tag, curve, sweep, "oracle", "Q_oracle", [](const MeasurementConfig &c) {
            PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
            return std::vector<double>{mandel_q(e.post)};
        }));
    }
    return out;
}

std::vector<double> snr_row(const MeasurementConfig &c) {
    SnrComparison cmp = snr_ratio(c.qubit(), c.pointer(), c.n_measurements, c.truncation);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    analytic::SnrResult a = cmp.analytic.value_or(analytic::SnrResult{nan, nan, nan});
    return {cmp.oracle.chi, a.chi, cmp.oracle.r_p, cmp.oracle.r_n, a.r_p, a.r_n};
}

const char *kSnrColumns = "chi_oracle,chi_analytic,Rp_oracle,Rn_oracle,Rp_analytic,Rn_analytic";

std::vector<FigureFile> fig4a(const MeasurementConfig &base) {
    std::vector<FigureFile> out;
    SweepSpec sweep{"r", 0.05, 2, 40};
    for (AlphaValue a : {kAlphaHalf, kAlphaTwoThirds, kAlphaEightNinths}) {
        Curve curve{std::string("alpha=") + format_number(a.value), with(base, 0.05, 5 * kPi / 12, a.value, kPi / 2, 0.3)};
        out.push_back(sweep_file("fig4a", a.tag, curve, sweep, "both", kSnrColumns, snr_row));
    }
    return out;
}

std::vector<FigureFile> fig4b(const MeasurementConfig &base) {
    std::vector<FigureFile> out;
    SweepSpec sweep{"s", 0, 1, 41};
    for (AlphaValue a : {kAlphaHalf, kAlphaTwoThirds, kAlphaEightNinths}) {
        Curve curve{std::string("alpha=") + format_number(a.value), with(base, 0.3, 5 * kPi / 12, a.value, kPi / 2, 0)};
        out.push_back(sweep_file("fig4b", a.tag, curve, sweep, "both", kSnrColumns, snr_row));
    }
    return out;
}

std::vector<FigureFile> fig5(const MeasurementConfig &base) {
    std::vector<FigureFile> out;
    SweepSpec sweep{"s", 0, 2, 41};
    for (AlphaValue a : {kAlpha0, kAlphaHalf, kAlphaEightNinths}) {
        Curve curve{std::string("alpha=") + format_number(a.value), with(base, 0.5, 0, a.value, kPi / 2, 0)};
        out.push_back(sweep_file("fig5", a.tag, curve, sweep, "both", "F_oracle,F_analytic",
                                 [](const MeasurementConfig &c) {
                                     PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
                                     double closed = analytic::fidelity_closed(e.w, c.pointer()).fidelity;
                                     return std::vector<double>{fidelity(e.phi, e.post), closed};
                                 }));
    }
    return out;
}

std::string field_csv(const WignerField &f, const std::string &head) {
    std::ostringstream os;
    os << head << "x,p,W\n";
    const PhaseSpaceGrid &g = f.grid;
    for (int i = 0; i < g.nx; ++i) {
        for (int j = 0; j < g.np; ++j) {
            os << format_number(g.x(i)) << ',' << format_number(g.p(j)) << ',' << format_number(f.at(i, j)) << '\n';
        }
    }
    return os.str();
}

std::vector<FigureFile> fig3(const MeasurementConfig &base, const FigureOptions &options) {
    std::vector<FigureFile> out;
    std::ostringstream summary;
    summary << header("fig3", "", "", options.wigner_backend ? backend_name(*options.wigner_backend) : "default",
                      with(base, 0, 0, 8 * kPi / 9, kPi / 2, 0));
    summary << "r,s,backend,integral,negativity,min,max,bound_violations\n";
    for (double r : {0.0, 0.5, 1.0, 2.0}) {
        for (double s : {0.0, 0.1, 0.5, 1.0}) {
            MeasurementConfig c = with(base, r, 0, 8 * kPi / 9, kPi / 2, s);
            Backend backend = r > kAnalyticRMin ? options.wigner_backend.value_or(Backend::Analytic) : Backend::Oracle;
            PhaseSpaceGrid grid = PhaseSpaceGrid::default_for(r);
            WignerField field;
            if (backend == Backend::Analytic) {
                field = wigner_field_closed(weak_value(c.qubit()), c.pointer(), grid);
            } else {
                PointerEnsemble e = build_pointer_ensemble(c.pointer(), c.qubit(), c.truncation);
                field = wigner_field(e.post, grid);
            }
            std::string tag = "r" + short_number(r) + "_s" + short_number(s);
            out.push_back({"fig3_" + tag + ".csv", field_csv(field, header("fig3", tag, "", backend_name(backend), c))});
            summary << format_number(r) << ',' << format_number(s) << ',' << backend_name(backend) << ','
                    << format_number(field_integral(field)) << ',' << format_number(negativity_volume(field)) << ','
                    << format_number(field.min()) << ',' << format_number(field.max()) << ','
                    << field.bound_violations() << '\n';
        }
    }
    out.push_back({"fig3_summary.csv", summary.str()});
    return out;
}

}  // namespace

const std::vector<std::string> &figure_ids() {
    static const std::vector<std::string> ids = {"fig1a", "fig1b", "fig1c", "fig2", "fig3", "fig4a", "fig4b", "fig5"};
    return ids;
}

std::vector<FigureFile> build_figure(const std::string &id, const MeasurementConfig &base,
                                     const FigureOptions &options) {
    base.validate();
    if (id == "fig1a") {
        return fig1a(base);
    }
    if (id == "fig1b") {
        return fig1b(base);
    }
    if (id == "fig1c") {
        return fig1c(base);
    }
    if (id == "fig2") {
        return fig2(base);
    }
    if (id == "fig3") {
        return fig3(base, options);
    }
    if (id == "fig4a") {
        return fig4a(base);
    }
    if (id == "fig4b") {
        return fig4b(base);
    }
    if (id == "fig5") {
        return fig5(base);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown figure preset '" + id + "'");
}

}  // namespace spssvs
