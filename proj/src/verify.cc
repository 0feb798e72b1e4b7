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

#include "spssvs/verify.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "spssvs/analytic.h"
#include "spssvs/error.h"
#include "spssvs/format.h"
#include "spssvs/observables.h"
#include "spssvs/states.h"

namespace spssvs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHardRelTol = 1e-9;
constexpr double kBoundSlack = 1e-10;

// a v on the truncated ladder.
Eigen::VectorXcd lower(const Eigen::VectorXcd &v) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (Eigen::Index n = 1; n < v.size(); ++n) {
        out[n - 1] = std::sqrt(static_cast<double>(n)) * v[n];
    }
    return out;
}

struct CrossTerms {
    Complex a_pm, a_mp;
    Complex a2_pm, a2_mp;
    Complex n_pm, n_mp;
};

CrossTerms cross_terms(const FockVector &plus, const FockVector &minus) {
    const Eigen::VectorXcd &u = plus.amps();
    const Eigen::VectorXcd &v = minus.amps();
    Eigen::VectorXcd au = lower(u);
    Eigen::VectorXcd av = lower(v);
    Eigen::VectorXcd aau = lower(au);
    Eigen::VectorXcd aav = lower(av);
    return {u.dot(av), v.dot(au), u.dot(aav), v.dot(aau), au.dot(av), av.dot(au)};
}

struct Bounds {
    std::string name;
    double margin;
};

struct PointEval {
    std::vector<DiscrepancyRecord> records;
    std::vector<Complex> oracle_scalars;
    WignerField oracle_field;
    std::vector<Bounds> oracle_bounds;
    std::vector<Bounds> analytic_bounds;
};

struct AnalyticSide {
    analytic::ClosedMoments moments;
    analytic::AuxFunctions h;
    analytic::NonPostselectedClosed nonpost;
    analytic::FidelityClosed fidelity;
    double lambda = 0;
    WignerField field;
};

AnalyticSide analytic_side(const PointerParams &params, const QubitConfig &q, const PhaseSpaceGrid &grid) {
    WeakValue w = weak_value(q);
    AnalyticSide a;
    a.moments = analytic::closed_moments(w, params);
    a.h = analytic::h_functions(params);
    a.nonpost = analytic::nonpostselected_closed(q, params);
    a.fidelity = analytic::fidelity_closed(w, params);
    a.lambda = closed_lambda(w, params);
    a.field = wigner_field_closed(w, params, grid);
    return a;
}

DiscrepancyRecord make_record(const std::string &id, const LatticePoint &pt, Complex analytic, Complex oracle,
                              int dim) {
    DiscrepancyRecord rec;
    rec.formula_id = id;
    rec.point = pt;
    rec.analytic = analytic;
    rec.oracle = oracle;
    rec.abs_err = std::abs(analytic - oracle);
    rec.rel_err = rec.abs_err / std::max(std::abs(oracle), 1.0);
    rec.dim = dim;
    return rec;
}

void quadrature_bounds(const MomentSet &m, const std::vector<double> &phis, std::vector<Bounds> &out) {
    for (double phi : phis) {
        QuadratureStats a = quadrature_stats(m, {phi});
        QuadratureStats b = quadrature_stats(m, {phi + kPi / 2});
        out.push_back({"squeezing_param >= -1/2", (a.variance - 0.5) + 0.5});
        out.push_back({"uncertainty_product >= 1/4", a.variance * b.variance - 0.25});
    }
}

double field_margin(const WignerField &f) {
    double peak = std::max(std::abs(f.min()), std::abs(f.max()));
    return wigner_bound() + kWignerBoundSlack - peak;
}

PointEval evaluate_point(const LatticePoint &pt, const AnalyticSide &an, const std::vector<double> &phis,
                         const PhaseSpaceGrid &grid, int dim) {
    PointerParams params{pt.r, pt.theta, pt.s};
    QubitConfig q{pt.alpha, pt.delta};
    PointerEnsemble e = build_pointer_ensemble_at(params, q, dim);
    MomentSet post = oracle_moments(e.post);
    CrossTerms c = cross_terms(e.plus_branch, e.minus_branch);
    NonPostselectedMoments np = nonpostselected_moments(e.phi, q, params, TruncationPolicy::fixed(dim, dim));
    Complex overlap = inner_product(e.phi, e.post);
    Complex p1 = inner_product(e.phi, e.plus_branch);
    Complex p2 = inner_product(e.phi, e.minus_branch);

    PointEval out;
    out.oracle_field = wigner_field(e.post, grid);
    FieldDifference diff = compare_fields(an.field, out.oracle_field);

    auto add = [&](const std::string &id, Complex analytic, Complex oracle) {
        out.records.push_back(make_record(id, pt, analytic, oracle, dim));
        out.oracle_scalars.push_back(oracle);
    };
    add("Eq10", an.moments.a_mean, post.a_mean);
    add("Eq11", an.moments.a_sq_mean, post.a_sq_mean);
    add("Eq12", an.moments.n_mean, post.n_mean);
    add("Eq13", an.h.h1, c.a_pm - c.a_mp);
    add("Eq14", an.h.h2, 0.5 * (c.a2_pm + c.a2_mp));
    add("Eq15", an.h.h3, 0.5 * (c.n_pm + c.n_mp));
    {
        // Largest pointwise difference over the grid.
        const PhaseSpaceGrid &g = grid;
        int best = 0;
        double best_abs = -1;
        for (int i = 0; i < g.nx; ++i) {
            for (int j = 0; j < g.np; ++j) {
                double d = std::abs(an.field.at(i, j) - out.oracle_field.at(i, j));
                if (d > best_abs) {
                    best_abs = d;
                    best = i * g.np + j;
                }
            }
        }
        double wa = an.field.values[best];
        double wo = out.oracle_field.values[best];
        DiscrepancyRecord rec = make_record("Eq20", pt, wa, wo, dim);
        rec.x = diff.x_at_max;
        rec.p = diff.p_at_max;
        rec.mean_abs = diff.mean_abs;
        out.records.push_back(rec);
    }
    add("Eq30", an.nonpost.a_mean, np.moments.a_mean);
    add("Eq31", an.nonpost.n_mean, np.moments.n_mean);
    add("Eq32", an.nonpost.a_sq_mean, np.moments.a_sq_mean);
    add("Eq35", an.fidelity.overlap, overlap);
    add("Eq36", an.fidelity.p1, p1);
    add("Eq37", an.fidelity.p2, p2);
    add("lambda", an.lambda, 1 / e.raw_norm);

    double q_m = mandel_q(post);
    double f = fidelity(e.phi, e.post);
    out.oracle_scalars.push_back(*post.n2_corr);
    out.oracle_scalars.push_back(q_m);
    out.oracle_scalars.push_back(f);

    quadrature_bounds(post, phis, out.oracle_bounds);
    out.oracle_bounds.push_back({"mandel_q >= -1", q_m + 1});
    out.oracle_bounds.push_back({"fidelity in [0, 1]", std::min(f, 1 - f)});
    out.oracle_bounds.push_back({"|W| <= 2/pi", field_margin(out.oracle_field)});

    quadrature_bounds(an.moments.to_moment_set(), phis, out.analytic_bounds);
    out.analytic_bounds.push_back({"fidelity in [0, 1]", std::min(an.fidelity.fidelity, 1 - an.fidelity.fidelity)});
    out.analytic_bounds.push_back({"|W| <= 2/pi", field_margin(an.field)});
    return out;
}

double doubling_delta(const PointEval &a, const PointEval &b) {
    double delta = 0;
    for (size_t k = 0; k < a.oracle_scalars.size(); ++k) {
        delta = std::max(delta, std::abs(a.oracle_scalars[k] - b.oracle_scalars[k]));
    }
    return std::max(delta, compare_fields(a.oracle_field, b.oracle_field).max_abs);
}

// Slack below which a margin still counts as satisfied.
double bound_slack(const std::string &name) {
    return name == "|W| <= 2/pi" ? 0.0 : kBoundSlack;
}

void tally(std::vector<BoundCheck> &checks, const std::vector<Bounds> &samples, Backend backend) {
    for (const Bounds &b : samples) {
        auto it = std::find_if(checks.begin(), checks.end(),
                               [&](const BoundCheck &c) { return c.name == b.name && c.backend == backend; });
        if (it == checks.end()) {
            BoundCheck c;
            c.name = b.name;
            c.backend = backend;
            c.hard = backend == Backend::Oracle;
            c.worst_margin = b.margin;
            checks.push_back(c);
            it = checks.end() - 1;
        }
        ++it->evaluations;
        it->worst_margin = std::min(it->worst_margin, b.margin);
        if (!(b.margin >= -bound_slack(b.name))) {
            ++it->violations;
        }
    }
}

std::string point_label(const LatticePoint &p) {
    std::ostringstream os;
    os << "r=" << format_number(p.r) << " theta=" << format_number(p.theta) << " s=" << format_number(p.s)
       << " alpha=" << format_number(p.alpha) << " delta=" << format_number(p.delta);
    return os.str();
}

}  // namespace

const std::vector<std::string> &formula_ids() {
    static const std::vector<std::string> ids = {"Eq10", "Eq11", "Eq12", "Eq13", "Eq14", "Eq15", "Eq20",
                                                 "Eq30", "Eq31", "Eq32", "Eq35", "Eq36", "Eq37", "lambda"};
    return ids;
}

VerifyLattice VerifyLattice::standard() {
    VerifyLattice l;
    l.r = {0.3, 0.5, 1.0};
    l.s = {0, 0.1, 0.5, 1.0};
    l.alpha = {0, kPi / 2, 8 * kPi / 9};
    l.delta = {0, kPi / 2};
    l.theta = {0, 5 * kPi / 12};
    l.phi = {0, kPi / 2};
    return l;
}

VerifyLattice VerifyLattice::from_sweep(const MeasurementConfig &base, const SweepSpec &sweep) {
    sweep.validate();
    VerifyLattice l;
    l.r = {base.r};
    l.s = {base.s};
    l.alpha = {base.alpha};
    l.delta = {base.delta};
    l.theta = {base.theta};
    l.phi = {base.phi};
    std::vector<double> values;
    for (int k = 0; k < sweep.steps; ++k) {
        values.push_back(sweep.value(k));
    }
    const std::string &v = sweep.variable;
    if (v == "r") {
        l.r = values;
    } else if (v == "s") {
        l.s = values;
    } else if (v == "alpha") {
        l.alpha = values;
    } else if (v == "delta") {
        l.delta = values;
    } else if (v == "theta") {
        l.theta = values;
    } else {
        l.phi = values;
    }
    return l;
}

void VerifyLattice::validate() const {
    if (r.empty() || s.empty() || alpha.empty() || delta.empty() || theta.empty() || phi.empty()) {
        throw Error(ErrorKind::InvalidArgument, "verify lattice has an empty axis");
    }
    for (double v : r) {
        if (!(v > kAnalyticRMin)) {
            throw Error(ErrorKind::InvalidArgument, "verify compares against the closed forms, which need r > 1e-6");
        }
    }
    for (const LatticePoint &p : points()) {
        PointerParams{p.r, p.theta, p.s}.validate();
        QubitConfig{p.alpha, p.delta}.validate();
    }
}

std::vector<LatticePoint> VerifyLattice::points() const {
    std::vector<LatticePoint> out;
    for (double vr : r) {
        for (double vt : theta) {
            for (double vs : s) {
                for (double va : alpha) {
                    for (double vd : delta) {
                        out.push_back({vr, vt, vs, va, vd});
                    }
                }
            }
        }
    }
    return out;
}

DiscrepancyReport run_verify(const VerifyLattice &lattice, const VerifyOptions &options) {
    lattice.validate();
    DiscrepancyReport report;
    report.lattice = lattice;
    report.options = options;

    for (const LatticePoint &pt : lattice.points()) {
        PointerParams params{pt.r, pt.theta, pt.s};
        QubitConfig q{pt.alpha, pt.delta};
        AnalyticSide an = analytic_side(params, q, options.wigner_grid);

        int dim = options.policy.mode == TruncationPolicy::Mode::Fixed
                      ? options.policy.fixed_dim
                      : build_pointer_ensemble(params, q, options.policy).dim();
        // Values are reported from the doubled dimension once the doubling
        // check passes.
        PointEval current = evaluate_point(pt, an, lattice.phi, options.wigner_grid, dim);
        double delta = 0;
        while (true) {
            if (2 * dim > options.max_dim) {
                throw Error(ErrorKind::TruncationInsufficient,
                            "doubling check did not converge below dim " + std::to_string(options.max_dim) + " at " +
                                point_label(pt));
            }
            PointEval doubled = evaluate_point(pt, an, lattice.phi, options.wigner_grid, 2 * dim);
            delta = doubling_delta(current, doubled);
            current = std::move(doubled);
            dim *= 2;
            if (delta < options.convergence_tol) {
                break;
            }
        }
        report.max_doubling_delta = std::max(report.max_doubling_delta, delta);
        report.max_dim = std::max(report.max_dim, dim);
        tally(report.bounds, current.oracle_bounds, Backend::Oracle);
        tally(report.bounds, current.analytic_bounds, Backend::Analytic);
        for (DiscrepancyRecord &rec : current.records) {
            report.records.push_back(std::move(rec));
        }
    }

    for (const std::string &id : formula_ids()) {
        FormulaSummary sum;
        sum.formula_id = id;
        double total = 0;
        for (const DiscrepancyRecord &rec : report.records) {
            if (rec.formula_id != id) {
                continue;
            }
            ++sum.count;
            total += rec.rel_err;
            sum.max_abs_err = std::max(sum.max_abs_err, rec.abs_err);
            if (sum.count == 1 || rec.rel_err > sum.max_rel_err) {
                sum.max_rel_err = rec.rel_err;
                sum.worst = rec.point;
            }
        }
        sum.mean_rel_err = sum.count > 0 ? total / sum.count : 0;
        report.summary.push_back(sum);
    }

    for (const DiscrepancyRecord &rec : report.records) {
        bool s_zero = rec.point.s == 0;
        bool n_mean_at_half_pi = rec.formula_id == "Eq31" && std::abs(rec.point.delta - kPi / 2) < 1e-12;
        if ((s_zero || n_mean_at_half_pi) && !(rec.rel_err <= kHardRelTol)) {
            report.hard_failures.push_back(rec.formula_id + " rel_err " + format_number(rec.rel_err) + " at " +
                                           point_label(rec.point));
        }
    }
    for (const BoundCheck &b : report.bounds) {
        if (b.hard && b.violations > 0) {
            report.hard_failures.push_back(b.name + ": " + std::to_string(b.violations) + " violations");
        }
    }
    return report;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
    if (const char *sentinel = json_sentinel(v)) {
        return sentinel;
    }
    return v == 0 ? 0.0 : v;
}

ojson complex_json(Complex c) {
    ojson o;
    o["re"] = num(c.real());
    o["im"] = num(c.imag());
    return o;
}

ojson point_json(const LatticePoint &p) {
    ojson o;
    o["r"] = num(p.r);
    o["theta"] = num(p.theta);
    o["s"] = num(p.s);
    o["alpha"] = num(p.alpha);
    o["delta"] = num(p.delta);
    return o;
}

ojson axis_json(const std::vector<double> &values) {
    ojson a = ojson::array();
    for (double v : values) {
        a.push_back(num(v));
    }
    return a;
}

}  // namespace

std::string report_json(const DiscrepancyReport &report, const MeasurementConfig &config) {
    ojson doc;
    doc["schema_version"] = 1;
    ojson cfg = ojson::object();
    for (const auto &[key, value] : config_entries(config)) {
        cfg[key] = value;
    }
    doc["config"] = cfg;

    ojson lattice;
    lattice["r"] = axis_json(report.lattice.r);
    lattice["theta"] = axis_json(report.lattice.theta);
    lattice["s"] = axis_json(report.lattice.s);
    lattice["alpha"] = axis_json(report.lattice.alpha);
    lattice["delta"] = axis_json(report.lattice.delta);
    lattice["phi"] = axis_json(report.lattice.phi);
    lattice["points"] = report.lattice.points().size();
    lattice["bound_points"] = report.lattice.bound_points();
    doc["lattice"] = lattice;

    ojson opts;
    opts["tail_tol"] = num(report.options.policy.tail_tol);
    opts["hard_cap"] = report.options.policy.hard_cap;
    opts["convergence_tol"] = num(report.options.convergence_tol);
    const PhaseSpaceGrid &g = report.options.wigner_grid;
    opts["wigner_grid"] = {{"x_min", num(g.x_min)}, {"x_max", num(g.x_max)}, {"p_min", num(g.p_min)},
                           {"p_max", num(g.p_max)}, {"nx", g.nx},           {"np", g.np}};
    doc["options"] = opts;

    ojson convergence;
    convergence["max_doubling_delta"] = num(report.max_doubling_delta);
    convergence["max_dim"] = report.max_dim;
    convergence["converged"] = report.max_doubling_delta < report.options.convergence_tol;
    doc["convergence"] = convergence;

    ojson summary = ojson::array();
    for (const FormulaSummary &s : report.summary) {
        ojson o;
        o["formula_id"] = s.formula_id;
        o["count"] = s.count;
        o["max_rel_err"] = num(s.max_rel_err);
        o["mean_rel_err"] = num(s.mean_rel_err);
        o["max_abs_err"] = num(s.max_abs_err);
        o["worst_point"] = point_json(s.worst);
        summary.push_back(o);
    }
    doc["summary"] = summary;

    ojson bounds = ojson::array();
    for (const BoundCheck &b : report.bounds) {
        ojson o;
        o["name"] = b.name;
        o["backend"] = backend_name(b.backend);
        o["hard"] = b.hard;
        o["evaluations"] = b.evaluations;
        o["violations"] = b.violations;
        o["worst_margin"] = num(b.worst_margin);
        bounds.push_back(o);
    }
    doc["bounds"] = bounds;

    ojson hard;
    hard["passed"] = report.passed();
    hard["failures"] = report.hard_failures;
    doc["hard_assertions"] = hard;

    ojson records = ojson::array();
    for (const DiscrepancyRecord &rec : report.records) {
        ojson o;
        o["formula_id"] = rec.formula_id;
        o["point"] = point_json(rec.point);
        o["analytic"] = complex_json(rec.analytic);
        o["oracle"] = complex_json(rec.oracle);
        o["abs_err"] = num(rec.abs_err);
        o["rel_err"] = num(rec.rel_err);
        o["dim"] = rec.dim;
        if (rec.x) {
            o["x"] = num(*rec.x);
            o["p"] = num(*rec.p);
            o["mean_abs_err"] = num(*rec.mean_abs);
        }
        records.push_back(o);
    }
    doc["records"] = records;
    return doc.dump(2) + "\n";
}

std::string report_csv(const DiscrepancyReport &report, const MeasurementConfig &config) {
    std::ostringstream os;
    os << "#@ command = verify\n" << config_echo(config);
    os << "formula_id,r,theta,s,alpha,delta,analytic_re,analytic_im,oracle_re,oracle_im,abs_err,rel_err,dim\n";
    for (const DiscrepancyRecord &rec : report.records) {
        const LatticePoint &p = rec.point;
        os << rec.formula_id << ',' << format_number(p.r) << ',' << format_number(p.theta) << ','
           << format_number(p.s) << ',' << format_number(p.alpha) << ',' << format_number(p.delta) << ','
           << format_number(rec.analytic.real()) << ',' << format_number(rec.analytic.imag()) << ','
           << format_number(rec.oracle.real()) << ',' << format_number(rec.oracle.imag()) << ','
           << format_number(rec.abs_err) << ',' << format_number(rec.rel_err) << ',' << rec.dim << '\n';
    }
    return os.str();
}

}  // namespace spssvs
