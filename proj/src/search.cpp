/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/search.hpp"

#include <algorithm>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdnv/errors.hpp"
#include "sdnv/patterns.hpp"

namespace sdnv {

const char* pattern_status_name(PatternStatus s)
{
    switch (s) {
    case PatternStatus::Sat: return "sat";
    case PatternStatus::Unsat: return "unsat";
    case PatternStatus::Unknown: return "unknown";
    case PatternStatus::Error: return "error";
    case PatternStatus::Rejected: return "rejected";
    }
    return "?";
}

std::size_t SearchReport::count(PatternStatus s) const
{
    return static_cast<std::size_t>(
        std::count_if(outcomes.begin(), outcomes.end(), [s](const PatternOutcome& o) { return o.status == s; }));
}

WitnessCheck check_witness(const SdnModel& model, const BoundaryWitness& w)
{
    WitnessCheck check;
    auto fail = [&](std::string msg) {
        check.ok = false;
        check.failures.push_back(std::move(msg));
    };
    const std::size_t classes = model.class_count();
    if (w.input.size() != model.input_dim()) {
        fail("input has " + std::to_string(w.input.size()) + " components, model expects "
             + std::to_string(model.input_dim()));
        return check;
    }
    if (w.target >= classes || w.boundary >= classes || w.target == w.boundary) {
        fail("invalid class pair");
        return check;
    }
    for (std::size_t t = 0; t < w.input.size(); ++t) {
        if (w.input[t] < Rational(0) || w.input[t] > Rational(1))
            fail("x_" + std::to_string(t) + " = " + w.input[t].str() + " outside [0, 1]");
    }

    ForwardTrace trace = forward(model, w.input);
    if (trace.pattern != w.pattern)
        fail("forward realizes pattern " + trace.pattern.str() + ", witness claims " + w.pattern.str());
    for (const auto& [v, value] : trace_assignment(trace)) {
        auto it = w.assignment.find(v);
        if (it == w.assignment.end())
            fail("assignment lacks " + v.name());
        else if (it->second != value)
            fail(v.name() + " = " + it->second.str() + " but forward gives " + value.str());
    }

    const Rational& yi = trace.output[w.target];
    const Rational& yj = trace.output[w.boundary];
    if (yi != yj - w.epsilon)
        fail("boundary condition y_" + std::to_string(w.target) + " = y_" + std::to_string(w.boundary) + " - "
             + w.epsilon.str() + " violated");
    for (std::size_t k = 0; k < classes; ++k) {
        if (k != w.target && k != w.boundary && yi < trace.output[k])
            fail("y_" + std::to_string(w.target) + " < y_" + std::to_string(k));
    }

    if (w.meaningful) {
        const auto& m = *w.meaningful;
        if (m.prototype.size() != w.input.size()) {
            fail("prototype dimension mismatch");
        } else {
            for (std::size_t t = 0; t < w.input.size(); ++t) {
                Rational dist = (w.input[t] - m.prototype[t]).abs();
                if (m.strict ? dist >= m.radius : dist > m.radius)
                    fail("x_" + std::to_string(t) + " outside the meaningful box");
            }
        }
    }
    return check;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Attempt {
    PatternOutcome outcome;
    std::optional<SolveResult> result;
};

Attempt attempt(const SdnModel& model, const ConstraintSystem& shared, const ConstraintSystem& checked,
                const ActivationPattern& pattern, std::size_t position, const SolverConfig& solver)
{
    Attempt a;
    a.outcome.position = position;
    a.outcome.pattern = pattern;
    const auto start = Clock::now();
    try {
        ConstraintSystem ap = ap_constraints(model, pattern);
        ConstraintSystem fwd = forward_constraints(model, pattern);
        ConstraintSystem system = conjoin({&shared, &checked, &ap, &fwd});
        a.outcome.emit_time = Clock::now() - start;
        SolveResult r = solve(system, solver);
        a.outcome.stats = r.stats;
        a.outcome.diagnostic = r.diagnostic;
        a.outcome.status = r.status == SolveStatus::Sat     ? PatternStatus::Sat
                         : r.status == SolveStatus::Unsat   ? PatternStatus::Unsat
                                                            : PatternStatus::Unknown;
        a.result = std::move(r);
    } catch (const Error& e) {
        a.outcome.status = PatternStatus::Error;
        a.outcome.diagnostic = e.what();
    }
    a.outcome.elapsed = Clock::now() - start;
    return a;
}

} // namespace

SearchRun find_solutions(const SdnModel& model, const std::optional<Prototype>& prototype, const SearchConfig& config)
{
    if (!config.boundary)
        throw InvariantError("find_solutions needs a fixed boundary class");
    const std::size_t target = config.target;
    const std::size_t boundary = *config.boundary;

    ConstraintSystem shared = input_constraints(model);
    shared.append(boundary_constraints(model, target, boundary, config.epsilon));
    std::optional<MeaningfulRegion> region;
    if (config.meaningful_enabled) {
        if (!prototype)
            throw InvariantError("meaningful region enabled but no prototype given");
        if (prototype->values.size() != model.input_dim())
            throw ShapeError("prototype has " + std::to_string(prototype->values.size())
                             + " components, model expects " + std::to_string(model.input_dim()));
        region = MeaningfulRegion{prototype->values, config.radius, config.strict_meaningful};
        shared.append(meaningful_constraints(prototype->values, config.radius, config.strict_meaningful));
    }

    SearchRun run;
    SearchReport& report = run.report;
    report.target = target;
    report.boundary = boundary;
    report.epsilon = config.epsilon;
    report.backend = backend_name(config.solver.backend);
    const auto start = Clock::now();

    ConstraintSystem checked;
    auto absorb = [&](Attempt& a) {
        PatternOutcome& o = a.outcome;
        if (o.status == PatternStatus::Sat && run.witnesses.size() < config.max_witnesses) {
            BoundaryWitness w;
            w.target = target;
            w.boundary = boundary;
            w.pattern = o.pattern;
            w.pattern_position = o.position;
            w.epsilon = config.epsilon;
            w.backend = a.result->backend;
            w.assignment = a.result->assignment;
            w.meaningful = region;
            for (std::size_t t = 0; t < model.input_dim(); ++t)
                w.input.push_back(w.assignment.at(VarId::input(static_cast<std::uint32_t>(t))));
            WitnessCheck c = check_witness(model, w);
            if (c.ok) {
                run.witnesses.push_back(std::move(w));
            } else {
                o.status = PatternStatus::Rejected;
                o.diagnostic = c.failures.front();
            }
        }
        const bool examined = o.status == PatternStatus::Sat || o.status == PatternStatus::Unsat
                           || o.status == PatternStatus::Rejected;
        if (examined || (o.status == PatternStatus::Unknown && config.checked_includes_unknown)) {
            checked.add_clause(negate_region(ap_constraints(model, o.pattern)));
            report.checked.push_back(o.pattern);
        }
        report.outcomes.push_back(std::move(o));
    };

    PatternEnumerator patterns(model);
    std::size_t position = 0;
    auto budget_left = [&] { return position < config.pattern_limit && run.witnesses.size() < config.max_witnesses; };

    if (!config.parallel) {
        while (budget_left()) {
            auto p = patterns.next();
            if (!p)
                break;
            Attempt a = attempt(model, shared, checked, *p, position++, config.solver);
            absorb(a);
        }
    } else {
        std::size_t width = config.batch_size;
#ifdef _OPENMP
        if (width == 0)
            width = static_cast<std::size_t>(omp_get_max_threads());
#endif
        width = std::max<std::size_t>(width, 1);
        while (budget_left()) {
            std::vector<ActivationPattern> batch;
            while (batch.size() < width && position + batch.size() < config.pattern_limit) {
                auto p = patterns.next();
                if (!p)
                    break;
                batch.push_back(std::move(*p));
            }
            if (batch.empty())
                break;
            const ConstraintSystem snapshot = checked;
            std::vector<Attempt> results(batch.size());
            const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(dynamic, 1)
            for (std::ptrdiff_t i = 0; i < n; ++i) {
                const auto u = static_cast<std::size_t>(i);
                results[u] = attempt(model, shared, snapshot, batch[u], position + u, config.solver);
            }
            position += batch.size();
            for (auto& a : results)
                absorb(a);
        }
    }
    report.wall = Clock::now() - start;
    return run;
}

SearchRun relax_and_search(const SdnModel& model, const std::optional<Prototype>& prototype,
                           const SearchConfig& config)
{
    if (config.epsilon.sign() < 0)
        throw InvariantError("relaxed boundary needs epsilon >= 0");
    return find_solutions(model, prototype, config);
}

std::vector<std::size_t> boundary_candidates(std::size_t target, std::size_t classes)
{
    std::vector<std::size_t> out;
    if (classes < 2)
        return out;
    const std::size_t adjacent = (target + 1) % classes;
    out.push_back(adjacent);
    for (std::size_t j = 0; j < classes; ++j) {
        if (j != target && j != adjacent)
            out.push_back(j);
    }
    return out;
}

std::vector<BoundaryWitness> TargetRun::witnesses() const
{
    std::vector<BoundaryWitness> out;
    for (const auto& r : runs)
        out.insert(out.end(), r.witnesses.begin(), r.witnesses.end());
    return out;
}

TargetRun find_for_target(const SdnModel& model, const std::vector<Prototype>& prototypes, const SearchConfig& config)
{
    if (config.target >= model.class_count())
        throw ShapeError("target class " + std::to_string(config.target) + " out of range");
    std::vector<std::size_t> candidates =
        config.boundary ? std::vector<std::size_t>{*config.boundary} : boundary_candidates(config.target, model.class_count());

    std::vector<std::optional<Prototype>> sources;
    if (config.meaningful_enabled) {
        for (std::size_t i = 0; i < prototypes.size(); ++i) {
            if (prototypes[i].class_id == config.target)
                sources.emplace_back(prototypes[i]);
        }
        if (sources.empty())
            throw InvariantError("no prototype for class " + std::to_string(config.target));
    } else {
        sources.emplace_back(std::nullopt);
    }

    TargetRun out;
    out.target = config.target;
    for (std::size_t j : candidates) {
        out.pairs_attempted.push_back(j);
        SearchConfig pair = config;
        pair.boundary = j;
        bool found = false;
        for (std::size_t s = 0; s < sources.size(); ++s) {
            SearchRun r = find_solutions(model, sources[s], pair);
            if (config.meaningful_enabled)
                r.report.prototype_index = s;
            found = found || !r.witnesses.empty();
            out.runs.push_back(std::move(r));
        }
        if (found)
            break;
    }
    return out;
}

std::map<std::size_t, TargetRun> find_all_classes(const SdnModel& model, const std::vector<Prototype>& prototypes,
                                                  const SearchConfig& config)
{
    std::map<std::size_t, TargetRun> out;
    for (std::size_t i = 0; i < model.class_count(); ++i) {
        SearchConfig c = config;
        c.target = i;
        out.emplace(i, find_for_target(model, prototypes, c));
    }
    return out;
}

std::string render_report_log(const SearchReport& r)
{
    auto seconds = [](std::chrono::nanoseconds ns) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", std::chrono::duration<double>(ns).count());
        return std::string(buf);
    };
    std::string out = "search target=" + std::to_string(r.target) + " boundary=" + std::to_string(r.boundary)
                    + " epsilon=" + r.epsilon.str() + " backend=" + r.backend;
    if (r.prototype_index)
        out += " prototype=" + std::to_string(*r.prototype_index);
    out += "\n";
    for (const auto& o : r.outcomes) {
        out += "pattern " + std::to_string(o.position) + " " + o.pattern.str() + " " + pattern_status_name(o.status)
             + " " + seconds(o.elapsed) + "s pivots=" + std::to_string(o.stats.pivots)
             + " branches=" + std::to_string(o.stats.branches);
        if (!o.diagnostic.empty())
            out += " note=\"" + o.diagnostic + "\"";
        out += "\n";
    }
    for (const auto& p : r.checked)
        out += "checked " + p.str() + "\n";
    out += "summary sat=" + std::to_string(r.count(PatternStatus::Sat)) + " unsat="
         + std::to_string(r.count(PatternStatus::Unsat)) + " unknown=" + std::to_string(r.count(PatternStatus::Unknown))
         + " error=" + std::to_string(r.count(PatternStatus::Error)) + " rejected="
         + std::to_string(r.count(PatternStatus::Rejected)) + " wall=" + seconds(r.wall) + "s\n";
    return out;
}

} // namespace sdnv
