/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

// sdnv: command-line driver for sliding door network verification.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdnv/constraints.hpp"
#include "sdnv/errors.hpp"
#include "sdnv/io.hpp"
#include "sdnv/patterns.hpp"
#include "sdnv/prototypes.hpp"
#include "sdnv/search.hpp"
#include "sdnv/solver.hpp"

namespace fs = std::filesystem;
using namespace sdnv;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational parse_rational(const std::string& text, const char* what)
{
    try {
        return Rational::parse(text);
    } catch (const ParseError& e) {
        throw UsageError(std::string(what) + ": " + e.what());
    }
}

std::vector<std::string> split_words(const std::string& text)
{
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

struct SolverOptions {
    std::string backend = "builtin";
    std::string command = "z3 -in";
    long timeout_ms = 30000;

    void attach(CLI::App* app)
    {
        app->add_option("--backend", backend, "builtin or external")
            ->check(CLI::IsMember({"builtin", "external"}))
            ->capture_default_str();
        app->add_option("--solver", command, "external solver command; \"{}\" stands for a temp file")
            ->capture_default_str();
        app->add_option("--timeout-ms", timeout_ms, "per-solve timeout in milliseconds")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    SolverConfig config() const
    {
        SolverConfig c;
        c.backend = backend == "external" ? Backend::External : Backend::Builtin;
        c.external_command = split_words(command);
        if (c.external_command.empty())
            throw UsageError("--solver: empty command");
        c.timeout = std::chrono::milliseconds(timeout_ms);
        return c;
    }
};

// ---------------------------------------------------------------------------

int run_count(const std::string& model_path)
{
    SdnModel model = load_model(model_path);
    auto groups = group_counts(model);
    std::cout << count_patterns(groups).get_str() << " valid patterns (bound " << pattern_bound(groups).get_str()
              << ")\n";
    return kOk;
}

int run_enumerate(const std::string& model_path, std::size_t limit)
{
    SdnModel model = load_model(model_path);
    PatternEnumerator it(model);
    std::size_t n = 0;
    while (n < limit) {
        auto p = it.next();
        if (!p)
            break;
        std::cout << n++ << " " << p->str() << "\n";
    }
    return kOk;
}

struct SolveRegionArgs {
    std::string model;
    std::string pattern;
    std::vector<std::size_t> pair;
    std::string epsilon = "0";
    bool emit = false;
    SolverOptions solver;
};

int run_solve_region(const SolveRegionArgs& a)
{
    SdnModel model = load_model(a.model);
    ActivationPattern pattern = ActivationPattern::parse(a.pattern);
    if (!is_valid(pattern, model))
        throw UsageError("pattern " + a.pattern + " is not valid for this model");
    ConstraintSystem in = input_constraints(model);
    ConstraintSystem ap = ap_constraints(model, pattern);
    ConstraintSystem fw = forward_constraints(model, pattern);
    ConstraintSystem system = conjoin({&in, &ap, &fw});
    if (!a.pair.empty()) {
        if (a.pair.size() != 2)
            throw UsageError("--pair expects i,j");
        system.append(boundary_constraints(model, a.pair[0], a.pair[1], parse_rational(a.epsilon, "--epsilon")));
    }
    SolverConfig config = a.solver.config();
    if (a.emit) {
        std::cout << emit_smtlib(system, config.preamble_options);
        return kOk;
    }
    SolveResult r = solve(system, config);
    std::cout << status_name(r.status) << "\n";
    if (!r.diagnostic.empty())
        std::cerr << "note: " << r.diagnostic << "\n";
    if (r.status != SolveStatus::Sat)
        return kFailed;
    for (const auto& [v, value] : r.assignment)
        std::cout << v.name() << " = " << value.str() << "\n";
    return kOk;
}

struct SearchArgs {
    std::string model;
    std::string target = "all";
    std::string boundary = "auto";
    std::string prototype;
    std::string radius = "0.2";
    std::string epsilon;
    bool non_strict = false;
    std::string out = "sdnv-out";
    std::size_t max_witnesses = std::numeric_limits<std::size_t>::max();
    std::size_t pattern_limit = std::numeric_limits<std::size_t>::max();
    bool parallel = false;
    bool checked_includes_unknown = false;
    SolverOptions solver;
};

std::size_t parse_class(const std::string& text, const char* what)
{
    try {
        std::size_t used = 0;
        unsigned long v = std::stoul(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(what) + ": expected a class index, got \"" + text + "\"");
}

std::optional<std::size_t> square_side(std::size_t d)
{
    auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(d))));
    for (std::size_t c = s > 0 ? s - 1 : 0; c <= s + 1; ++c)
        if (c * c == d)
            return c;
    return std::nullopt;
}

int run_search(const SearchArgs& a, bool relaxed)
{
    SdnModel model = load_model(a.model);
    SearchConfig config;
    config.epsilon = parse_rational(relaxed ? a.epsilon : "0", "--epsilon");
    if (relaxed && config.epsilon.sign() < 0)
        throw UsageError("--epsilon must be >= 0");
    config.radius = parse_rational(a.radius, "--radius");
    if (config.radius.sign() <= 0)
        throw UsageError("--radius must be > 0");
    config.strict_meaningful = !a.non_strict;
    config.max_witnesses = a.max_witnesses;
    config.pattern_limit = a.pattern_limit;
    config.parallel = a.parallel;
    config.checked_includes_unknown = a.checked_includes_unknown;
    config.solver = a.solver.config();

    std::vector<Prototype> prototypes;
    config.meaningful_enabled = !a.prototype.empty();
    if (config.meaningful_enabled) {
        prototypes = load_prototypes(a.prototype);
        for (const auto& p : prototypes)
            if (p.values.size() != model.input_dim())
                throw UsageError("prototype dimension " + std::to_string(p.values.size()) + " does not match model input "
                                 + std::to_string(model.input_dim()));
    }
    if (a.boundary != "auto")
        config.boundary = parse_class(a.boundary, "--boundary");

    std::vector<std::size_t> targets;
    if (a.target == "all") {
        for (std::size_t i = 0; i < model.class_count(); ++i)
            targets.push_back(i);
    } else {
        targets.push_back(parse_class(a.target, "--target"));
    }
    for (std::size_t t : targets) {
        if (t >= model.class_count())
            throw UsageError("--target " + std::to_string(t) + " out of range (K=" + std::to_string(model.class_count()) + ")");
        if (config.boundary && (*config.boundary >= model.class_count() || *config.boundary == t))
            throw UsageError("--boundary must be a different class in range");
    }

    fs::create_directories(a.out);
    std::string log;
    std::vector<SearchReport> reports;
    nlohmann::ordered_json witness_index = nlohmann::ordered_json::array();
    auto side = square_side(model.input_dim());
    std::size_t total = 0;
    bool any_failure = false;

    for (std::size_t t : targets) {
        SearchConfig c = config;
        c.target = t;
        TargetRun run = find_for_target(model, prototypes, c);
        std::size_t serial = 0;
        for (const auto& sr : run.runs) {
            const SearchReport& r = sr.report;
            std::cout << "pair " << r.target << " " << r.boundary;
            if (r.prototype_index)
                std::cout << " prototype " << *r.prototype_index;
            std::cout << ": witnesses=" << sr.witnesses.size() << " sat=" << r.count(PatternStatus::Sat)
                      << " unsat=" << r.count(PatternStatus::Unsat) << " unknown=" << r.count(PatternStatus::Unknown)
                      << " error=" << r.count(PatternStatus::Error) << " rejected=" << r.count(PatternStatus::Rejected)
                      << "\n";
            any_failure = any_failure || r.count(PatternStatus::Error) || r.count(PatternStatus::Rejected);
            log += render_report_log(r);
            reports.push_back(r);
            for (const auto& w : sr.witnesses) {
                std::string stem = "witness_" + std::to_string(w.target) + "_" + std::to_string(w.boundary) + "_"
                                 + std::to_string(serial++);
                save_witness(w, fs::path(a.out) / (stem + ".json"));
                if (side)
                    write_pgm(w.input, *side, *side, fs::path(a.out) / (stem + ".pgm"));
                witness_index.push_back(stem + ".json");
                ++total;
            }
        }
        if (run.witnesses().empty())
            std::cout << "target " << t << ": no witness\n";
    }

    write_file_atomic(fs::path(a.out) / "report.log", log);
    write_file_atomic(fs::path(a.out) / "summary.json", render_report_summary(reports));

    nlohmann::ordered_json m;
    m["command"] = relaxed ? "adversarial" : "boundary";
    m["model"] = a.model;
    m["prototypes"] = a.prototype.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(a.prototype);
    m["output"] = a.out;
    m["seed"] = nullptr;
    nlohmann::ordered_json s;
    s["targets"] = targets;
    s["boundary"] = a.boundary;
    s["epsilon"] = config.epsilon.str();
    s["meaningful"] = config.meaningful_enabled;
    s["radius"] = config.radius.str();
    s["strict_meaningful"] = config.strict_meaningful;
    s["max_witnesses"] = a.max_witnesses == std::numeric_limits<std::size_t>::max()
                           ? nlohmann::ordered_json(nullptr)
                           : nlohmann::ordered_json(a.max_witnesses);
    s["pattern_limit"] = a.pattern_limit == std::numeric_limits<std::size_t>::max()
                           ? nlohmann::ordered_json(nullptr)
                           : nlohmann::ordered_json(a.pattern_limit);
    s["parallel"] = config.parallel;
    s["checked_includes_unknown"] = config.checked_includes_unknown;
    m["search"] = std::move(s);
    nlohmann::ordered_json so;
    so["backend"] = backend_name(config.solver.backend);
    so["command"] = config.solver.external_command;
    so["timeout_ms"] = config.solver.timeout.count();
    m["solver"] = std::move(so);
    m["witnesses"] = std::move(witness_index);
    write_file_atomic(fs::path(a.out) / "manifest.json", m.dump(1) + "\n");

    std::cout << total << " witness(es) written to " << a.out << "\n";
    return any_failure ? kFailed : kOk;
}

struct PrototypeArgs {
    std::string dataset;
    std::string labels;
    std::size_t limit = std::numeric_limits<std::size_t>::max();
    std::size_t kmeans = 0;
    std::uint64_t seed = 0;
    std::size_t max_iters = 100;
    std::string out = "prototypes.txt";
    std::string pgm_dir;
};

int run_prototype(const PrototypeArgs& a)
{
    DatasetSlice slice = load_idx(a.dataset, a.labels, a.limit);
    if (slice.images.empty())
        throw UsageError("dataset slice is empty");
    std::size_t classes = 0;
    for (auto l : slice.labels)
        classes = std::max<std::size_t>(classes, l + 1u);
    std::vector<std::vector<Point>> by_class(classes);
    for (std::size_t i = 0; i < slice.images.size(); ++i)
        by_class[slice.labels[i]].push_back(slice.images[i]);

    std::vector<Prototype> prototypes;
    if (a.kmeans > 0) {
        for (std::size_t c = 0; c < classes; ++c)
            if (by_class[c].size() < a.kmeans)
                throw UsageError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size())
                                 + " samples, fewer than --kmeans " + std::to_string(a.kmeans));
        prototypes = cluster_prototypes(by_class, a.kmeans, a.seed, a.max_iters);
    } else {
        for (std::size_t c = 0; c < classes; ++c)
            if (!by_class[c].empty())
                prototypes.push_back(class_mean_prototype(by_class[c], c));
    }
    save_prototypes(prototypes, a.out);
    if (!a.pgm_dir.empty()) {
        fs::create_directories(a.pgm_dir);
        for (std::size_t i = 0; i < prototypes.size(); ++i) {
            const auto& p = prototypes[i];
            std::string stem = "prototype_" + std::to_string(p.class_id) + "_" + std::to_string(i) + ".pgm";
            write_pgm(p.values, slice.cols, slice.rows, fs::path(a.pgm_dir) / stem);
        }
    }
    std::cout << prototypes.size() << " prototype(s) from " << slice.images.size() << " image(s) written to " << a.out
              << "\n";
    return kOk;
}

int run_check(const std::string& witness_path, const std::string& model_path)
{
    SdnModel model = load_model(model_path);
    BoundaryWitness w = load_witness(witness_path);
    WitnessCheck c = check_witness(model, w);
    if (c.ok) {
        std::cout << "ok: class " << w.target << " / " << w.boundary << " boundary witness verified\n";
        return kOk;
    }
    for (const auto& f : c.failures)
        std::cout << "fail: " << f << "\n";
    return kFailed;
}

void add_search_options(CLI::App* cmd, SearchArgs& a)
{
    cmd->add_option("--model", a.model, "model document")->required()->check(CLI::ExistingFile);
    cmd->add_option("--target", a.target, "target class index, or \"all\"")->capture_default_str();
    cmd->add_option("--boundary", a.boundary, "boundary class index, or \"auto\"")->capture_default_str();
    cmd->add_option("--prototype", a.prototype, "prototype file; enables meaningful regions")
        ->check(CLI::ExistingFile);
    cmd->add_option("--radius", a.radius, "meaningful region radius")->capture_default_str();
    cmd->add_flag("--non-strict", a.non_strict, "use closed meaningful boxes");
    cmd->add_option("--out", a.out, "output directory")->capture_default_str();
    cmd->add_option("--max-witnesses", a.max_witnesses, "stop a pair after this many witnesses");
    cmd->add_option("--pattern-limit", a.pattern_limit, "examine at most this many patterns per pair");
    cmd->add_flag("--parallel", a.parallel, "solve pattern batches concurrently");
    cmd->add_flag("--checked-includes-unknown", a.checked_includes_unknown,
                  "exclude timed-out patterns from later solves too");
    a.solver.attach(cmd);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sdnv: sliding door network verification toolkit"};
    app.require_subcommand(1);

    std::string model_path;
    auto* count = app.add_subcommand("count", "count valid activation patterns");
    count->add_option("--model", model_path, "model document")->required()->check(CLI::ExistingFile);

    std::size_t limit = std::numeric_limits<std::size_t>::max();
    auto* enumerate = app.add_subcommand("enumerate", "list valid activation patterns in canonical order");
    enumerate->add_option("--model", model_path, "model document")->required()->check(CLI::ExistingFile);
    enumerate->add_option("--limit", limit, "stop after n patterns");

    SolveRegionArgs region;
    auto* solve_region = app.add_subcommand("solve-region", "solve one activation region");
    solve_region->add_option("--model", region.model, "model document")->required()->check(CLI::ExistingFile);
    solve_region->add_option("--pattern", region.pattern, "pattern, e.g. A0I1/A2I2")->required();
    solve_region->add_option("--pair", region.pair, "boundary classes i,j")->delimiter(',')->expected(2);
    solve_region->add_option("--epsilon", region.epsilon, "boundary offset")->capture_default_str();
    solve_region->add_flag("--emit", region.emit, "print the SMT-LIB2 document instead of solving");
    region.solver.attach(solve_region);

    SearchArgs boundary_args;
    auto* boundary = app.add_subcommand("boundary", "search exact decision-boundary witnesses");
    add_search_options(boundary, boundary_args);

    SearchArgs adversarial_args;
    adversarial_args.epsilon = "1/100";
    auto* adversarial = app.add_subcommand("adversarial", "search relaxed boundary witnesses y_i = y_j - epsilon");
    add_search_options(adversarial, adversarial_args);
    adversarial->add_option("--epsilon", adversarial_args.epsilon, "relaxation")->capture_default_str();

    PrototypeArgs proto;
    auto* prototype = app.add_subcommand("prototype", "derive class prototypes from an IDX dataset");
    prototype->add_option("--dataset", proto.dataset, "IDX image file")->required()->check(CLI::ExistingFile);
    prototype->add_option("--labels", proto.labels, "IDX label file")->required()->check(CLI::ExistingFile);
    prototype->add_option("--limit", proto.limit, "read at most n records");
    prototype->add_option("--kmeans", proto.kmeans, "k-means clusters per class (0: class mean)");
    prototype->add_option("--seed", proto.seed, "k-means seed")->capture_default_str();
    prototype->add_option("--max-iters", proto.max_iters, "k-means iteration cap")->capture_default_str();
    prototype->add_option("--out", proto.out, "prototype file")->capture_default_str();
    prototype->add_option("--pgm-dir", proto.pgm_dir, "also render prototypes as PGM images here");

    std::string witness_path;
    auto* check = app.add_subcommand("check", "re-verify a stored witness with exact arithmetic");
    check->add_option("--witness", witness_path, "witness document")->required()->check(CLI::ExistingFile);
    check->add_option("--model", model_path, "model document")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*count)
            return run_count(model_path);
        if (*enumerate)
            return run_enumerate(model_path, limit);
        if (*solve_region)
            return run_solve_region(region);
        if (*boundary)
            return run_search(boundary_args, false);
        if (*adversarial)
            return run_search(adversarial_args, true);
        if (*prototype)
            return run_prototype(proto);
        if (*check)
            return run_check(witness_path, model_path);
    } catch (const UsageError& e) {
        std::cerr << "sdnv: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "sdnv: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "sdnv: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
