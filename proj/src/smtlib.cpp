/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "sdnv/errors.hpp"
#include "sdnv/solver.hpp"
#include "sdnv/subprocess.hpp"

namespace sdnv {

const char* status_name(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Unknown: return "unknown";
    }
    return "?";
}

const char* backend_name(Backend b) { return b == Backend::Builtin ? "builtin" : "external"; }

bool check_assignment(const ConstraintSystem& system, const Assignment& assignment)
{
    for (const auto& atom : system.conjuncts()) {
        if (!atom.holds(assignment))
            return false;
    }
    for (const auto& clause : system.clauses()) {
        bool any = false;
        for (const auto& lit : clause) {
            if (lit.holds(assignment)) {
                any = true;
                break;
            }
        }
        if (!any)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Emission

std::string smt_rational(const Rational& r)
{
    const Rational a = r.abs();
    std::string body = a.is_integer() ? a.str()
                                      : "(/ " + a.numerator().get_str() + " " + a.denominator().get_str() + ")";
    return r.sign() < 0 ? "(- " + body + ")" : body;
}

namespace {

std::string quoted(const VarId& v) { return "|" + v.name() + "|"; }

std::string smt_expr(const LinearExpr& e)
{
    if (e.is_constant())
        return smt_rational(e.constant());
    std::string out = "(+";
    for (const auto& [v, c] : e.terms())
        out += " (* " + smt_rational(c) + " " + quoted(v) + ")";
    out += " " + smt_rational(e.constant()) + ")";
    return out;
}

std::string smt_atom(const Atom& a) { return std::string("(") + relation_symbol(a.rel) + " " + smt_expr(a.lhs) + " 0)"; }

} // namespace

std::string emit_smtlib(const ConstraintSystem& system, std::span<const std::string> options)
{
    std::string out = "(set-logic QF_LRA)\n";
    for (const auto& opt : options)
        out += opt.starts_with("(") ? opt + "\n" : "(set-option " + opt + ")\n";
    for (const auto& v : system.variables())
        out += "(declare-const " + quoted(v) + " Real)\n";
    for (const auto& a : system.conjuncts())
        out += "(assert " + smt_atom(a) + ")\n";
    for (const auto& clause : system.clauses()) {
        if (clause.empty()) {
            out += "(assert false)\n";
            continue;
        }
        out += "(assert (or";
        for (const auto& lit : clause)
            out += " " + smt_atom(lit);
        out += "))\n";
    }
    out += "(check-sat)\n";
    if (!system.variables().empty()) {
        out += "(get-value (";
        bool first = true;
        for (const auto& v : system.variables()) {
            out += (first ? "" : " ") + quoted(v);
            first = false;
        }
        out += "))\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Response parsing

namespace {

struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;

    std::string str() const
    {
        if (!is_list)
            return atom;
        std::string s = "(";
        for (std::size_t i = 0; i < items.size(); ++i)
            s += (i ? " " : "") + items[i].str();
        return s + ")";
    }
};

class SExprReader {
public:
    explicit SExprReader(std::string_view text) : text_(text) {}

    bool at_end()
    {
        skip_space();
        return pos_ >= text_.size();
    }

    SExpr read()
    {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            SExpr list;
            list.is_list = true;
            while (true) {
                skip_space();
                if (pos_ >= text_.size())
                    fail("unterminated list");
                if (text_[pos_] == ')') {
                    ++pos_;
                    return list;
                }
                list.items.push_back(read());
            }
        }
        if (c == ')')
            fail("unbalanced ')'");
        SExpr a;
        if (c == '|') {
            auto end = text_.find('|', pos_ + 1);
            if (end == std::string_view::npos)
                fail("unterminated quoted symbol");
            a.atom = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
            pos_ = end + 1;
            return a;
        }
        if (c == '"') {
            std::size_t end = pos_ + 1;
            while (end < text_.size()) {
                if (text_[end] == '"') {
                    if (end + 1 < text_.size() && text_[end + 1] == '"') {
                        end += 2;
                        continue;
                    }
                    break;
                }
                ++end;
            }
            if (end >= text_.size())
                fail("unterminated string");
            a.atom = std::string(text_.substr(pos_, end - pos_ + 1));
            pos_ = end + 1;
            return a;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '('
               && text_[pos_] != ')')
            ++pos_;
        a.atom = std::string(text_.substr(start, pos_ - start));
        return a;
    }

private:
    void skip_space()
    {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        auto frag = text_.substr(pos_ > 20 ? pos_ - 20 : 0, 40);
        throw ProtocolError("malformed solver output (" + what + ") near \"" + std::string(frag) + "\"");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

Rational eval_value(const SExpr& e)
{
    if (!e.is_list) {
        try {
            return Rational::from_decimal(e.atom);
        } catch (const ParseError&) {
            throw ProtocolError("unparseable value \"" + e.atom + "\"");
        }
    }
    if (e.items.empty() || e.items[0].is_list)
        throw ProtocolError("unparseable value " + e.str());
    const std::string& op = e.items[0].atom;
    std::vector<Rational> args;
    for (std::size_t i = 1; i < e.items.size(); ++i)
        args.push_back(eval_value(e.items[i]));
    if (args.empty())
        throw ProtocolError("operator without arguments in " + e.str());
    if (op == "-") {
        if (args.size() == 1)
            return -args[0];
        Rational r = args[0];
        for (std::size_t i = 1; i < args.size(); ++i)
            r -= args[i];
        return r;
    }
    if (op == "+" || op == "*") {
        Rational r = args[0];
        for (std::size_t i = 1; i < args.size(); ++i)
            r = op == "+" ? r + args[i] : r * args[i];
        return r;
    }
    if (op == "/") {
        Rational r = args[0];
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (args[i].is_zero())
                throw ProtocolError("division by zero in " + e.str());
            r /= args[i];
        }
        return r;
    }
    throw ProtocolError("unsupported operator in value " + e.str());
}

} // namespace

SolveResult parse_smt_response(std::string_view text)
{
    SolveResult result;
    result.backend = backend_name(Backend::External);
    SExprReader reader(text);

    std::optional<SolveStatus> status;
    while (!status) {
        if (reader.at_end())
            throw ProtocolError("solver output has no check-sat answer: \"" + std::string(text.substr(0, 80)) + "\"");
        SExpr e = reader.read();
        if (e.is_list) {
            if (!e.items.empty() && !e.items[0].is_list && e.items[0].atom == "error")
                throw ProtocolError("solver reported " + e.str());
            throw ProtocolError("unexpected fragment before check-sat answer: " + e.str());
        }
        if (e.atom == "sat")
            status = SolveStatus::Sat;
        else if (e.atom == "unsat")
            status = SolveStatus::Unsat;
        else if (e.atom == "unknown" || e.atom == "timeout")
            status = SolveStatus::Unknown;
        else if (e.atom != "success")
            throw ProtocolError("unexpected token \"" + e.atom + "\" in solver output");
    }
    result.status = *status;
    if (result.status != SolveStatus::Sat)
        return result;

    while (!reader.at_end()) {
        SExpr e = reader.read();
        if (!e.is_list)
            throw ProtocolError("unexpected token \"" + e.atom + "\" after sat");
        if (!e.items.empty() && !e.items[0].is_list && e.items[0].atom == "error")
            throw ProtocolError("solver reported " + e.str());
        for (const auto& binding : e.items) {
            if (!binding.is_list || binding.items.size() != 2 || binding.items[0].is_list)
                throw ProtocolError("malformed get-value binding " + binding.str());
            auto var = VarId::parse(binding.items[0].atom);
            if (!var)
                throw ProtocolError("unknown variable \"" + binding.items[0].atom + "\" in get-value output");
            result.assignment[*var] = eval_value(binding.items[1]);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// External backend

namespace {

class TempFile {
public:
    explicit TempFile(const std::string& contents)
    {
        auto dir = std::filesystem::temp_directory_path();
        std::string templ = (dir / "sdnv-XXXXXX.smt2").string();
        int fd = ::mkstemps(templ.data(), 5);
        if (fd < 0)
            throw IoError("cannot create temporary file in " + dir.string());
        ::close(fd);
        path_ = templ;
        std::ofstream(path_, std::ios::binary) << contents;
    }
    ~TempFile()
    {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace

SolveResult solve_external(const ConstraintSystem& system, const SolverConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    const std::string doc = emit_smtlib(system, config.preamble_options);

    std::vector<std::string> argv = config.external_command;
    std::optional<TempFile> file;
    std::string stdin_doc = doc;
    for (auto& a : argv) {
        if (a == "{}") {
            if (!file)
                file.emplace(doc);
            a = file->path();
            stdin_doc.clear();
        }
    }

    ProcessResult proc = run_process(argv, stdin_doc, config.timeout);
    SolveResult result;
    if (!proc.started) {
        result.status = SolveStatus::Unknown;
        result.diagnostic = proc.err.empty() ? "external solver failed to start" : proc.err;
    } else if (proc.timed_out) {
        result.status = SolveStatus::Unknown;
        result.diagnostic = "timeout after " + std::to_string(config.timeout.count()) + " ms";
    } else if (proc.out.find_first_not_of(" \t\r\n") == std::string::npos) {
        result.status = SolveStatus::Unknown;
        result.diagnostic = "external solver exited with code " + std::to_string(proc.exit_code)
                            + " and no output: " + proc.err.substr(0, 200);
    } else {
        result = parse_smt_response(proc.out);
        if (result.status == SolveStatus::Sat) {
            for (const auto& v : system.variables()) {
                if (!result.assignment.contains(v))
                    throw ProtocolError("external solver returned no value for " + v.name());
            }
            if (!check_assignment(system, result.assignment))
                throw ProtocolError("external solver model fails exact checking");
        }
    }
    result.backend = backend_name(Backend::External);
    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
}

SolveResult solve(const ConstraintSystem& system, const SolverConfig& config)
{
    if (config.timeout.count() <= 0)
        throw InvariantError("solver timeout must be positive");
    return config.backend == Backend::Builtin ? solve_builtin(system, config) : solve_external(system, config);
}

bool external_solver_available(const SolverConfig& config)
{
    if (config.external_command.empty())
        return false;
    SolverConfig probe = config;
    probe.timeout = std::chrono::milliseconds(10000);
    try {
        return solve_external(ConstraintSystem{}, probe).status == SolveStatus::Sat;
    } catch (const Error&) {
        return false;
    }
}

} // namespace sdnv
