#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "sdesym/error.hpp"

namespace sdesym::cli {

using nlohmann::json;

namespace {

std::string error_type(const std::exception& e)
{
    if (dynamic_cast<const InputError*>(&e)) return "input";
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const ModelError*>(&e)) return "model";
    if (dynamic_cast<const HypothesisError*>(&e)) return "hypothesis";
    if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
    if (dynamic_cast<const NotElementary*>(&e)) return "not_elementary";
    if (dynamic_cast<const SamplingError*>(&e)) return "sampling";
    return "internal";
}

std::string quote(const std::string& s)
{
    if (!s.empty() && s.find_first_of(" \t\"'$\\*?") == std::string::npos) return s;
    std::string out = "'";
    for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return out + "'";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    CLI::App app{"Lie-point symmetries of stochastic differential equations", "sdesym"};
    app.set_help_flag("--help", "print this help message and exit");
    app.fallthrough();
    app.require_subcommand(1);

    Options o;
    std::string model_path;
    std::string report_path;
    app.add_option("--candidate", o.candidates, "candidate name(s)")->delimiter(',');
    app.add_option("--tol", o.tol, "relative equivalence tolerance");
    app.add_option("--numeric-samples", o.numeric_samples, "points for the max-residual estimate");
    app.add_option("--seed", o.seed, "seed for sampling and simulation")->envname("SDESYM_SEED");
    app.add_option("--h", o.h, "step size");
    app.add_option("--t0", o.t0, "start time");
    app.add_option("--t1", o.t1, "end time");
    app.add_option("--x0", o.x0, "initial state, comma separated")->delimiter(',');
    app.add_option("--paths", o.paths, "number of paths");
    app.add_option("--scheme", o.scheme, "euler-maruyama or heun");
    app.add_option("--beta", o.beta, "ansatz name or b=...,c=...");
    app.add_option("--phi", o.phi, "map name or expression");
    app.add_option("--coords", o.coords, "adapted coordinates for system reduction");
    app.add_option("--to", o.to, "ito or stratonovich");
    app.add_option("--out", o.out, "output file (CSV or model)");
    app.add_option("--bound", o.bound, "pathwise median error bound");
    app.add_option("--report", report_path, "write the JSON report here instead of stdout");

    const std::pair<const char*, const char*> commands[] = {
        {"check", "verify candidate symmetries"},
        {"convert", "convert between Ito and Stratonovich"},
        {"reduce", "reduce by a symmetry or a map"},
        {"simulate", "simulate paths"},
        {"verify", "reduce and check numerically"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help)->add_option("model", model_path, "model file")->required();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int code = app.exit(e, msg, msg);
        (code == 0 ? out : err) << msg.str();
        return code == 0 ? Success : InputFailure;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    const bool seed_from_flag =
        std::find(args.begin(), args.end(), "--seed") != args.end() ||
        std::any_of(args.begin(), args.end(), [](const std::string& a) { return a.rfind("--seed=", 0) == 0; });

    json report;
    std::string line = "sdesym";
    for (const auto& a : args) line += " " + quote(a);
    report["command"] = {{"name", command}, {"argv", args}, {"line", line}};
    if (o.seed) report["command"]["seed"] = {{"value", *o.seed}, {"source", seed_from_flag ? "flag" : "env"}};

    int code = Success;
    try {
        std::ifstream in(model_path, std::ios::binary);
        if (!in) throw InputError("cannot open model file '" + model_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        report["model"] = {{"path", model_path}, {"hash", fnv1a64(text)}};
        const auto model = load_model(text);
        Outcome outcome;
        if (command == "check") outcome = cmd_check(model, o);
        else if (command == "convert") outcome = cmd_convert(model, o);
        else if (command == "reduce") outcome = cmd_reduce(model, o);
        else if (command == "simulate") outcome = cmd_simulate(model, o);
        else outcome = cmd_verify(model, o);
        json notes = json(model.notes);
        if (outcome.report.contains("notes")) {
            for (const auto& n : outcome.report["notes"]) notes.push_back(n);
            outcome.report.erase("notes");
        }
        report.update(outcome.report);
        report["notes"] = notes;
        code = outcome.exit_code;
    } catch (const std::exception& e) {
        const std::string type = error_type(e);
        report["error"] = {{"type", type}, {"message", e.what()}};
        if (const auto* h = dynamic_cast<const HypothesisError*>(&e)) report["error"]["hypothesis"] = h->hypothesis();
        code = (type == "input" || type == "parse" || type == "model") ? InputFailure : VerificationFailure;
        err << "sdesym: " << e.what() << "\n";
    }
    report["exit_code"] = code;
    report["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!report_path.empty()) {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) {
            err << "sdesym: cannot write report '" << report_path << "'\n";
            return InputFailure;
        }
        f << report.dump(2) << "\n";
    } else {
        out << report.dump(2) << "\n";
    }
    return code;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace sdesym::cli
