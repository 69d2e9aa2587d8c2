#include "projdyn/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

using projdyn::cli::json;

struct Options {
    std::string payload;
    std::string input;
    std::int64_t seed = 0;
    // decompose
    std::string degree;
    std::string kase;
    // simulate
    std::string matrix;
    std::string steps;
    bool compare = false;
    std::string csv;
};

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

int emit(const projdyn::cli::JobResult& r) {
    std::cout << r.output.dump(2) << '\n';
    return r.exit_code;
}

int malformed(const std::string& detail) { return emit({projdyn::cli::error_json("malformed_input", detail), 1}); }

int run_batch() {
    int worst = 0;
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto r = projdyn::cli::run_line(line);
        worst = std::max(worst, r.exit_code);
        std::cout << json{{"exit_code", r.exit_code}, {"output", r.output}}.dump() << '\n';
    }
    return worst;
}

// Payload from --payload, --input, or stdin; flag values are merged on top.
int run_command(const std::string& command, const Options& o, bool have_seed) {
    json payload = json::object();
    const bool flags_only = command == "simulate" && !o.matrix.empty();
    try {
        if (!o.payload.empty()) {
            payload = json::parse(o.payload);
        } else if (!o.input.empty()) {
            std::ifstream f(o.input);
            if (!f) return malformed("cannot read " + o.input);
            payload = json::parse(slurp(f));
        } else if (!flags_only) {
            payload = json::parse(slurp(std::cin));
        }
        if (command == "decompose") {
            if (!o.degree.empty()) payload["degree"] = o.degree;
            if (!o.kase.empty()) payload["case"] = o.kase;
        }
        if (command == "simulate") {
            if (!o.matrix.empty()) payload["matrix"] = json::parse(o.matrix);
            if (!o.steps.empty()) payload["steps"] = o.steps;
            if (o.compare) payload["compare"] = true;
        }
    } catch (const json::exception& e) {
        return malformed(e.what());
    }
    projdyn::cli::JobRequest job{command, payload, std::nullopt};
    if (have_seed) job.seed = o.seed;
    const auto r = projdyn::cli::run(job);
    if (r.exit_code == 0 && command == "simulate" && !o.csv.empty()) {
        std::ofstream f(o.csv);
        if (!f) return malformed("cannot write " + o.csv);
        f << "step,degree\n";
        std::size_t step = 1;
        for (const auto& d : r.output["degrees"]) f << step++ << ',' << d.get<std::string>() << '\n';
    }
    return emit(r);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact normal forms, symmetric-power decompositions and growth of projective automorphisms"};
    app.set_version_flag("--version", std::string(PROJDYN_VERSION));
    std::string schema;
    bool batch = false;
    app.add_option("--schema", schema, "Print the payload and result JSON schemas of a command");
    app.add_flag("--batch", batch, "Read JSON-lines jobs {command, payload, seed} from stdin");

    const std::map<std::string, std::string> about{
        {"relations", "Multiplicative relation lattice and independence partition of eigenvalues"},
        {"normal-form", "Normal form of a projective automorphism from a matrix or Jordan data"},
        {"growth", "Degree growth class predicted from the spectrum"},
        {"decompose", "Weight decomposition of degree-d forms and invariant-subspace structure"},
        {"cone", "Cone certificate for an invariant linear system"},
        {"simulate", "Degree sequence of a monomial map, compared with the prediction"}};
    Options o;
    std::map<std::string, CLI::App*> subs;
    for (const auto& name : projdyn::cli::commands()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--payload", o.payload, "Payload JSON text");
        sub->add_option("--input", o.input, "File holding the payload JSON");
        sub->add_option("--seed", o.seed, "Seed for randomized generators");
        subs[name] = sub;
    }
    subs["decompose"]->add_option("--degree", o.degree, "Degree of the forms");
    subs["decompose"]->add_option("--case", o.kase, "m1 or m2")->check(CLI::IsMember({"m1", "m2"}));
    subs["simulate"]->add_option("--matrix", o.matrix, "Integer matrix as JSON");
    subs["simulate"]->add_option("--steps", o.steps, "Number of iterates");
    subs["simulate"]->add_flag("--compare", o.compare, "Compare with the predicted growth class");
    subs["simulate"]->add_option("--csv", o.csv, "Write step,degree rows to this file");
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (!schema.empty()) {
        try {
            std::cout << projdyn::cli::schema_for(schema).dump(2) << '\n';
            return 0;
        } catch (const projdyn::cli::MalformedInput& e) {
            return malformed(e.what());
        }
    }
    if (batch) return run_batch();
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) return run_command(name, o, sub->count("--seed") > 0);
    std::cerr << app.help();
    return 1;
}
