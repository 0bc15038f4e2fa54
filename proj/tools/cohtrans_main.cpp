// cohtrans: synthesize and verify deterministic coherent-state
// transformations. Reads a JSON job document, writes a JSON report.
//
//   cohtrans <command> --input <path> [--output <path>] [--d-prime N]
//            [--tolerance T] [--enumerate-all] [--seed S]
//
// "-" selects standard input/output. Exit codes: 0 success, 2 parse error,
// 3 majorization violated, 4 no feasible SP, 5 no intermediate found,
// 6 internal verification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cohtrans/job.hpp"

namespace {

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw cohtrans::ParseError("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_all(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw cohtrans::ParseError("cannot open output file: " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic coherent-state transformation synthesizer"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output = "-";
    std::optional<int> d_prime;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
    bool enumerate_all = false;

    const std::pair<const char*, cohtrans::job::Command> commands[] = {
        {"check", cohtrans::job::Command::check},
        {"synthesize", cohtrans::job::Command::synthesize},
        {"sequence", cohtrans::job::Command::sequence},
        {"locc", cohtrans::job::Command::locc},
        {"verify", cohtrans::job::Command::verify},
    };
    for (const auto& [name, cmd] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--input,-i", input, "job document path, - for stdin");
        sub->add_option("--output,-o", output, "report path, - for stdout");
        sub->add_option("--d-prime", d_prime, "subspace dimension for sequence");
        sub->add_option("--tolerance", tolerance, "majorization/tie tolerance");
        sub->add_option("--seed", seed, "seed echoed into the report");
        sub->add_flag("--enumerate-all", enumerate_all, "report all feasible SPs");
        (void)cmd;
    }
    CLI11_PARSE(app, argc, argv);

    cohtrans::job::Command command{};
    for (const auto& [name, cmd] : commands)
        if (app.got_subcommand(name)) command = cmd;

    cohtrans::job::JobResult result;
    try {
        nlohmann::ordered_json doc;
        try {
            doc = nlohmann::ordered_json::parse(read_all(input));
        } catch (const nlohmann::json::parse_error& e) {
            throw cohtrans::ParseError(std::string("invalid JSON: ") + e.what());
        }
        auto request = cohtrans::job::parse_request(command, doc);
        if (d_prime) request.options.d_prime = *d_prime;
        if (tolerance) request.options.tol.maj = *tolerance;
        if (seed) request.options.seed = *seed;
        if (enumerate_all) request.options.enumerate_all = true;
        result = cohtrans::job::run(request);
    } catch (const cohtrans::ParseError& e) {
        result.exit_code = 2;
        result.report["command"] = cohtrans::job::command_name(command);
        result.report["status"] = "error";
        result.report["error"] = {{"code", "parse_error"}, {"message", e.what()}};
    }
    try {
        write_all(output, cohtrans::job::serialize_report(result.report));
    } catch (const std::exception& e) {
        std::cerr << "cohtrans: " << e.what() << "\n";
        return 2;
    }
    return result.exit_code;
}
