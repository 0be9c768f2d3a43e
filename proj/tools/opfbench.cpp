#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <future>
#include <iostream>

#include "opf/bench.hpp"

namespace {

struct Task {
    std::string case_path;
    opf::Strengthening strengthening;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jabr-SOCP relaxation benchmark harness"};
    std::vector<std::string> case_paths;
    std::vector<std::string> variant_names{"none"};
    std::string refs_path, out_path, format = "json", objective = "auto";
    int jobs = 1;
    double tol = 1e-8;
    std::optional<int> root;

    app.add_option("--case", case_paths, "MATPOWER case file (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--variant", variant_names,
                   "relaxation variant: none, mc34, dual34 (repeatable)")
        ->check(CLI::IsMember({"none", "mc34", "dual34"}));
    app.add_option("--refs", refs_path, "reference objectives file")
        ->check(CLI::ExistingFile);
    app.add_option("--root", root, "spanning-tree root bus id");
    app.add_option("--tol", tol, "solver tolerance");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out_path, "output path (stdout when absent)");
    app.add_option("--jobs", jobs, "parallel (case, variant) solves")
        ->check(CLI::PositiveNumber);
    app.add_option("--objective", objective, "objective handling")
        ->check(CLI::IsMember({"auto", "linear", "quadratic"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        opf::ReferenceObjectives refs;
        if (!refs_path.empty())
            refs = opf::load_reference_objectives(opf::read_file(refs_path));

        std::vector<Task> tasks;
        for (const auto& path : case_paths)
            for (const auto& vn : variant_names)
                tasks.push_back({path, *opf::parse_strengthening(vn)});

        std::vector<opf::RelaxationReport> reports(tasks.size());
        std::vector<std::string> errors(tasks.size());
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                const Task& t = tasks[i];
                try {
                    opf::Network net = opf::parse_case(opf::read_file(t.case_path));
                    opf::VariantSpec spec;
                    spec.strengthening = t.strengthening;
                    spec.solver_tol = tol;
                    if (objective == "linear")
                        spec.objective_mode = opf::ObjectiveMode::Linear;
                    else if (objective == "quadratic")
                        spec.objective_mode = opf::ObjectiveMode::Quadratic;
                    else {
                        bool quad = false;
                        for (const auto& g : net.generators) quad |= g.cost_c2 > 0;
                        spec.objective_mode =
                            quad ? opf::ObjectiveMode::Quadratic : opf::ObjectiveMode::Linear;
                    }
                    std::string name =
                        net.name.empty() ? t.case_path : net.name;
                    reports[i] = opf::run(net, name, spec, refs, root);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        std::vector<std::future<void>> pool;
        for (int j = 0; j < std::max(1, jobs); ++j)
            pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();

        bool failed = false;
        for (size_t i = 0; i < tasks.size(); ++i) {
            if (!errors[i].empty()) {
                std::cerr << "error: " << tasks[i].case_path << " ["
                          << opf::to_string(tasks[i].strengthening)
                          << "]: " << errors[i] << "\n";
                failed = true;
            } else if (reports[i].status != opf::SolveStatus::Optimal) {
                std::cerr << "solver: " << tasks[i].case_path << " ["
                          << reports[i].variant
                          << "]: " << opf::to_string(reports[i].status) << "\n";
                failed = true;
            }
        }

        std::string payload = format == "csv" ? opf::reports_to_csv(reports)
                                              : opf::reports_to_json(reports);
        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return 2;
            }
            out << payload;
        }
        return failed ? 2 : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
