#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "lzsm/harness/config.hpp"
#include "lzsm/harness/runner.hpp"
#include "lzsm/harness/selftest.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumeric = 2, kCompareFail = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw lzsm::ValidationError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lzsm::ValidationError("cannot write '" + path + "'");
    out << text;
    if (!out) throw lzsm::ValidationError("write failed for '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace lzsm::harness;
    CLI::App app{"lzsm: driven two-level system simulator and analytic checks"};
    app.require_subcommand(1);

    std::string config, out_path, sweep_path, method;
    int workers = 1;
    double threshold = 2e-2;

    auto* trace = app.add_subcommand("trace", "integrate the Schrodinger equation and export a CSV trajectory");
    trace->add_option("--config", config, "run configuration (key = value or JSON)")->required();
    trace->add_option("--out", out_path, "output CSV")->required();

    auto* sweep = app.add_subcommand("sweep", "evaluate an observable over a 1-D or 2-D parameter grid");
    sweep->add_option("--config", config, "base run configuration")->required();
    sweep->add_option("--sweep", sweep_path, "sweep specification")->required();
    sweep->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_path, "output CSV")->required();

    auto* compare = app.add_subcommand("compare", "compare an analytic formula with numerics");
    compare->add_option("--config", config, "run configuration")->required();
    compare->add_option("--method", method, "strong_drive | weak_drive | bloch_pert | bloch_pert_uz | rabi | inverse_lz")
        ->required();
    compare->add_option("--threshold", threshold, "maximum allowed absolute deviation");
    compare->add_option("--out", out_path, "output JSON report")->required();

    auto* selftest = app.add_subcommand("selftest", "run special-function oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try {
        if (*selftest) return print_selftest(specfun_selftest(), std::cout) ? kOk : kNumeric;
        const RunSpec spec = parse_config(read_file(config));
        std::ostringstream buf;
        if (*trace) {
            run_trace(spec, buf);
            write_file(out_path, buf.str());
            return kOk;
        }
        if (*sweep) {
            const SweepSpec sw = parse_sweep(read_file(sweep_path));
            run_sweep(spec, sw, workers, buf);
            write_file(out_path, buf.str());
            return kOk;
        }
        const CompareReport rep = run_compare(spec, parse_method(method), threshold);
        write_file(out_path, rep.to_json().dump(2) + "\n");
        for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
        std::cout << rep.method << ": max_abs_dev=" << format_double(rep.max_abs_dev)
                  << " threshold=" << format_double(rep.threshold) << (rep.pass ? " PASS" : " FAIL") << '\n';
        return rep.pass ? kOk : kCompareFail;
    } catch (const lzsm::InputError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const lzsm::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    }
}
