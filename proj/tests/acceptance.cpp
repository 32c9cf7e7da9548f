// Runs every experiment at its default configuration and prints one PASS/FAIL line per
// criterion. Outputs land in GRAINKIN_ACCEPTANCE_DIR/<experiment>. Exit status 0 only when
// all ten criteria pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "grainkin/config.hpp"
#include "grainkin/experiments.hpp"
#include "grainkin/kernels.hpp"

using namespace grainkin;

namespace {

struct Timed {
    ExperimentResult result;
    double seconds = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Timed execute(ExperimentConfig cfg, const std::string& dir_name) {
    cfg.output_dir = (std::filesystem::path(GRAINKIN_ACCEPTANCE_DIR) / dir_name).string();
    std::printf("running %s ...\n", dir_name.c_str());
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    Timed t{run_experiment(cfg), 0.0};
    t.seconds = seconds_since(t0);
    write_outputs(cfg, t.result);
    if (!t.result.error.empty()) std::printf("  %s aborted: %s\n", dir_name.c_str(), t.result.error.c_str());
    std::printf("  %s finished in %.1f s\n", dir_name.c_str(), t.seconds);
    return t;
}

// Collects row checks for one criterion into a single verdict and a detail string.
class Verdict {
public:
    explicit Verdict(const ExperimentResult& r) : r_(r) {}

    Verdict& pass_row(const std::string& key) {
        try {
            const ReportRow& row = r_.row(key);
            note(key, row.value, row.status == "pass");
        } catch (const std::out_of_range&) {
            note(key + " missing", NAN, false);
        }
        return *this;
    }
    Verdict& rows_with_prefix(const std::string& prefix) {
        for (const ReportRow& row : r_.report)
            if (row.key.rfind(prefix, 0) == 0 && row.status != "record")
                note(row.key, row.value, row.status == "pass");
        return *this;
    }
    Verdict& record(const std::string& key) {
        try {
            note(key, r_.row(key).value, true);
        } catch (const std::out_of_range&) {
            note(key + " missing", NAN, false);
        }
        return *this;
    }
    Verdict& require(const std::string& what, double value, bool ok) {
        note(what, value, ok);
        return *this;
    }
    Verdict& runtime(double seconds, double limit) {
        std::ostringstream k;
        k << "runtime_s(limit " << limit << ")";
        return require(k.str(), seconds, seconds <= limit);
    }
    bool ok() const { return ok_ && r_.error.empty(); }
    std::string details() const { return r_.error.empty() ? details_ : details_ + " error=" + r_.error; }

private:
    void note(const std::string& key, double value, bool ok) {
        std::ostringstream os;
        os.precision(6);
        os << (details_.empty() ? "" : " ") << key << '=' << value << (ok ? "" : "[fail]");
        details_ += os.str();
        ok_ = ok_ && ok;
    }

    const ExperimentResult& r_;
    std::string details_;
    bool ok_ = true;
};

int print(int n, const Verdict& v) {
    std::printf("CRITERION %d %s: %s\n", n, v.ok() ? "PASS" : "FAIL", v.details().c_str());
    std::fflush(stdout);
    return v.ok() ? 0 : 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main() {
    kernels::configure_threads();
    int failures = 0;

    const Timed constants = execute(default_config("constants"), "constants");
    failures += print(1, Verdict(constants.result)
                             .pass_row("A0")
                             .pass_row("I0_HH")
                             .pass_row("transform_H_max_err")
                             .pass_row("g0_x2log")
                             .runtime(constants.seconds, 60.0));

    const Timed fourier = execute(default_config("maxwell-fourier"), "maxwell-fourier");
    failures += print(2, Verdict(fourier.result)
                             .rows_with_prefix("contraction_ratio_")
                             .pass_row("sigma_hat_2.5")
                             .runtime(fourier.seconds, 300.0));
    failures += print(3, Verdict(fourier.result).rows_with_prefix("lin_").pass_row("psi0_stationarity"));

    const Timed physical = execute(default_config("maxwell-physical"), "maxwell-physical");
    failures += print(4, Verdict(physical.result)
                             .pass_row("mass_drift")
                             .pass_row("momentum_max")
                             .pass_row("M2_drift")
                             .pass_row("dissipation_identity_rel")
                             .runtime(physical.seconds, 600.0));

    const Timed profile = execute(default_config("profile"), "profile");
    {
        Verdict v(profile.result);
        v.pass_row("residual").pass_row("M2").pass_row("pointwise_refinement_gap").record("pointwise_max_xG");
        try {
            const double ig = profile.result.row("I_gamma").value;
            v.require("I_gamma", ig, std::abs(ig) <= 1e-3);
        } catch (const std::out_of_range&) {
            v.require("I_gamma missing", NAN, false);
        }
        failures += print(5, v.runtime(profile.seconds, 1800.0));
    }

    const Timed unique = execute(default_config("uniqueness-probe"), "uniqueness-probe");
    failures += print(6, Verdict(unique.result).pass_row("profile_l1wa_gap"));

    ExperimentConfig sweep_cfg = default_config("profile");
    sweep_cfg.gamma = 0.2;
    sweep_cfg.sweep = {0.2, 0.1, 0.05};
    const Timed sweep = execute(sweep_cfg, "profile-sweep");
    failures += print(7, Verdict(sweep.result)
                             .record("lambda_gap_0.2")
                             .record("lambda_gap_0.1")
                             .record("lambda_gap_0.05")
                             .record("lambda_0.05")
                             .pass_row("lambda_sweep_monotone"));

    const Timed gap = execute(default_config("gap"), "gap");
    failures += print(8, Verdict(gap.result)
                             .record("gap_bound")
                             .pass_row("nu_hat")
                             .pass_row("sigma_hat_phi0")
                             .runtime(gap.seconds, 900.0));

    failures += print(9, Verdict(constants.result)
                             .pass_row("I0_g0H")
                             .record("I0_g0H_candidate")
                             .record("I0_g0H_relative_gap")
                             .pass_row("I0_phi0_G0"));

    // Property suites: every module test binary, run in sequence.
    {
        const ExperimentResult none;
        Verdict v(none);
        const auto t0 = std::chrono::steady_clock::now();
        for (const std::string& bin : split(GRAINKIN_TEST_BINARIES, '|')) {
            const std::string name = std::filesystem::path(bin).filename().string();
            std::printf("running %s ...\n", name.c_str());
            std::fflush(stdout);
            const std::string cmd = bin + " --minimal > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
            v.require(name + "_exit", code, code == 0);
        }
        failures += print(10, v.runtime(seconds_since(t0), 600.0));
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
