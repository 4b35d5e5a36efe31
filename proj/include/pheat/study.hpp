#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pheat {

/// Convergence-study sweep: every (nu, beta, n) combination is solved on the
/// manufactured benchmark with m tied to n by m_rule, errors are measured,
/// and the a priori bounds are evaluated next to them.
struct StudyConfig {
    std::vector<double> nu_list{0.1, 1.0, 10.0};
    std::vector<double> beta_list;  // defaults to {0, pi/2} in the constructor
    std::vector<std::size_t> n_list{8, 16, 32, 64, 128};
    std::string m_rule = "n_squared";    // or "explicit", zipped with n_list
    std::vector<std::size_t> m_list;
    double T = 1.0;
    int quad_order = 5;
    std::string output = "study.csv";

    StudyConfig();
};

/// Reads a JSON object with the StudyConfig keys; unknown keys are rejected.
StudyConfig load_config(const std::string& path);

/// Rejects empty lists, nonpositive values, n < 2, m_rule values other than
/// n_squared/explicit, mismatched m_list, quad_order < 4, and T != 1 (the
/// manufactured benchmark has period one).
void validate(const StudyConfig& cfg);

struct StudyRow {
    double nu;
    double beta;
    std::size_t n;
    std::size_t m;
    double h;
    double k;
    double kappa1;
    double K1;
    double K2;
    double err_h1;
    double err_l2;
    double bound_h1;
    double bound_l2;
    double ratio_h1;
    double ratio_l2;
    double runtime_ms;
};

/// Rows completed so far; `aborted` is set when a combination failed, with
/// the offending parameters and reason in `failure`.
struct StudyResult {
    std::vector<StudyRow> rows;
    bool aborted = false;
    std::string failure;
};

/// Runs the sweep in ascending lexicographic (nu, beta, n) order and stops at
/// the first failing combination.
StudyResult run_study(const StudyConfig& cfg);

/// Writes the rows as CSV with a fixed header, 17 significant digits, and LF
/// line endings; byte-identical across reruns except for runtime_ms.
void emit_csv(const std::vector<StudyRow>& rows, const std::string& path);

}  // namespace pheat
