#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shannon_markov/log_table.hpp"
#include "shannon_markov/markov_model.hpp"
#include "shannon_markov/prob.hpp"
#include "shannon_markov/spectral.hpp"
#include "shannon_markov/varrho.hpp"

namespace shannon_markov {

enum class AlphaForm {
    /// log[p(j|l) p(j|j) / (p(k|l) p(j|k))]; needs every referenced entry positive.
    Standard,
    /// log[p(j|l) p(l|l) / (p(k|l) p(j|k))]; defined wherever p(j|k) > 0, needs row l positive.
    Primed,
};

struct AlphaEntry {
    bool defined = false;
    bool rational = false;           ///< decided exactly, or by the continued-fraction test for floats
    std::optional<Rational> value;   ///< set when rational
    std::optional<LogCoord> coord;   ///< exact sources only
    double approx = 0.0;
};

struct AlphaMatrix {
    State anchor = 0;
    AlphaForm form = AlphaForm::Standard;
    bool exact = false;
    bool heuristic = false;  ///< rationality came from the float heuristic
    std::vector<std::vector<AlphaEntry>> entries;  ///< entries[j][k]

    bool all_rational() const;
    /// lcm of the denominators of every defined entry; requires all_rational().
    std::int64_t denominator_lcm() const;
};

/// Throws UndefinedAlpha naming the zero probabilities the chosen form needs.
AlphaMatrix alpha_matrix(const MarkovSource& source, State anchor = 0, AlphaForm form = AlphaForm::Standard);

enum class Mode { Convergent, Oscillatory };
enum class Provenance { ExactRational, SpectralSearch, HeuristicFloat };

std::string to_string(Mode m);
std::string to_string(Provenance p);

struct ModeClassification {
    Mode mode = Mode::Convergent;
    std::optional<std::int64_t> M;
    double s = 0.0;
    std::vector<double> w;
    Provenance provenance = Provenance::ExactRational;
    int period = 1;
    State anchor = 0;
    bool degenerate = false;  ///< every probability is a power of two
    bool heuristic = false;
    double similarity_residual = 0.0;
    std::string note;
};

struct ClassifyOptions {
    State anchor = 0;
    std::int64_t m_max = kDefaultMMax;
    std::optional<double> tol;
};

/// Convergent or oscillatory mode; throws ReducibleChain for reducible sources.
ModeClassification classify_mode(const MarkovSource& source, const ClassifyOptions& options = {});

/**
 * zeta_jk(n). Exact-rational classifications use the anchor-row form
 *   M[-(n-1) log p(l|l) + log p(j|l) - log p(k|l) - log p_j]
 * computed exactly; otherwise (n-1)s + w_j - w_k - M log p_j, where s and w
 * already carry the factor M. The two agree modulo 1 on positive sources.
 */
LogReal zeta(const MarkovSource& source, const ModeClassification& cls, State j, State k, int n);
/// Exact coordinate of the anchor-row form (exact positive sources only).
LogCoord zeta_coord(const MarkovSource& source, const LogTable& table, const ModeClassification& cls, State j,
                    State k, int n);
/// The (s, w) form, regardless of provenance.
long double zeta_phase_form(const MarkovSource& source, const ModeClassification& cls, State j, State k, int n);

inline constexpr double kDefaultXi = 0.05;

struct Prediction {
    int n = 0;
    Mode mode = Mode::Convergent;
    std::optional<std::int64_t> M;
    double omega = 0.5;
    double lower = 0.5;
    double upper = 0.5;
    double boundary_terms = 0.0;
    double xi = kDefaultXi;
    bool degenerate = false;
    bool boundary = false;
    bool heuristic = false;
    bool snap = false;

    /// ';'-joined subset of {degenerate, boundary, heuristic, snap}.
    std::string flags() const;
};

/// Aperiodic prediction; Convergent classifications give the constant 1/2.
Prediction omega(const MarkovSource& source, const ModeClassification& cls, int n, double xi = kDefaultXi);
/// Period-d prediction summed over the d unit eigenvalues of P; equals omega() when d = 1.
Prediction omega_periodic(const MarkovSource& source, const ModeClassification& cls, int n, double xi = kDefaultXi);
/// Dispatches on the period.
Prediction predict(const MarkovSource& source, const ModeClassification& cls, int n, double xi = kDefaultXi);

/**
 * Allowed gap between exact R_n and the sandwich bounds: 10 lambda^(n-1) + 1e-6, where
 * lambda is the largest eigenvalue modulus of A_M strictly inside the unit circle
 * (|lambda_2| for aperiodic chains). With `include_lower_harmonics`, lambda also covers
 * rho(A_m) for 0 < m < M, whose contributions decay at that rate when M > 1.
 */
double sandwich_tolerance(const MarkovSource& source, std::int64_t M, int n, bool include_lower_harmonics = false);

struct MemorylessValue {
    double value = 0.5;
    std::optional<std::int64_t> M;
    bool boundary = false;   ///< <beta M n> sits on the discontinuity at 0
    bool heuristic = false;  ///< rationality decided by the float heuristic
};

/// Closed form for memoryless sources: 1/2 + (1/M)(1/2 - <beta M n>) with beta = -log2 p_1 when all
/// log2(p_j / p_1) are rational, 1/2 otherwise.
MemorylessValue memoryless_formula(const std::vector<ProbValue>& p, int n);

struct Example2Value {
    double value = 0.0;
    double tail_bound = 0.0;
    int terms = 0;
    bool snap = false;
};

/// Limit of R_n for p = (1, 0), P = [[1 - a, a], [0, 1]]: the series
/// sum_k a (1 - a)^k rho(-log a - k log(1 - a)), truncated once (1 - a)^(K+1) < eps.
Example2Value example2_formula(double alpha, double truncation_eps = 1e-12);

}  // namespace shannon_markov
