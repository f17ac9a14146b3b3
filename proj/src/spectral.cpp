#include "shannon_markov/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "shannon_markov/errors.hpp"
#include "shannon_markov/log_table.hpp"

namespace shannon_markov {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// p * exp(-2 pi i f) for a fractional part f computed in extended precision.
Complex phased(long double p, long double f) {
    long double angle = -2.0L * std::numbers::pi_v<long double> * f;
    return {static_cast<double>(p * std::cos(angle)), static_cast<double>(p * std::sin(angle))};
}

double principal_arg(Complex z) {
    double a = std::arg(z);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi - 1e-12) a = 0.0;
    return a;
}

void check_size(Eigen::Index r) {
    if (r > kMaxSpectralSize)
        throw ResourceLimit("eigen-decomposition is limited to r <= " + std::to_string(kMaxSpectralSize));
}

std::vector<Eigen::Index> sorted_order(const Eigen::VectorXcd& values) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::abs(values(a)) > std::abs(values(b)); });
    // within runs of (nearly) equal modulus, order by argument
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        double lead = std::abs(values(order[start]));
        while (end < order.size() && lead - std::abs(values(order[end])) <= kModulusTieTolerance) ++end;
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end), [&](Eigen::Index a, Eigen::Index b) {
                             return principal_arg(values(a)) < principal_arg(values(b));
                         });
        start = end;
    }
    return order;
}

// Index of the first component whose modulus is within rounding of the largest.
Eigen::Index pivot_component(const Eigen::VectorXcd& v) {
    double top = v.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (std::abs(v(k)) >= (1.0 - 1e-9) * top) return k;
    return 0;
}

double dist_to_integer(double x) {
    double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

}  // namespace

AMatrix build_A(const MarkovSource& source, std::int64_t m) {
    LogTable table(source);
    const int r = source.size();
    AMatrix a{m, Eigen::MatrixXcd::Zero(r, r)};
    for (State j = 0; j < r; ++j)
        for (State k = 0; k < r; ++k) {
            const auto& p = source.transition(j, k);
            if (p.is_zero()) continue;
            a.entries(j, k) = m == 0 ? Complex(p.to_double(), 0.0)
                                     : phased(p.to_long_double(), table.frac_scaled_log_transition(j, k, m));
        }
    return a;
}

CVector build_c(const MarkovSource& source, std::int64_t m) {
    LogTable table(source);
    const int r = source.size();
    CVector c{m, Eigen::VectorXcd::Zero(r)};
    for (State k = 0; k < r; ++k) {
        const auto& p = source.initial(k);
        if (p.is_zero()) continue;
        c.entries(k) = m == 0 ? Complex(p.to_double(), 0.0)
                              : phased(p.to_long_double(), table.frac_scaled_log_initial(k, m));
    }
    return c;
}

std::vector<Complex> sorted_eigenvalues(const Eigen::MatrixXcd& matrix) {
    check_size(matrix.rows());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, false);
    if (solver.info() != Eigen::Success) throw DefectiveMatrix("eigenvalue iteration did not converge");
    const auto& values = solver.eigenvalues();
    std::vector<Complex> out;
    for (auto i : sorted_order(values)) out.push_back(values(i));
    return out;
}

double spectral_radius(const Eigen::MatrixXcd& matrix) {
    return std::abs(sorted_eigenvalues(matrix).front());
}

double second_modulus(const Eigen::MatrixXcd& matrix) {
    auto values = sorted_eigenvalues(matrix);
    return values.size() < 2 ? 0.0 : std::abs(values[1]);
}

SpectralReport eigen(const Eigen::MatrixXcd& matrix) {
    check_size(matrix.rows());
    const Eigen::Index r = matrix.rows();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, true);
    if (solver.info() != Eigen::Success) throw DefectiveMatrix("eigenvalue iteration did not converge");
    auto order = sorted_order(solver.eigenvalues());

    Eigen::MatrixXcd v(r, r);
    SpectralReport report;
    for (Eigen::Index col = 0; col < r; ++col) {
        Eigen::VectorXcd x = solver.eigenvectors().col(order[static_cast<std::size_t>(col)]);
        x /= x(pivot_component(x));
        v.col(col) = x;
        report.eigenvalues.push_back(solver.eigenvalues()(order[static_cast<std::size_t>(col)]));
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
    if (!lu.isInvertible()) throw DefectiveMatrix("eigenvectors do not span; matrix is defective");
    Eigen::MatrixXcd inv = lu.inverse();
    for (Eigen::Index j = 0; j < r; ++j) {
        Eigen::VectorXcd l = inv.row(j).transpose();
        // with both sides unit-normalized, l^T r = 1 / (|l| |r|)
        if (l.norm() * v.col(j).norm() > 1e10)
            throw DefectiveMatrix("bi-orthogonal normalization failed for eigenvalue " + std::to_string(j + 1));
        report.right.push_back(v.col(j));
        report.left.push_back(std::move(l));
    }
    return report;
}

Complex char_fn(const MarkovSource& source, std::int64_t m, int n, CharFnMode mode) {
    if (n < 1) throw ValidationError("block length n must be at least 1");
    auto a = build_A(source, m).entries;
    auto c = build_c(source, m).entries;
    const Eigen::Index r = a.rows();
    Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(r);
    if (mode == CharFnMode::Direct) {
        Eigen::VectorXcd v = ones;
        for (int t = 1; t < n; ++t) v = a * v;
        return c.transpose() * v;
    }
    auto report = eigen(a);
    Complex sum = 0.0;
    for (std::size_t j = 0; j < report.eigenvalues.size(); ++j) {
        Complex weight = Complex(c.transpose() * report.right[j]) * Complex(report.left[j].transpose() * ones);
        sum += std::pow(report.eigenvalues[j], n - 1) * weight;
    }
    return sum;
}

double default_unit_tolerance(const MarkovSource& source) {
    return source.exact() ? 1e-9 : 1e-6;
}

MSearchResult find_M(const MarkovSource& source, std::int64_t m_max, std::optional<double> tol) {
    auto structure = classify_structure(source);
    if (!structure.irreducible)
        throw ReducibleChain("the M search requires an irreducible chain: " + structure.reducible_note.value_or(""));
    MSearchResult result;
    result.tol = tol.value_or(default_unit_tolerance(source));
    result.period = *structure.period;
    const int r = source.size();
    const double d = result.period;

    for (std::int64_t m = 1; m <= m_max; ++m) {
        auto a = build_A(source, m).entries;
        check_size(a.rows());
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, true);
        if (solver.info() != Eigen::Success) throw DefectiveMatrix("eigenvalue iteration did not converge");
        const auto& values = solver.eigenvalues();
        double radius = values.cwiseAbs().maxCoeff();
        result.radii.push_back(radius);
        if (std::abs(radius - 1.0) > result.tol) continue;

        // unit-modulus eigenvalues sit at s + t/d; the smallest phase has t = 0
        Eigen::Index chosen = -1;
        for (Eigen::Index i = 0; i < values.size(); ++i) {
            if (std::abs(std::abs(values(i)) - 1.0) > result.tol) continue;
            if (chosen < 0 || principal_arg(values(i)) < principal_arg(values(chosen))) chosen = i;
        }
        double phase = principal_arg(values(chosen)) / kTwoPi;
        result.s = std::fmod(phase, 1.0 / d);
        if (1.0 / d - result.s < 1e-12) result.s = 0.0;

        Eigen::VectorXcd x = solver.eigenvectors().col(chosen);
        double top = x.cwiseAbs().maxCoeff();
        for (Eigen::Index k = 0; k < r; ++k)
            if (std::abs(x(k)) < 1e-8 * top)
                throw DefectiveMatrix("dominant eigenvector component " + std::to_string(k + 1) +
                                      " vanishes; its argument is undefined");
        double base = std::arg(x(0));
        result.w.assign(static_cast<std::size_t>(r), 0.0);
        for (Eigen::Index k = 1; k < r; ++k) {
            double wk = (std::arg(x(k)) - base) / kTwoPi;
            wk -= std::floor(wk);
            if (wk >= 1.0 - 1e-12) wk = 0.0;
            result.w[static_cast<std::size_t>(k)] = wk;
        }
        result.M = m;
        result.heuristic = !source.exact();
        return result;
    }
    result.heuristic = true;
    result.w.assign(static_cast<std::size_t>(r), 0.0);
    return result;
}

SimilarityCheck verify_similarity(const MarkovSource& source, std::int64_t m, double s, const std::vector<double>& w,
                                  double tol) {
    LogTable table(source);
    const int r = source.size();
    if (static_cast<int>(w.size()) != r) throw ValidationError("weight vector must have r entries");
    SimilarityCheck out;
    for (State k = 0; k < r; ++k)
        for (State j = 0; j < r; ++j) {
            if (source.transition(k, j).is_zero()) continue;
            // <m log p(j|k)>, so -m log p(j|k) = -f (mod 1)
            double f = static_cast<double>(table.frac_scaled_log_transition(k, j, m));
            double gap = -f - s - w[static_cast<std::size_t>(k)] + w[static_cast<std::size_t>(j)];
            out.residual = std::max(out.residual, dist_to_integer(gap));
        }
    out.holds = out.residual <= tol;
    return out;
}

}  // namespace shannon_markov
