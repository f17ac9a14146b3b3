#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "shannon_markov/markov_model.hpp"

namespace shannon_markov {

using Complex = std::complex<double>;

/// A_m with entry (j, k) = p(k|j) exp(-2 pi i m log2 p(k|j)); A_0 = P.
struct AMatrix {
    std::int64_t m = 0;
    Eigen::MatrixXcd entries;
};

/// c_m with entry k = p_k exp(-2 pi i m log2 p_k).
struct CVector {
    std::int64_t m = 0;
    Eigen::VectorXcd entries;
};

AMatrix build_A(const MarkovSource& source, std::int64_t m);
CVector build_c(const MarkovSource& source, std::int64_t m);

/**
 * Eigen-decomposition sorted by non-increasing modulus; moduli within
 * kModulusTieTolerance are ordered by ascending argument in [0, 2 pi).
 * Right eigenvectors are scaled so their first largest-modulus component is 1;
 * left eigenvectors satisfy l_j^T r_k = [j == k].
 */
struct SpectralReport {
    std::vector<Complex> eigenvalues;
    std::vector<Eigen::VectorXcd> right;
    std::vector<Eigen::VectorXcd> left;
};

inline constexpr double kModulusTieTolerance = 1e-9;
inline constexpr int kMaxSpectralSize = 16;

/// Throws DefectiveMatrix when the eigenvector basis cannot be bi-normalized.
SpectralReport eigen(const Eigen::MatrixXcd& matrix);
/// Eigenvalues only, in the same order as eigen(); never throws DefectiveMatrix.
std::vector<Complex> sorted_eigenvalues(const Eigen::MatrixXcd& matrix);
double spectral_radius(const Eigen::MatrixXcd& matrix);
/// Modulus of the second eigenvalue in sorted order (0 for 1x1).
double second_modulus(const Eigen::MatrixXcd& matrix);

enum class CharFnMode { Direct, Spectral };

/// E exp(-2 pi i m log2 mu(X^n)) = c_m^T A_m^{n-1} 1.
Complex char_fn(const MarkovSource& source, std::int64_t m, int n, CharFnMode mode);

/// Unit-modulus tolerance: 1e-9 for exact sources, 1e-6 for floating ones.
double default_unit_tolerance(const MarkovSource& source);

struct MSearchResult {
    std::optional<std::int64_t> M;  ///< nullopt: no unit spectral radius up to m_max
    double s = 0.0;                 ///< in [0, 1/d)
    std::vector<double> w;          ///< in [0, 1), w[0] = 0
    bool heuristic = false;
    int period = 1;
    double tol = 0.0;
    std::vector<double> radii;  ///< rho(A_m) for every scanned m, starting at m = 1
};

inline constexpr std::int64_t kDefaultMMax = 64;

/// Smallest m in 1..m_max with |rho(A_m) - 1| <= tol, plus phase and weights.
MSearchResult find_M(const MarkovSource& source, std::int64_t m_max = kDefaultMMax,
                     std::optional<double> tol = std::nullopt);

struct SimilarityCheck {
    bool holds = false;
    double residual = 0.0;
};

inline constexpr double kSimilarityTolerance = 1e-8;

/// Checks -m log2 p(j|k) = s + w_k - w_j (mod 1) over every positive transition.
SimilarityCheck verify_similarity(const MarkovSource& source, std::int64_t m, double s,
                                  const std::vector<double>& w, double tol = kSimilarityTolerance);

}  // namespace shannon_markov
