#ifndef QDFS_HILBERT_HPP
#define QDFS_HILBERT_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdfs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Composite Hilbert space as an ordered list of factor dimensions.
// Convention used throughout: factor order (ion A, ion B, cavity),
// per-ion basis (|e>, |g>), cavity Fock states |0>..|n_max>.
class HilbertSpace {
public:
    explicit HilbertSpace(std::vector<int> factor_dims);

    const std::vector<int>& factor_dims() const { return dims_; }
    int num_factors() const { return static_cast<int>(dims_.size()); }
    int dim() const { return total_; }

    bool operator==(const HilbertSpace& other) const { return dims_ == other.dims_; }
    bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

    static HilbertSpace two_ions() { return HilbertSpace({2, 2}); }
    static HilbertSpace two_ions_cavity(int n_max) { return HilbertSpace({2, 2, n_max + 1}); }

private:
    std::vector<int> dims_;
    int total_;
};

class StateVector {
public:
    StateVector(HilbertSpace space, Vector amplitudes);

    const HilbertSpace& space() const { return space_; }
    const Vector& amplitudes() const { return amps_; }
    double norm() const { return amps_.norm(); }

    StateVector normalized() const;

private:
    HilbertSpace space_;
    Vector amps_;
};

class LinearOperator {
public:
    LinearOperator(HilbertSpace space, Matrix matrix);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return mat_; }

    static LinearOperator identity(const HilbertSpace& space);

private:
    HilbertSpace space_;
    Matrix mat_;
};

class DensityOperator {
public:
    // Checks Hermiticity (1e-10), unit trace (1e-9) and positivity (-1e-9).
    DensityOperator(HilbertSpace space, Matrix matrix);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return mat_; }

    static DensityOperator pure(const StateVector& psi);

private:
    HilbertSpace space_;
    Matrix mat_;
};

struct SchmidtDecomposition {
    std::vector<double> coefficients;      // p_k, descending, sum 1
    std::vector<Vector> left_vectors;      // |mu_k>
    std::vector<Vector> right_vectors;     // |nu_k>
    bool degenerate = false;               // |p_1 - p_2| < degeneracy_tol
};

inline constexpr double kSchmidtDegeneracyTol = 1e-8;

StateVector tensor_product(const StateVector& a, const StateVector& b);
LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b);

// Trace out every factor not listed in `keep`. Indices in `keep` must be
// valid, nonempty and strictly increasing order is not required.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

// Schmidt decomposition across a bipartition after the first
// `left_factors` factors of psi's space.
SchmidtDecomposition schmidt_decompose(const StateVector& psi, int left_factors = 1,
                                       double degeneracy_tol = kSchmidtDegeneracyTol);

// Closed-form exp(-i t G) for a 2x2 Hermitian generator.
Matrix expm_2x2(const Matrix& generator, double t);

struct EighResult {
    Eigen::VectorXd eigenvalues;  // ascending
    Matrix eigenvectors;          // columns
};

EighResult eigh(const Matrix& op, bool require_hermitian = true);

double max_abs(const Matrix& m);

}  // namespace qdfs

#endif
