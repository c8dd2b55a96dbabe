#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nilsym/dataset.hpp"

namespace nilsym {

enum class BlockKind { lorentzian_v0, riemannian_irreducible };

std::string to_string(BlockKind k);

/// One invariant block of v, with its intertwiner J and the weight lambda of
/// the central action when the restriction of pi(c) is nonzero.
struct IsotypicBlock {
  Subspace subspace;  // subspace of v
  BlockKind kind = BlockKind::riemannian_irreducible;
  std::optional<Eigen::MatrixXd> J;       // block coordinates; J^2 = -Id (+Id for v0)
  std::optional<Eigen::VectorXd> lambda;  // one coefficient per c basis vector
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> lightlike_lines;
  int commutant_dim = 0;  // commutant of the restricted action (1, 2 or 4)
};

struct InvariantDecomposition {
  std::vector<IsotypicBlock> blocks;
  Subspace u0;  // common kernel of the pi action of [g,g] (full v when g abelian)

  int v0_count() const;
};

/// Per-block slice of ker pi(Z) together with the non-degeneracy verdicts.
struct KernelReport {
  Subspace kernel;                    // ker pi(Z) in v
  std::vector<Subspace> b_blocks;     // kernel ∩ v_i, same order as blocks
  SignatureReport kernel_signature;
  bool nondegenerate = false;
  bool lorentzian_kernel = false;     // v0 contained in the kernel
  bool direct_sum_ok = false;
  bool central_all_or_nothing = true; // checked only when Z is central in g
};

// -- operations ------------------------------------------------------------

/// Orthogonal decomposition of v into pi(g)-invariant blocks: for Lorentzian
/// v exactly one 2-dimensional Lorentzian block spanned by two invariant
/// lightlike lines, all other blocks Riemannian irreducible.
InvariantDecomposition invariant_decomposition(const DataSet& d, Rng& rng,
                                               const TolerancePolicy& tol = {});

/// Two invariant lightlike lines of a commuting family of skew-adjoint maps
/// with trivial common kernel on a Lorentzian space. Throws NoBoostPart when
/// a common kernel remains.
std::pair<Eigen::VectorXd, Eigen::VectorXd> find_invariant_lightlike_pair(
    const std::vector<Eigen::MatrixXd>& maps, const BilinearForm& form, Rng& rng,
    const TolerancePolicy& tol = {});

/// The intertwiner J and weights lambda of the central action on a block:
/// pi(Z)|_block = lambda(Z) J with J^2 = -Id (Riemannian blocks) or +Id (v0).
/// J is absent when pi(c) restricts to zero. Throws NotScalarMultiple when the
/// restriction is not a consistent scalar multiple of a single J.
void extract_J_lambda(IsotypicBlock& block, const DataSet& d, const CompactSplit& split,
                      const TolerancePolicy& tol = {});

/// Decompose ker pi(Z) along the invariant blocks and certify non-degeneracy.
KernelReport kernel_decomposition(const DataSet& d, const InvariantDecomposition& dec,
                                  const Eigen::VectorXd& Z, const TolerancePolicy& tol = {});

/// A timelike vector fixed by a compact semisimple action on Lorentzian space
/// (caller asserts the precondition). Throws NoTimelikeFixed / InvalidInput.
Eigen::VectorXd timelike_fixed_vector(const std::vector<Eigen::MatrixXd>& maps,
                                      const BilinearForm& form,
                                      const TolerancePolicy& tol = {});

}  // namespace nilsym
