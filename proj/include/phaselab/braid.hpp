#pragma once

#include "phaselab/holonomy.hpp"
#include "phaselab/linalg.hpp"

#include <map>
#include <string>
#include <vector>

// Braid words over the generators sigma_1 .. sigma_{n-1} and numerical
// verification that assigned unitaries respect the braid relations. Only
// free reduction is performed on words; braid equality is probed through
// representations.

namespace phaselab {

struct BraidLetter {
    int index = 1;     // generator index, 1-based
    int exponent = 1;  // +1 or -1
};

struct BraidWord {
    int n_strands = 2;
    std::vector<BraidLetter> letters;

    void validate() const;
    BraidWord inverse() const;
    BraidWord concat(const BraidWord& other) const;
};

/// Compact text form, e.g. "s1 s2 s1^-1". Accepted tokens: s<k> and s<k>^-1.
BraidWord parse_braid_word(const std::string& text, int n_strands);
std::string format_braid_word(const BraidWord& word);

/// Cancels adjacent sigma_i sigma_i^{-1} pairs to a fixed point.
BraidWord reduce_word(const BraidWord& word);

struct BraidRepresentation {
    int n_strands = 2;
    int dimension = 1;
    std::map<int, ComplexMatrix> generator_images;

    void validate() const;  // all images unitary within 1e-10, indices in range
};

struct RelationReport {
    double max_braid_residual = 0.0;     // worst ||B_i B_{i+1} B_i - B_{i+1} B_i B_{i+1}||
    double max_commutation_residual = 0.0;  // worst ||B_i B_j - B_j B_i||, |i-j| >= 2
    int worst_braid_index = 0;
    std::pair<int, int> worst_commuting_pair{0, 0};
    double tolerance = 0.0;
    bool passed = false;
};

/// Checks the braid relation for all adjacent generator pairs and distant
/// commutation for all |i-j| >= 2 pairs, Frobenius norm residuals.
RelationReport verify_representation(const BraidRepresentation& rep, double tol);

/// Ordered product of generator images. Convention: the first letter acts
/// first, i.e. evaluate({l1, l2}) = image(l2) * image(l1).
ComplexMatrix evaluate_word(const BraidRepresentation& rep, const BraidWord& word);

/// Every generator image B -> V^dagger B V.
BraidRepresentation conjugate_representation(const BraidRepresentation& rep,
                                             const ComplexMatrix& v);

/// Abelian representation sigma_i -> exp(i theta) on D = 1.
BraidRepresentation abelian_representation(int n_strands, double theta);

/// The 2-dimensional Ising-anyon representation of the 3-strand braid group.
BraidRepresentation ising_representation();

/// Projective distance between evaluate_word(rep, word) and the holonomy's
/// gauge-invariant unitary U_L * B. A residual near zero supports "braiding
/// gate equals holonomy up to an overall phase"; a positive residual
/// quantifies the discrepancy between the braid prediction and the computed
/// physical transformation.
ProjectiveDistance compare_braid_to_holonomy(const BraidRepresentation& rep,
                                             const BraidWord& word,
                                             const HolonomyResult& holonomy);

}  // namespace phaselab
