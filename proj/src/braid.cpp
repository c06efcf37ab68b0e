#include "phaselab/braid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phaselab {

void BraidWord::validate() const {
    if (n_strands < 2) throw std::invalid_argument("BraidWord: need at least 2 strands");
    for (const BraidLetter& l : letters) {
        if (l.index < 1 || l.index > n_strands - 1) {
            std::ostringstream msg;
            msg << "BraidWord: generator index " << l.index << " outside [1, "
                << n_strands - 1 << "]";
            throw std::invalid_argument(msg.str());
        }
        if (l.exponent != 1 && l.exponent != -1) {
            throw std::invalid_argument("BraidWord: exponent must be +1 or -1");
        }
    }
}

BraidWord BraidWord::inverse() const {
    BraidWord inv;
    inv.n_strands = n_strands;
    inv.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        inv.letters.push_back({it->index, -it->exponent});
    }
    return inv;
}

BraidWord BraidWord::concat(const BraidWord& other) const {
    if (other.n_strands != n_strands) {
        throw std::invalid_argument("BraidWord::concat: strand counts differ");
    }
    BraidWord joined = *this;
    joined.letters.insert(joined.letters.end(), other.letters.begin(),
                          other.letters.end());
    return joined;
}

BraidWord parse_braid_word(const std::string& text, int n_strands) {
    BraidWord word;
    word.n_strands = n_strands;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        if (token.size() < 2 || token[0] != 's') {
            throw std::invalid_argument("parse_braid_word: bad token '" + token + "'");
        }
        BraidLetter letter;
        size_t caret = token.find('^');
        const std::string index_part = token.substr(1, caret == std::string::npos
                                                           ? std::string::npos
                                                           : caret - 1);
        try {
            size_t used = 0;
            letter.index = std::stoi(index_part, &used);
            if (used != index_part.size()) throw std::invalid_argument("");
            if (caret != std::string::npos) {
                const std::string exp_part = token.substr(caret + 1);
                letter.exponent = std::stoi(exp_part, &used);
                if (used != exp_part.size()) throw std::invalid_argument("");
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_braid_word: bad token '" + token + "'");
        }
        word.letters.push_back(letter);
    }
    word.validate();
    return word;
}

std::string format_braid_word(const BraidWord& word) {
    std::ostringstream out;
    for (size_t i = 0; i < word.letters.size(); ++i) {
        if (i) out << ' ';
        out << 's' << word.letters[i].index;
        if (word.letters[i].exponent == -1) out << "^-1";
    }
    return out.str();
}

BraidWord reduce_word(const BraidWord& word) {
    word.validate();
    BraidWord reduced;
    reduced.n_strands = word.n_strands;
    for (const BraidLetter& l : word.letters) {
        if (!reduced.letters.empty() && reduced.letters.back().index == l.index &&
            reduced.letters.back().exponent == -l.exponent) {
            reduced.letters.pop_back();
        } else {
            reduced.letters.push_back(l);
        }
    }
    return reduced;
}

void BraidRepresentation::validate() const {
    if (n_strands < 2) {
        throw std::invalid_argument("BraidRepresentation: need at least 2 strands");
    }
    for (int i = 1; i <= n_strands - 1; ++i) {
        auto it = generator_images.find(i);
        if (it == generator_images.end()) {
            std::ostringstream msg;
            msg << "BraidRepresentation: missing image for generator " << i;
            throw std::invalid_argument(msg.str());
        }
        const ComplexMatrix& b = it->second;
        if (b.rows() != dimension || b.cols() != dimension) {
            throw std::invalid_argument("BraidRepresentation: image dimension mismatch");
        }
        const double defect = unitarity_defect(b);
        if (defect > 1e-10) {
            std::ostringstream msg;
            msg << "BraidRepresentation: image of generator " << i
                << " is not unitary, defect " << defect;
            throw std::invalid_argument(msg.str());
        }
    }
}

RelationReport verify_representation(const BraidRepresentation& rep, double tol) {
    rep.validate();
    RelationReport report;
    report.tolerance = tol;
    for (int i = 1; i <= rep.n_strands - 2; ++i) {
        const ComplexMatrix& bi = rep.generator_images.at(i);
        const ComplexMatrix& bj = rep.generator_images.at(i + 1);
        const double residual = (bi * bj * bi - bj * bi * bj).norm();
        if (residual > report.max_braid_residual) {
            report.max_braid_residual = residual;
            report.worst_braid_index = i;
        }
    }
    for (int i = 1; i <= rep.n_strands - 1; ++i) {
        for (int j = i + 2; j <= rep.n_strands - 1; ++j) {
            const ComplexMatrix& bi = rep.generator_images.at(i);
            const ComplexMatrix& bj = rep.generator_images.at(j);
            const double residual = (bi * bj - bj * bi).norm();
            if (residual > report.max_commutation_residual) {
                report.max_commutation_residual = residual;
                report.worst_commuting_pair = {i, j};
            }
        }
    }
    report.passed = report.max_braid_residual <= tol &&
                    report.max_commutation_residual <= tol;
    return report;
}

ComplexMatrix evaluate_word(const BraidRepresentation& rep, const BraidWord& word) {
    word.validate();
    if (word.n_strands != rep.n_strands) {
        throw std::invalid_argument("evaluate_word: strand counts differ");
    }
    ComplexMatrix u = ComplexMatrix::Identity(rep.dimension, rep.dimension);
    for (const BraidLetter& l : word.letters) {
        auto it = rep.generator_images.find(l.index);
        if (it == rep.generator_images.end()) {
            std::ostringstream msg;
            msg << "evaluate_word: no image for generator " << l.index;
            throw std::out_of_range(msg.str());
        }
        const ComplexMatrix& b = it->second;
        // First letter acts first: later letters multiply from the left.
        u = (l.exponent == 1) ? ComplexMatrix(b * u) : ComplexMatrix(b.adjoint() * u);
    }
    return u;
}

BraidRepresentation conjugate_representation(const BraidRepresentation& rep,
                                             const ComplexMatrix& v) {
    const double defect = unitarity_defect(v);
    if (defect > 1e-10) {
        std::ostringstream msg;
        msg << "conjugate_representation: V is not unitary, defect " << defect;
        throw std::invalid_argument(msg.str());
    }
    if (v.rows() != rep.dimension) {
        throw std::invalid_argument("conjugate_representation: dimension mismatch");
    }
    BraidRepresentation conjugated = rep;
    for (auto& [index, image] : conjugated.generator_images) {
        image = v.adjoint() * image * v;
    }
    return conjugated;
}

BraidRepresentation abelian_representation(int n_strands, double theta) {
    BraidRepresentation rep;
    rep.n_strands = n_strands;
    rep.dimension = 1;
    ComplexMatrix image(1, 1);
    image(0, 0) = std::polar(1.0, theta);
    for (int i = 1; i <= n_strands - 1; ++i) rep.generator_images[i] = image;
    rep.validate();
    return rep;
}

BraidRepresentation ising_representation() {
    BraidRepresentation rep;
    rep.n_strands = 3;
    rep.dimension = 2;
    ComplexMatrix b1(2, 2), b2(2, 2);
    const Complex phase = std::polar(1.0, -kPi / 8.0);
    b1 << phase, 0.0,
          0.0, phase * Complex(0.0, 1.0);
    // sigma_2 is sigma_1 rotated by the Hadamard-like basis change.
    ComplexMatrix f(2, 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    f << inv_sqrt2, inv_sqrt2,
         inv_sqrt2, -inv_sqrt2;
    b2 = f * b1 * f;
    rep.generator_images[1] = b1;
    rep.generator_images[2] = b2;
    rep.validate();
    return rep;
}

ProjectiveDistance compare_braid_to_holonomy(const BraidRepresentation& rep,
                                             const BraidWord& word,
                                             const HolonomyResult& holonomy) {
    if (holonomy.combined.rows() != rep.dimension) {
        std::ostringstream msg;
        msg << "compare_braid_to_holonomy: representation dimension " << rep.dimension
            << " vs holonomy dimension " << holonomy.combined.rows();
        throw std::invalid_argument(msg.str());
    }
    return projective_distance(evaluate_word(rep, word), holonomy.combined);
}

}  // namespace phaselab
