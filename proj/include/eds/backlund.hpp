#ifndef EDS_BACKLUND_HPP
#define EDS_BACKLUND_HPP

#include <array>
#include <optional>
#include <string>

#include "eds/monge.hpp"

namespace eds {

// A parametric Backlund structure: the 7-dimensional total space with its
// parameter form zeta and the two Monge-Ampere systems it correspondences.
struct ParametricBT {
    AlgPtr P;
    MongeAmpereSystem I1, I2;
    SmoothMap pi1, pi2; // P -> M1, P -> M2
    Form zeta;
};

// ordered coframe (zeta, theta1, theta2, omega1..omega4) on P
struct SectionCoframe {
    Form zeta, theta1, theta2;
    std::array<Form, 4> omega;

    std::vector<Form> all() const {
        return {zeta, theta1, theta2, omega[0], omega[1], omega[2], omega[3]};
    }
};

struct TorsionTable {
    Ctx ctx;
    ScalarExpr A1, A2;
    std::array<ScalarExpr, 4> B, C, D, E;
    ScalarExpr F1, F2;
};

// result of verifying the section conditions; carries the re-based algebra
struct SectionCheck {
    bool ok = false;
    std::string failure; // first violated condition when !ok

    ScalarExpr A1, A2;
    std::array<ScalarExpr, 4> D;
    AlgPtr section; // P in the (zeta, theta1, theta2, omega^i) basis
    std::vector<std::vector<ScalarExpr>> to_old, from_old;
    // labeled characteristic systems, pulled back to P (natural basis):
    // [side][0] = C_i1 (the omega^1,omega^2 pair), [side][1] = C_i2
    std::array<std::array<std::vector<Form>, 2>, 2> char_pullbacks;
};

SectionCheck check_section(const ParametricBT& bt, const SectionCoframe& cf);
// throws NotASection when the coframe is not a section
TorsionTable extract_torsion(const ParametricBT& bt, const SectionCoframe& cf,
                             SectionCheck* check_out = nullptr);

// the same structure presented on the section algebra of cf, where the
// given coframe becomes the basis; cf_out receives that basis coframe
ParametricBT on_section_basis(const ParametricBT& bt, const SectionCoframe& cf,
                              SectionCoframe* cf_out = nullptr);

// structure group element: block (t; R on omega^1,omega^2; S on omega^3,4)
struct GroupElement {
    std::array<std::array<ScalarExpr, 2>, 2> R, S;
    ScalarExpr t;

    static GroupElement identity(const Ctx& ctx);
    ScalarExpr detR() const { return R[0][0] * R[1][1] - R[0][1] * R[1][0]; }
    ScalarExpr detS() const { return S[0][0] * S[1][1] - S[0][1] * S[1][0]; }
    // composition in action order: act(a * b, T) == act(a, act(b, T))
    GroupElement operator*(const GroupElement& o) const;
};

TorsionTable act(const GroupElement& g, const TorsionTable& t);

// transform a section coframe by a (constant) group element: the new
// coframe column is blockdiag(t, detS, detR, R, S)^{-1} applied to the old
SectionCoframe transform_section(const GroupElement& g, const SectionCoframe& cf);

enum class Verdict { Zero, NonzeroCertified, NonzeroGeneric };

struct InvariantReport {
    Verdict B12, B34, C12, C34, D12, D34, E12, E34;
    // 2x2 dependence determinants inside the side triples
    ZeroTest dep_BC1, dep_BE1, dep_CE1, dep_BC2, dep_BE2, dep_CE2;
    ZeroTest dot_DB1, dot_DC1, dot_DE1, dot_DB2, dot_DC2, dot_DE2;
    ZeroTest F1, F2;
    ScalarExpr A1A2;
    bool triple1_spans_line = false, triple2_spans_line = false;
    bool genuinely_parametric = false;
    bool holonomic = false;
};

InvariantReport classify(const TorsionTable& t);

struct PropositionReport {
    bool consistent = true;
    std::vector<std::string> violations;
    bool holonomic = false;
};

// consistency of the table with the structure-equation implications:
// C-vector zero forces B, E zero on that side; with both C-vectors nonzero
// the B-vectors (and the D-vectors) vanish together; D == 0 forces E, F == 0
PropositionReport check_propositions(const TorsionTable& t);

// symmetric-BT decision: w preserves {theta_i} and {zeta}, is transverse to
// the slices, and projects nontrivially to both sides
bool is_symmetric_bt(const ParametricBT& bt, const SectionCoframe& cf, const VectorField& w);

// pi_* w == v, tested through pullbacks of a spanning coframe downstairs
bool covers(const SmoothMap& pi, const VectorField& w, const VectorField& v);

} // namespace eds

#endif
