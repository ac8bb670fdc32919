#ifndef EDS_FIXTURES_HPP
#define EDS_FIXTURES_HPP

#include <map>
#include <optional>
#include <string>

#include "eds/backlund.hpp"

namespace eds {

// A fully constructed example: the total-space algebra with its parameter
// form and section coframe, the two Monge-Ampere systems with their
// projections, reference torsion values, and the named symmetry fields.
struct Fixture {
    std::string name;

    ParametricBT bt;
    SectionCoframe section;

    // reference torsion values (empty optional where only "nonzero" is known)
    std::optional<TorsionTable> expected_torsion;
    bool expect_F_nonzero = false; // F1, F2 nonzero with non-constant ratio

    // named vector fields on bt.P (symmetry candidates etc.)
    std::map<std::string, VectorField> fields;
    // named vector fields on the side algebras
    std::map<std::string, VectorField> side_fields;

    // free constants available in the fixture contexts (c1..c4)
    ScalarExpr c(int i) const; // on bt.P's context
    ScalarExpr m1_c(int i) const;
};

// names: sine_gordon, goursat, pseudospherical, cmc, wave_pair, zutrans
Fixture build_fixture(const std::string& name);

// helpers shared with tests: the flat frame algebra of Euclidean 3-space and
// the H^{2,1} frame algebra, over a fresh or supplied context
AlgPtr euclidean_frame_algebra(const Ctx& ctx, const std::string& suffix = "");
AlgPtr h21_frame_algebra(const Ctx& ctx, const std::string& suffix = "");

} // namespace eds

#endif
