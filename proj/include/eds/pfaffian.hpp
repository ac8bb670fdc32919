#ifndef EDS_PFAFFIAN_HPP
#define EDS_PFAFFIAN_HPP

#include <optional>
#include <vector>

#include "eds/form.hpp"
#include "eds/linalg.hpp"

namespace eds {

// Pfaffian system: an ordered list of independent generating 1-forms.
class PfaffianSystem {
public:
    PfaffianSystem() = default;
    // certifies pointwise linear independence of the generators
    PfaffianSystem(AlgPtr alg, std::vector<Form> gens);

    const AlgPtr& algebra() const { return alg_; }
    const std::vector<Form>& generators() const { return gens_; }
    int rank() const { return static_cast<int>(gens_.size()); }
    bool contains(const Form& f) const { return in_span(f, gens_); }
    bool same_system(const PfaffianSystem& o) const { return same_span(gens_, o.gens_); }

private:
    AlgPtr alg_;
    std::vector<Form> gens_;
};

// span of theta and the 1-forms appearing in d(theta) mod theta; the rank of
// the result is the Pfaff rank of theta
PfaffianSystem cartan_system(const Form& theta);

// {alpha in span S : d(alpha) == 0 mod S}
PfaffianSystem derived_system(const PfaffianSystem& s);

// iterate derived systems until the rank stabilizes; the initial system is
// the first entry, the terminal (Frobenius) system the last
std::vector<PfaffianSystem> derived_flag(const PfaffianSystem& s);

bool is_frobenius(const PfaffianSystem& s);

// a 1-form alpha in the terminal derived system with d(alpha) ^ alpha = 0,
// searched over the echelonized generators in basis declaration order
std::optional<Form> integrable_rank_one(const PfaffianSystem& s);

} // namespace eds

#endif
