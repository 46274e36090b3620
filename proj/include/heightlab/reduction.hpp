#pragma once

#include "heightlab/curve.hpp"

namespace heightlab {

enum class ReductionType { Good, MultiplicativeSplit, MultiplicativeNonsplit, Additive };

std::string reduction_type_name(ReductionType t);

/// Everything about E at one prime, read off a p-minimal integral model.
struct LocalReduction {
    Int p;
    ModelTransform to_minimal;   // from the input curve to `minimal`
    WeierstrassCurve minimal;    // integral, minimal at p
    long ord_disc_min = 0;       // ord_p of the minimal discriminant
    ReductionType type = ReductionType::Good;
    bool potentially_multiplicative = false;  // ord_p(j) < 0
    long component_index = 0;    // ord_p(j^{-1}) for multiplicative reduction, else 0
    long smooth_multiplier = 1;  // smallest m with [m]P on the identity component for all P

    LocalReduction(Int prime, ModelTransform T, WeierstrassCurve M)
        : p(std::move(prime)), to_minimal(std::move(T)), minimal(std::move(M)) {}
};

LocalReduction local_reduction(const WeierstrassCurve& E, const Int& p);

/// Does the integer pair (c4, c6) with c4^3 - c6^2 = 1728 disc arise from an
/// integral Weierstrass model? (Conditions are only at 2 and 3.)
bool kraus_conditions(const Int& c4, const Int& c6);

/// Integral model with the given invariants; requires kraus_conditions.
WeierstrassCurve curve_from_c4c6(const Int& c4, const Int& c6);

/// Globally minimal model of E with the connecting transform.
struct GlobalMinimalModel {
    ModelTransform to_minimal;
    WeierstrassCurve minimal;
    std::vector<std::pair<Int, int>> disc_factorization;  // of the minimal discriminant
};
GlobalMinimalModel global_minimal_model(const WeierstrassCurve& E);

/// #E_ns(F_p) for the reduction of an integral model, counting the point at
/// infinity and excluding the singular point. Enumerative; requires p <= 10^5.
Int nonsingular_point_count(const WeierstrassCurve& E_integral, const Int& p);

/// Classification read off the point count alone (p <= 10^5):
/// count == p -> Additive, p-1 -> split, p+1 -> nonsplit multiplicative,
/// anything in the Hasse window -> Good.
ReductionType classify_by_point_count(const WeierstrassCurve& E_minimal, const Int& p);

/// Does P reduce into the smooth locus mod p on the given integral model?
bool reduces_to_smooth_point(const WeierstrassCurve& E_integral, const CurvePoint& P,
                             const Int& p);

/// Smallest m among {1,...,12} with [m]P smooth at every prime of bad
/// reduction, starting from per-prime component orders.
Int smooth_multiplier_for_point(const WeierstrassCurve& E, const CurvePoint& P,
                                const std::vector<LocalReduction>& bad);

}  // namespace heightlab
