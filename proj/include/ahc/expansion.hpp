#pragma once

#include "ahc/ach_model.hpp"

namespace ahc {

// inverse of a series-valued square matrix with invertible degree-0 part;
// entries are tensors with two full slots, treated as plain matrices
SeriesField<RC> series_matrix_inverse(const SeriesField<RC>& M);

// model metric as a full bilinear series G_{ab} (constant in x)
SeriesField<RC> model_metric_series(const TWBoundaryData& tw, int maxdeg);

// geometry of the frame Z'_a = Q^b_a Z_b over a caller metric given in the
// model frame; structure functions and metric components are recomputed in
// the primed frame
SeriesGeo<RC> adapted_geometry(const TWBoundaryData& tw, const SeriesField<RC>& Gfull_model,
                               const SeriesField<RC>& Q, int maxdeg);

// compatibility correction at degree l: the unique constant B with
// g(J0 ., B .) = -(1/2) D as bilinear forms (symmetric part fixes the metric
// defect, the skew part is set to zero); D is the degree-l defect
// g(J trc ., J trc .) - g
Tensor<RC> compatibility_correction(const Tensor<RC>& D, const Tensor<RC>& J0,
                                    const Tensor<RC>& G0);

// A-coefficient killing the degree-l coefficient of S:
// A_{0 alpha} = 8 S'_{0 alpha, l} / (l^2 - 2 n l - (2n+5)),
// A_{alpha beta} = 8 S'_{alpha beta, l} / (l^2 - 2 n l - 8).
// The linearization of S along the retraction is -(1/8)(l^2-2nl-c) per block.
Tensor<RC> order_reduction(const Tensor<RC>& S_l, int n, int l);

struct ExpansionOrderRecord {
    int l = 0;
    double b_norm = 0;  // size of the compatibility correction
    double a_norm = 0;  // size of the order-reduction coefficient
};

struct ExpansionResult {
    int n = 0;
    SeriesField<RC> J;           // endomorphism components in the model frame
    SeriesField<RC> Q;           // adapted frame transition
    SeriesField<RC> S;           // final Euler-Lagrange series, recomputed from scratch
    int s_order = 0;             // lowest nonvanishing degree of S
    std::vector<ExpansionOrderRecord> orders;
};

// order-by-order construction of an almost complex structure with
// S = O(x^{2n}) for the given metric series and homogeneous boundary data
ExpansionResult solve_expansion(const SeriesField<RC>& Gfull_model, const TWBoundaryData& tw);

// S series of a given (J, Q) over the given metric, recomputed from scratch
SeriesField<RC> expansion_s_series(const TWBoundaryData& tw, const SeriesField<RC>& Gfull_model,
                                   const SeriesField<RC>& Q, int maxdeg);

}  // namespace ahc
