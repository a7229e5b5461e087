#pragma once

// Calculus of finite differences on sampled sequences and 2-D slabs.
//
// All operators are dimensionless index-space maps: dividing by tau or eps is
// the caller's job. In periodic mode indices wrap and length is preserved; in
// shrinking mode every application drops exactly one sample, and the result
// sample i sits between input samples i and i+1.

#include <vector>

#include "latwave/grid.hpp"

namespace latwave::diffcalc {

struct SampledSequence {
    std::vector<Complex> values;
    Boundary boundary = Boundary::shrinking;
};

enum class Axis { time_n, space_j };

enum class DiffOp {
    forward_diff,   // f[i+1] - f[i]
    backward_diff,  // f[i] - f[i-1]
    forward_avg,    // (f[i+1] + f[i]) / 2
    backward_avg,   // (f[i] + f[i-1]) / 2
};

SampledSequence forward_diff(const SampledSequence& f);
SampledSequence backward_diff(const SampledSequence& f);
SampledSequence forward_avg(const SampledSequence& f);
SampledSequence backward_avg(const SampledSequence& f);

SampledSequence apply(const SampledSequence& f, DiffOp op);

/// Lifts a 1-D operator to a slab along one axis, using the slab grid's
/// boundary mode. Shrinking reduces the extent along `axis` by one.
FieldSlab apply_1d(const FieldSlab& field, Axis axis, DiffOp op);

/// Elementwise product of two sequences of equal length and boundary.
SampledSequence multiply(const SampledSequence& f, const SampledSequence& g);

}  // namespace latwave::diffcalc
