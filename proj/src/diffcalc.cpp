#include "latwave/diffcalc.hpp"

namespace latwave::diffcalc {
namespace {

Complex combine(DiffOp op, const Complex& lo, const Complex& hi)
{
    switch (op) {
        case DiffOp::forward_diff:
        case DiffOp::backward_diff: return hi - lo;
        case DiffOp::forward_avg:
        case DiffOp::backward_avg: return 0.5 * (hi + lo);
    }
    return {};
}

bool is_forward(DiffOp op)
{
    return op == DiffOp::forward_diff || op == DiffOp::forward_avg;
}

// Applies `op` to a strided line of `len` samples; out has len or len-1
// samples depending on the boundary mode.
template <class Get, class Put>
void apply_line(std::size_t len, Boundary boundary, DiffOp op, Get get, Put put)
{
    if (boundary == Boundary::shrinking) {
        for (std::size_t i = 0; i + 1 < len; ++i) put(i, combine(op, get(i), get(i + 1)));
        return;
    }
    for (std::size_t i = 0; i < len; ++i) {
        if (is_forward(op)) {
            put(i, combine(op, get(i), get((i + 1) % len)));
        } else {
            put(i, combine(op, get((i + len - 1) % len), get(i)));
        }
    }
}

}  // namespace

SampledSequence apply(const SampledSequence& f, DiffOp op)
{
    const std::size_t len = f.values.size();
    if (len < 2) {
        throw DomainError("difference operator needs a sequence of length >= 2");
    }
    SampledSequence out;
    out.boundary = f.boundary;
    out.values.resize(f.boundary == Boundary::shrinking ? len - 1 : len);
    apply_line(
        len, f.boundary, op, [&](std::size_t i) { return f.values[i]; },
        [&](std::size_t i, Complex v) { out.values[i] = v; });
    return out;
}

SampledSequence forward_diff(const SampledSequence& f) { return apply(f, DiffOp::forward_diff); }
SampledSequence backward_diff(const SampledSequence& f) { return apply(f, DiffOp::backward_diff); }
SampledSequence forward_avg(const SampledSequence& f) { return apply(f, DiffOp::forward_avg); }
SampledSequence backward_avg(const SampledSequence& f) { return apply(f, DiffOp::backward_avg); }

FieldSlab apply_1d(const FieldSlab& field, Axis axis, DiffOp op)
{
    const Boundary boundary = field.grid().boundary;
    const std::size_t extent = axis == Axis::time_n ? field.nt() : field.nx();
    if (extent < 2) {
        throw DomainError("apply_1d: field extent along the axis must be >= 2");
    }
    const std::size_t shrink = boundary == Boundary::shrinking ? 1 : 0;

    if (axis == Axis::time_n) {
        FieldSlab out(field.nt() - shrink, field.nx(), field.grid());
        for (std::size_t j = 0; j < field.nx(); ++j) {
            apply_line(
                field.nt(), boundary, op, [&](std::size_t n) { return field(n, j); },
                [&](std::size_t n, Complex v) { out(n, j) = v; });
        }
        return out;
    }
    FieldSlab out(field.nt(), field.nx() - shrink, field.grid());
    for (std::size_t n = 0; n < field.nt(); ++n) {
        apply_line(
            field.nx(), boundary, op, [&](std::size_t j) { return field(n, j); },
            [&](std::size_t j, Complex v) { out(n, j) = v; });
    }
    return out;
}

SampledSequence multiply(const SampledSequence& f, const SampledSequence& g)
{
    if (f.values.size() != g.values.size() || f.boundary != g.boundary) {
        throw DomainError("multiply: sequences differ in length or boundary");
    }
    SampledSequence out{std::vector<Complex>(f.values.size()), f.boundary};
    for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = f.values[i] * g.values[i];
    return out;
}

}  // namespace latwave::diffcalc
