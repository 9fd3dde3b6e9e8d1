#pragma once

// Reference evaluator for tests. Each input vector is pushed through the
// dataflow graph with unbounded integers and no notion of time: a register
// holds its operand wrapped to width, a buffer is transparent. A correctly
// scheduled pipeline must agree with this at every aligned cycle.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fxpipe/graph.hpp"
#include "fxpipe/sim.hpp"

namespace oracle {

using big = boost::multiprecision::cpp_int;

inline big pow2(int k) { return big(1) << k; }

inline big floor_shift_right(const big& x, int k)
{
    if (x >= 0)
        return x >> k;
    const big m = -x;
    return -((m + pow2(k) - 1) >> k);
}

inline big wrap(const big& v, int w, bool is_signed)
{
    const big m = pow2(w);
    big r = v % m;
    if (r < 0)
        r += m;
    if (is_signed && r >= pow2(w - 1))
        r -= m;
    return r;
}

inline big quantize(double x, const fxpipe::FixedPointFormat& f)
{
    const long double scaled = static_cast<long double>(x) * static_cast<long double>(f.conversion_constant());
    big q = big(static_cast<long long>(std::round(scaled)));
    const int w = f.bit_width();
    const big lo = f.is_signed() ? -pow2(w - 1) : big(0);
    const big hi = f.is_signed() ? pow2(w - 1) - 1 : pow2(w) - 1;
    if (q < lo)
        q = lo;
    if (q > hi)
        q = hi;
    return q;
}

inline bool compare(fxpipe::CompareOp op, const big& a, const big& b)
{
    using fxpipe::CompareOp;
    switch (op) {
    case CompareOp::eq: return a == b;
    case CompareOp::ne: return a != b;
    case CompareOp::ge: return a >= b;
    case CompareOp::gt: return a > b;
    case CompareOp::le: return a <= b;
    case CompareOp::lt: return a < b;
    case CompareOp::logical_and: return a != 0 && b != 0;
    case CompareOp::logical_or: return a != 0 || b != 0;
    }
    return false;
}

// Unbounded value of every node for one input vector.
inline std::vector<big> evaluate(const fxpipe::Design& d, const fxpipe::InputVector& v)
{
    using fxpipe::NodeKind;
    const auto& nodes = d.nodes();
    std::vector<big> val(nodes.size());
    std::map<fxpipe::NodeId, std::size_t> input_pos;
    for (std::size_t i = 0; i < d.inputs().size(); ++i)
        input_pos[d.inputs()[i]] = i;
    for (const auto& n : nodes) {
        const auto& o = n.operands;
        switch (n.kind) {
        case NodeKind::input: val[n.id] = quantize(v.at(input_pos.at(n.id)), n.fmt); break;
        case NodeKind::constant: val[n.id] = big(n.const_int); break;
        case NodeKind::add: val[n.id] = val[o[0]] + val[o[1]]; break;
        case NodeKind::sub: val[n.id] = val[o[0]] - val[o[1]]; break;
        case NodeKind::mul: val[n.id] = val[o[0]] * val[o[1]]; break;
        case NodeKind::left_shift: val[n.id] = val[o[0]] * pow2(n.shift); break;
        case NodeKind::right_shift: val[n.id] = floor_shift_right(val[o[0]], n.shift); break;
        case NodeKind::compare: val[n.id] = compare(n.compare_op, val[o[0]], val[o[1]]) ? 1 : 0; break;
        case NodeKind::select: val[n.id] = val[o[0]] != 0 ? val[o[1]] : val[o[2]]; break;
        case NodeKind::buffer: val[n.id] = val[o[0]]; break;
        case NodeKind::register_assign: val[n.id] = wrap(val[o[0]], n.width(), n.fmt.is_signed()); break;
        case NodeKind::lut_read: {
            const auto& spec = d.luts()[n.lut];
            big a = val[o[0]];
            if (a < 0)
                a = 0;
            if (a >= spec.depth)
                a = spec.depth - 1;
            val[n.id] = big(spec.contents[static_cast<std::size_t>(a.convert_to<long long>())]);
            break;
        }
        }
    }
    return val;
}

// Number of (vector, output) pairs where the simulator disagrees.
inline std::size_t count_mismatches(const fxpipe::Design& d, const std::vector<fxpipe::InputVector>& vectors,
                                    const fxpipe::Trace& tr, std::string* first = nullptr)
{
    std::size_t bad = 0;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const auto val = evaluate(d, vectors[k]);
        for (const auto& out : d.outputs()) {
            const big sim = big(tr.aligned(out.node, k).integer_value);
            if (sim != val[out.node]) {
                if (!bad && first)
                    *first = "vector " + std::to_string(k) + " output " + out.name + ": sim " + sim.str() +
                             ", oracle " + val[out.node].str();
                ++bad;
            }
        }
    }
    return bad;
}

} // namespace oracle
