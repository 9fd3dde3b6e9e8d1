#pragma once

// Cycle-accurate dual-track simulation of a scheduled design.
//
// Every cycle, each node is evaluated twice: on the integer path exactly as
// the generated hardware computes it, and on the float path as the ideal
// algorithm would. Registers, buffers and table reads all start at zero.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "fxp.hpp"
#include "graph.hpp"
#include "lut.hpp"

namespace fxpipe {

using InputVector = std::vector<double>; // one value per design input, in Design::inputs() order

enum class ViolationKind { input_out_of_range, width_overflow, address_out_of_range };

inline const char* to_string(ViolationKind k)
{
    switch (k) {
    case ViolationKind::input_out_of_range: return "input_out_of_range";
    case ViolationKind::width_overflow: return "width_overflow";
    case ViolationKind::address_out_of_range: return "address_out_of_range";
    }
    return "?";
}

struct Violation {
    std::size_t cycle = 0;
    NodeId node = 0;
    ViolationKind kind = ViolationKind::width_overflow;
    std::string message;
};

struct RunOptions {
    // Saturate out-of-range inputs and record a violation instead of throwing.
    bool clamp = false;
    // Keep per-cycle values of anonymous combinational nodes too.
    bool record_combinational = true;
};

class Trace {
public:
    std::size_t cycle_count() const { return cycles_; }
    std::size_t vector_count() const { return vectors_; }
    int latency() const { return latency_; }
    bool warmup(std::size_t cycle) const { return cycle < static_cast<std::size_t>(latency_); }
    const std::vector<Violation>& violations() const { return violations_; }
    // In-range inputs that landed on the half-count boundary and were
    // saturated by one count (e.g. exactly float_max).
    std::size_t boundary_saturations() const { return boundary_saturations_; }

    bool recorded(NodeId id) const { return id < ints_.size() && !ints_[id].empty(); }
    const std::string& label(NodeId id) const { return labels_.at(id); }
    int stage(NodeId id) const { return stages_.at(id); }
    double conversion_constant(NodeId id) const { return ccs_.at(id); }

    std::span<const std::int64_t> integers(NodeId id) const { return column(ints_, id); }
    std::span<const double> floats(NodeId id) const { return column(floats_, id); }

    SignalValue at(NodeId id, std::size_t cycle) const
    {
        const auto i = integers(id);
        const auto f = floats(id);
        if (cycle >= i.size())
            throw RangeError("cycle " + std::to_string(cycle) + " beyond trace");
        return SignalValue::from(f[cycle], i[cycle], ccs_[id]);
    }

    // Value of a node computed from input vector v: held at cycle v + stage.
    SignalValue aligned(NodeId id, std::size_t v) const { return at(id, v + static_cast<std::size_t>(stages_.at(id))); }

    NodeId output_node(const std::string& name) const
    {
        auto it = outputs_.find(name);
        if (it == outputs_.end())
            throw GraphError("unknown output '" + name + "'");
        return it->second;
    }
    const std::map<std::string, NodeId>& outputs() const { return outputs_; }

private:
    template <typename T>
    static std::span<const T> column(const std::vector<std::vector<T>>& cols, NodeId id)
    {
        if (id >= cols.size() || cols[id].empty())
            throw GraphError("node " + std::to_string(id) + " was not recorded");
        return cols[id];
    }

    friend Trace run(const Design&, std::span<const InputVector>, const RunOptions&);

    std::size_t cycles_ = 0;
    std::size_t vectors_ = 0;
    int latency_ = 0;
    std::vector<std::vector<std::int64_t>> ints_;
    std::vector<std::vector<double>> floats_;
    std::vector<std::string> labels_;
    std::vector<int> stages_;
    std::vector<double> ccs_;
    std::map<std::string, NodeId> outputs_;
    std::vector<Violation> violations_;
    std::size_t boundary_saturations_ = 0;
};

namespace detail {

inline std::int64_t wrap_to_width(std::int64_t v, int width, Signedness s)
{
    const auto mask = static_cast<std::uint64_t>((std::int64_t{1} << width) - 1);
    auto u = static_cast<std::uint64_t>(v) & mask;
    if (s == Signedness::Signed && (u >> (width - 1)) & 1U)
        u |= ~mask;
    return static_cast<std::int64_t>(u);
}

inline bool compare_values(CompareOp op, double a, double b)
{
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

inline bool compare_values(CompareOp op, std::int64_t a, std::int64_t b)
{
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

} // namespace detail

// Runs vectors.size() + latency cycles. Vector t is presented at cycle t;
// after the last one the final vector is held while the pipeline drains.
inline Trace run(const Design& d, std::span<const InputVector> vectors, const RunOptions& opts = {})
{
    if (!d.scheduled())
        throw GraphError("design '" + d.name() + "' must be scheduled before simulation");
    if (vectors.empty())
        throw RangeError("input stream is empty");
    const auto& nodes = d.nodes();
    const std::size_t n_nodes = nodes.size();
    const std::size_t n_inputs = d.inputs().size();
    for (std::size_t v = 0; v < vectors.size(); ++v)
        if (vectors[v].size() != n_inputs)
            throw RangeError("input vector " + std::to_string(v) + " has " + std::to_string(vectors[v].size()) +
                             " values, design has " + std::to_string(n_inputs) + " inputs");

    Trace tr;
    tr.latency_ = d.latency();
    tr.vectors_ = vectors.size();
    tr.cycles_ = vectors.size() + static_cast<std::size_t>(tr.latency_);
    tr.ints_.resize(n_nodes);
    tr.floats_.resize(n_nodes);
    for (const Node& n : nodes) {
        tr.labels_.push_back(d.label(n.id));
        tr.stages_.push_back(n.stage);
        tr.ccs_.push_back(n.cc());
        if (opts.record_combinational || n.is_stateful()) {
            tr.ints_[n.id].resize(tr.cycles_);
            tr.floats_[n.id].resize(tr.cycles_);
        }
    }
    for (const auto& o : d.outputs())
        tr.outputs_[o.name] = o.node;

    std::vector<std::size_t> input_pos(n_nodes, 0);
    for (std::size_t i = 0; i < n_inputs; ++i)
        input_pos[d.inputs()[i]] = i;

    // state
    std::vector<std::int64_t> cur_i(n_nodes, 0), reg_i(n_nodes, 0);
    std::vector<double> cur_f(n_nodes, 0.0), reg_f(n_nodes, 0.0);
    std::map<NodeId, std::size_t> array_of;
    std::vector<std::vector<std::int64_t>> arr_i;
    std::vector<std::vector<double>> arr_f;
    for (const auto& b : d.buffers()) {
        array_of[b.source] = arr_i.size();
        arr_i.emplace_back(static_cast<std::size_t>(b.depth), 0);
        arr_f.emplace_back(static_cast<std::size_t>(b.depth), 0.0);
    }
    // table read pipelines, index 0 = most recent read
    std::map<NodeId, std::vector<std::int64_t>> pipe_i;
    std::map<NodeId, std::vector<double>> pipe_f;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::lut_read) {
            const auto lat = static_cast<std::size_t>(d.luts()[n.lut].read_latency);
            pipe_i[n.id].assign(lat, 0);
            pipe_f[n.id].assign(lat, 0.0);
        }

    auto violation = [&tr](std::size_t cycle, NodeId id, ViolationKind k, std::string msg) {
        tr.violations_.push_back({cycle, id, k, std::move(msg)});
    };

    for (std::size_t t = 0; t < tr.cycles_; ++t) {
        const InputVector& vec = vectors[std::min(t, vectors.size() - 1)];
        for (const Node& n : nodes) {
            std::int64_t vi = 0;
            double vf = 0.0;
            const auto& ops = n.operands;
            switch (n.kind) {
            case NodeKind::input: {
                const double x = vec[input_pos[n.id]];
                double xq = x;
                if (std::isnan(x) || x < n.fmt.float_min() || x > n.fmt.float_max()) {
                    const std::string msg = "input '" + n.name + "' = " + detail::fmt_double(x) +
                                            " outside [" + detail::fmt_double(n.fmt.float_min()) + ", " +
                                            detail::fmt_double(n.fmt.float_max()) + "] at cycle " +
                                            std::to_string(t);
                    if (!opts.clamp || std::isnan(x))
                        throw RangeError(msg);
                    if (t < vectors.size()) // drain cycles repeat the last vector
                        violation(t, n.id, ViolationKind::input_out_of_range, msg);
                    xq = std::clamp(x, n.fmt.float_min(), n.fmt.float_max());
                }
                vi = to_integer_saturating(xq, n.fmt);
                vf = x;
                if (t < vectors.size() && xq == x && std::abs(xq * n.fmt.conversion_constant()) >= 0.5 &&
                    static_cast<double>(vi) != std::round(xq * n.fmt.conversion_constant()))
                    ++tr.boundary_saturations_;
                break;
            }
            case NodeKind::constant:
                vi = n.const_int;
                vf = n.const_float;
                break;
            case NodeKind::register_assign:
                vi = reg_i[n.id];
                vf = reg_f[n.id];
                break;
            case NodeKind::buffer: {
                const auto a = array_of.at(ops[0]);
                vi = arr_i[a][static_cast<std::size_t>(n.buffer_tap)];
                vf = arr_f[a][static_cast<std::size_t>(n.buffer_tap)];
                break;
            }
            case NodeKind::lut_read:
                vi = pipe_i[n.id].back();
                vf = pipe_f[n.id].back();
                break;
            case NodeKind::add:
                vi = cur_i[ops[0]] + cur_i[ops[1]];
                vf = cur_f[ops[0]] + cur_f[ops[1]];
                break;
            case NodeKind::sub:
                vi = cur_i[ops[0]] - cur_i[ops[1]];
                vf = cur_f[ops[0]] - cur_f[ops[1]];
                break;
            case NodeKind::mul:
                vi = cur_i[ops[0]] * cur_i[ops[1]];
                vf = cur_f[ops[0]] * cur_f[ops[1]];
                break;
            case NodeKind::left_shift:
                vi = cur_i[ops[0]] * (std::int64_t{1} << n.shift);
                vf = n.scales_value ? std::ldexp(cur_f[ops[0]], n.shift) : cur_f[ops[0]];
                break;
            case NodeKind::right_shift:
                vi = cur_i[ops[0]] >> n.shift;
                vf = n.scales_value ? std::ldexp(cur_f[ops[0]], -n.shift) : cur_f[ops[0]];
                break;
            case NodeKind::compare:
                vi = detail::compare_values(n.compare_op, cur_i[ops[0]], cur_i[ops[1]]) ? 1 : 0;
                vf = detail::compare_values(n.compare_op, cur_f[ops[0]], cur_f[ops[1]]) ? 1.0 : 0.0;
                break;
            case NodeKind::select:
                vi = cur_i[ops[0]] != 0 ? cur_i[ops[1]] : cur_i[ops[2]];
                vf = cur_f[ops[0]] != 0.0 ? cur_f[ops[1]] : cur_f[ops[2]];
                break;
            }
            if (!n.fmt.int_range().contains(vi))
                violation(t, n.id, ViolationKind::width_overflow,
                          d.label(n.id) + " = " + std::to_string(vi) + " does not fit " +
                              std::to_string(n.width()) + " bits at cycle " + std::to_string(t));
            cur_i[n.id] = vi;
            cur_f[n.id] = vf;
            if (!tr.ints_[n.id].empty()) {
                tr.ints_[n.id][t] = vi;
                tr.floats_[n.id][t] = vf;
            }
        }

        // clock edge
        for (const Node& n : nodes) {
            if (n.kind == NodeKind::register_assign) {
                reg_i[n.id] = detail::wrap_to_width(cur_i[n.operands[0]], n.width(), n.fmt.signedness());
                reg_f[n.id] = cur_f[n.operands[0]];
            } else if (n.kind == NodeKind::lut_read) {
                const LutSpec& spec = d.luts()[n.lut];
                std::int64_t addr = cur_i[n.operands[0]];
                if (addr < 0 || addr >= spec.depth) {
                    violation(t, n.id, ViolationKind::address_out_of_range,
                              "table '" + spec.name + "' address " + std::to_string(addr) + " at cycle " +
                                  std::to_string(t));
                    addr = std::clamp<std::int64_t>(addr, 0, spec.depth - 1);
                }
                auto& pi = pipe_i[n.id];
                auto& pf = pipe_f[n.id];
                std::rotate(pi.rbegin(), pi.rbegin() + 1, pi.rend());
                std::rotate(pf.rbegin(), pf.rbegin() + 1, pf.rend());
                pi.front() = spec.contents[static_cast<std::size_t>(addr)];
                pf.front() = spec.function(cur_f[n.operands[0]] + spec.in_offset_real()) - spec.out_offset_real();
            }
        }
        for (const auto& b : d.buffers()) {
            const auto a = array_of.at(b.source);
            auto& ai = arr_i[a];
            auto& af = arr_f[a];
            std::rotate(ai.rbegin(), ai.rbegin() + 1, ai.rend());
            std::rotate(af.rbegin(), af.rbegin() + 1, af.rend());
            ai.front() = cur_i[b.source];
            af.front() = cur_f[b.source];
        }
    }
    return tr;
}

inline Trace run(const Design& d, const std::vector<InputVector>& vectors, const RunOptions& opts = {})
{
    return run(d, std::span<const InputVector>(vectors), opts);
}

// Orders named values by Design::inputs().
inline InputVector make_input_vector(const Design& d, const std::map<std::string, double>& named)
{
    InputVector v;
    for (NodeId id : d.inputs()) {
        const auto& nm = d.node(id).name;
        auto it = named.find(nm);
        if (it == named.end())
            throw RangeError("missing value for input '" + nm + "'");
        v.push_back(it->second);
    }
    if (named.size() != d.inputs().size())
        throw RangeError("input vector names unknown inputs");
    return v;
}

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
};

struct PrecisionReport {
    std::string output;
    std::size_t count = 0;
    double mean = 0.0;
    double rms = 0.0;     // sqrt(mean of squares)
    double std_dev = 0.0; // spread about the mean
    double max_abs = 0.0;
    double lsb = 0.0;     // 1 / conversion constant of the output
    Histogram histogram;
};

// Statistics of real_value - float_value of one output over every input
// vector (warm-up and drain cycles excluded).
inline PrecisionReport precision_report(const Trace& trace, const std::string& output, std::size_t bins = 41)
{
    const NodeId id = trace.output_node(output);
    PrecisionReport r;
    r.output = output;
    r.count = trace.vector_count();
    r.lsb = 1.0 / trace.conversion_constant(id);
    if (r.count == 0)
        throw RangeError("empty trace");
    std::vector<double> diff(r.count);
    double sum = 0.0, sq = 0.0;
    for (std::size_t v = 0; v < r.count; ++v) {
        const auto sv = trace.aligned(id, v);
        diff[v] = sv.real_value - sv.float_value;
        sum += diff[v];
        sq += diff[v] * diff[v];
        r.max_abs = std::max(r.max_abs, std::abs(diff[v]));
    }
    const double n = static_cast<double>(r.count);
    r.mean = sum / n;
    r.rms = std::sqrt(sq / n);
    r.std_dev = std::sqrt(std::max(0.0, sq / n - r.mean * r.mean));

    bins = std::max<std::size_t>(bins, 1);
    const double half = r.max_abs > 0.0 ? r.max_abs : r.lsb;
    r.histogram.lo = -half;
    r.histogram.hi = half;
    r.histogram.counts.assign(bins, 0);
    for (double x : diff) {
        auto b = static_cast<std::size_t>((x + half) / (2.0 * half) * static_cast<double>(bins));
        r.histogram.counts[std::min(b, bins - 1)]++;
    }
    return r;
}

struct ResourceEstimate {
    std::size_t dsp = 0;
    std::int64_t bram_bits = 0;
    std::int64_t register_bits = 0;
    std::int64_t ramb36 = 0;
    std::int64_t ramb18 = 0;
};

// Multiplies, table bits and flip-flops of a scheduled design. Buffer arrays
// count width x depth; inputs are ports and are not counted.
inline ResourceEstimate resource_estimate(const Design& d)
{
    if (!d.scheduled())
        throw GraphError("design '" + d.name() + "' must be scheduled");
    ResourceEstimate r;
    r.dsp = d.dsp_count();
    for (const auto& l : d.luts()) {
        r.bram_bits += l.depth * l.word_width;
        const auto b = bram_estimate(l);
        r.ramb36 += b.ramb36;
        r.ramb18 += b.ramb18;
    }
    for (const Node& n : d.nodes())
        if (n.kind == NodeKind::register_assign)
            r.register_bits += n.width();
    for (const auto& b : d.buffers())
        r.register_bits += static_cast<std::int64_t>(d.node(b.source).width()) * b.depth;
    return r;
}

// CSV rows "cycle,node,float,integer,real". Aligned mode lists, for each
// input vector, every named stateful signal at the cycle it holds that
// vector's value; raw mode dumps every recorded node at every cycle.
inline void write_trace_csv(std::ostream& os, const Design& d, const Trace& tr, bool aligned = true)
{
    os << "cycle,node,float,integer,real\n";
    auto row = [&](std::size_t cycle, NodeId id) {
        const auto sv = tr.at(id, cycle);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu,%s,%.9g,%lld,%.9g\n", cycle, tr.label(id).c_str(), sv.float_value,
                      static_cast<long long>(sv.integer_value), sv.real_value);
        os << buf;
    };
    if (aligned) {
        for (std::size_t v = 0; v < tr.vector_count(); ++v)
            for (const Node& n : d.nodes())
                if (n.is_stateful() && n.kind != NodeKind::buffer)
                    row(v + static_cast<std::size_t>(n.stage), n.id);
    } else {
        for (std::size_t t = 0; t < tr.cycle_count(); ++t)
            for (const Node& n : d.nodes())
                if (tr.recorded(n.id))
                    row(t, n.id);
    }
}

} // namespace fxpipe
