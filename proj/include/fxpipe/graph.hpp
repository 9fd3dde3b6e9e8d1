#pragma once

// Dataflow IR for feed-forward pipelines.
//
// Nodes are stored in topological order; an operand id is always smaller
// than the id of its consumer. Stateful nodes (inputs, registers, buffers,
// table reads) hold a value across a clock edge. Everything else is
// combinational and is evaluated within the cycle of its latest operand.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fxp.hpp"
#include "lut_spec.hpp"

namespace fxpipe {

using NodeId = std::uint32_t;

inline constexpr int kDspWideInput = 25;
inline constexpr int kDspNarrowInput = 18;

enum class NodeKind {
    input,
    constant,
    add,
    sub,
    mul,
    left_shift,
    right_shift,
    compare,
    select,
    lut_read,
    buffer,
    register_assign,
};

inline const char* to_string(NodeKind k)
{
    switch (k) {
    case NodeKind::input: return "input";
    case NodeKind::constant: return "constant";
    case NodeKind::add: return "add";
    case NodeKind::sub: return "sub";
    case NodeKind::mul: return "mul";
    case NodeKind::left_shift: return "left_shift";
    case NodeKind::right_shift: return "right_shift";
    case NodeKind::compare: return "compare";
    case NodeKind::select: return "select";
    case NodeKind::lut_read: return "lut_read";
    case NodeKind::buffer: return "buffer";
    case NodeKind::register_assign: return "register_assign";
    }
    return "?";
}

enum class CompareOp { eq, ne, ge, gt, le, lt, logical_and, logical_or };

inline const char* to_string(CompareOp op)
{
    switch (op) {
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
    case CompareOp::ge: return ">=";
    case CompareOp::gt: return ">";
    case CompareOp::le: return "<=";
    case CompareOp::lt: return "<";
    case CompareOp::logical_and: return "&&";
    case CompareOp::logical_or: return "||";
    }
    return "?";
}

inline bool is_logical(CompareOp op) { return op == CompareOp::logical_and || op == CompareOp::logical_or; }

struct Node {
    NodeId id = 0;
    std::string name; // empty for anonymous combinational nodes
    NodeKind kind = NodeKind::constant;
    std::vector<NodeId> operands;
    FixedPointFormat fmt;
    IntRange range;
    int stage = 0;
    bool boolean = false;
    // False for constants and expressions built only from constants. Such
    // nodes are valid at every stage and never need buffering.
    bool has_state = false;

    CompareOp compare_op = CompareOp::eq;
    // Shifts: amount in bits. When scales_value is set the shift multiplies
    // (or divides) the represented real value and the constant is unchanged;
    // otherwise only the constant changes and the real value is preserved.
    int shift = 0;
    bool scales_value = false;
    // Relative scale mismatch left after aligning operand constants.
    double alignment_error = 0.0;

    std::int64_t const_int = 0;
    double const_float = 0.0;

    std::size_t lut = 0;   // lut_read: index into Design::luts()
    int buffer_tap = 0;    // buffer: tap index, delay = tap + 1

    bool is_stateful() const
    {
        return kind == NodeKind::input || kind == NodeKind::register_assign || kind == NodeKind::buffer ||
               kind == NodeKind::lut_read;
    }
    bool is_combinational() const { return !is_stateful() && kind != NodeKind::constant; }
    double cc() const { return fmt.conversion_constant(); }
    int width() const { return fmt.bit_width(); }
};

class Design;

// Lightweight handle to a node of a design under construction.
class Signal {
public:
    Signal() = default;
    Signal(Design* d, NodeId id) : design_(d), id_(id) {}

    NodeId id() const { return id_; }
    Design* design() const { return design_; }
    const Node& node() const;

    friend Signal operator+(Signal a, Signal b);
    friend Signal operator-(Signal a, Signal b);
    friend Signal operator*(Signal a, Signal b);

private:
    Design* design_ = nullptr;
    NodeId id_ = 0;
};

struct AlignResult {
    Signal a;
    Signal b;
    int shift = 0;      // k = round(log2(cc_a / cc_b))
    double error = 0.0; // |cc_shifted / cc_unshifted - 1|
    double cc = 1.0;    // common constant after alignment
};

// One shared delay line per source signal.
struct BufferArray {
    NodeId source = 0;
    int depth = 0;
    std::string name;
};

struct DesignOutput {
    std::string name;
    NodeId node = 0;
};

class Design {
public:
    explicit Design(std::string name = "design") : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    Signal signal(NodeId id) { return Signal(this, id); }
    const std::vector<NodeId>& inputs() const { return inputs_; }
    const std::vector<DesignOutput>& outputs() const { return outputs_; }
    const std::vector<LutSpec>& luts() const { return luts_; }
    const std::vector<BufferArray>& buffers() const { return buffers_; }
    bool scheduled() const { return scheduled_; }

    int latency() const
    {
        if (!scheduled_)
            throw GraphError("design '" + name_ + "' is not scheduled");
        return latency_;
    }

    std::optional<NodeId> find(const std::string& name) const
    {
        auto it = names_.find(name);
        if (it == names_.end())
            return std::nullopt;
        return it->second;
    }

    NodeId output_node(const std::string& name) const
    {
        for (const auto& o : outputs_)
            if (o.name == name)
                return o.node;
        throw GraphError("unknown output '" + name + "'");
    }

    std::size_t dsp_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.kind == NodeKind::mul; }));
    }

    // Display name: anonymous nodes get a synthetic one.
    std::string label(NodeId id) const
    {
        const Node& n = node(id);
        if (n.kind == NodeKind::buffer)
            return n.name + "(" + std::to_string(n.buffer_tap) + ")";
        if (!n.name.empty())
            return n.name;
        return std::string("_") + to_string(n.kind) + std::to_string(id);
    }

    // --- construction -------------------------------------------------

    Signal input(const std::string& name, const FixedPointFormat& fmt)
    {
        Node n;
        n.kind = NodeKind::input;
        n.fmt = fmt;
        n.range = fmt.int_range();
        n.has_state = true;
        Signal s = append(std::move(n), name);
        inputs_.push_back(s.id());
        return s;
    }

    // 1-bit flag input, usable as a condition.
    Signal boolean_input(const std::string& name)
    {
        Node n;
        n.kind = NodeKind::input;
        n.fmt = FixedPointFormat::derived(1, Signedness::Unsigned, 1.0);
        n.range = {0, 1};
        n.boolean = true;
        n.has_state = true;
        Signal s = append(std::move(n), name);
        inputs_.push_back(s.id());
        return s;
    }

    // Literal coefficient quantized with to_integer in the given format.
    Signal constant(double value, const FixedPointFormat& fmt)
    {
        const std::int64_t i = to_integer(value, fmt);
        return make_constant(i, value, fmt.conversion_constant());
    }

    // Exact integer at the given constant; its real value is i / cc.
    Signal constant_integer(std::int64_t i, double cc) { return make_constant(i, static_cast<double>(i) / cc, cc); }

    AlignResult align_constants(Signal a, Signal b)
    {
        check_owned(a);
        check_owned(b);
        const double cca = node(a.id()).cc();
        const double ccb = node(b.id()).cc();
        AlignResult r;
        r.a = a;
        r.b = b;
        if (same_constant(node(a.id()).fmt, node(b.id()).fmt)) {
            r.cc = cca;
            return r;
        }
        const int k = static_cast<int>(std::lround(std::log2(cca / ccb)));
        r.shift = k;
        if (k > 0) {
            r.b = make_shift(NodeKind::left_shift, b, k, false);
            r.cc = cca;
            r.error = std::abs(std::ldexp(ccb, k) / cca - 1.0);
        } else {
            if (k < 0)
                r.a = make_shift(NodeKind::left_shift, a, -k, false);
            r.cc = ccb;
            r.error = std::abs(std::ldexp(cca, -k) / ccb - 1.0);
        }
        return r;
    }

    Signal add(Signal a, Signal b) { return add_sub(NodeKind::add, a, b); }
    Signal sub(Signal a, Signal b) { return add_sub(NodeKind::sub, a, b); }

    // Single-DSP multiply: operands are right-shifted to 25 and 18 bits,
    // the wider one taking the 25-bit port.
    Signal mul(Signal a, Signal b)
    {
        require_numeric(a, "mul");
        require_numeric(b, "mul");
        const bool a_wide = node(a.id()).width() >= node(b.id()).width();
        Signal ra = reduce_to_width(a, a_wide ? kDspWideInput : kDspNarrowInput);
        Signal rb = reduce_to_width(b, a_wide ? kDspNarrowInput : kDspWideInput);
        const Node& na = node(ra.id());
        const Node& nb = node(rb.id());
        const __int128 p[4] = {
            static_cast<__int128>(na.range.lo) * nb.range.lo,
            static_cast<__int128>(na.range.lo) * nb.range.hi,
            static_cast<__int128>(na.range.hi) * nb.range.lo,
            static_cast<__int128>(na.range.hi) * nb.range.hi,
        };
        Node n;
        n.kind = NodeKind::mul;
        n.operands = {ra.id(), rb.id()};
        n.range = checked_range(*std::min_element(p, p + 4), *std::max_element(p, p + 4), "mul");
        n.fmt = derived_format(n.range, na.cc() * nb.cc());
        return append_combinational(std::move(n));
    }

    Signal compare(Signal a, CompareOp op, Signal b)
    {
        check_owned(a);
        check_owned(b);
        const bool ba = node(a.id()).boolean;
        const bool bb = node(b.id()).boolean;
        Node n;
        n.kind = NodeKind::compare;
        n.compare_op = op;
        if (is_logical(op)) {
            if (!ba || !bb)
                throw GraphError(std::string("operator ") + to_string(op) + " needs boolean operands");
            n.operands = {a.id(), b.id()};
        } else if (ba != bb) {
            throw GraphError(std::string("operator ") + to_string(op) + " mixes boolean and numeric operands");
        } else if (ba) {
            n.operands = {a.id(), b.id()};
        } else {
            auto al = align_constants(a, b);
            n.operands = {al.a.id(), al.b.id()};
            n.alignment_error = al.error;
        }
        n.fmt = FixedPointFormat::derived(1, Signedness::Unsigned, 1.0);
        n.range = {0, 1};
        n.boolean = true;
        return append_combinational(std::move(n));
    }

    Signal select(Signal cond, Signal then_val, Signal else_val)
    {
        check_owned(cond);
        if (!node(cond.id()).boolean)
            throw GraphError("select condition must be boolean");
        const bool bt = node(then_val.id()).boolean;
        const bool be = node(else_val.id()).boolean;
        if (bt != be)
            throw GraphError("select branches mix boolean and numeric values");
        Node n;
        n.kind = NodeKind::select;
        double cc = 1.0;
        if (bt) {
            n.operands = {cond.id(), then_val.id(), else_val.id()};
            n.boolean = true;
        } else {
            auto al = align_constants(then_val, else_val);
            n.operands = {cond.id(), al.a.id(), al.b.id()};
            n.alignment_error = al.error;
            cc = al.cc;
        }
        const IntRange& rt = node(n.operands[1]).range;
        const IntRange& re = node(n.operands[2]).range;
        n.range = {std::min(rt.lo, re.lo), std::max(rt.hi, re.hi)};
        n.fmt = bt ? FixedPointFormat::derived(1, Signedness::Unsigned, 1.0) : derived_format(n.range, cc);
        return append_combinational(std::move(n));
    }

    // Multiply the represented value by 2^k (k may be negative; a right
    // shift floors).
    Signal mul_pow2(Signal x, int k)
    {
        require_numeric(x, "mul_pow2");
        if (k == 0)
            return x;
        return k > 0 ? make_shift(NodeKind::left_shift, x, k, true) : make_shift(NodeKind::right_shift, x, -k, true);
    }

    // Move x to the power-of-two multiple of its constant closest to target_cc.
    Signal requantize(Signal x, double target_cc)
    {
        require_numeric(x, "requantize");
        if (!(target_cc > 0.0))
            throw FormatError("requantize: target constant must be positive");
        const int k = static_cast<int>(std::lround(std::log2(node(x.id()).cc() / target_cc)));
        if (k > 0)
            return make_shift(NodeKind::right_shift, x, k, false);
        if (k < 0)
            return make_shift(NodeKind::left_shift, x, -k, false);
        return x;
    }

    // Drop low-order bits until the word fits in max_width bits.
    Signal reduce_to_width(Signal x, int max_width)
    {
        require_numeric(x, "reduce_to_width");
        if (max_width < 1)
            throw FormatError("reduce_to_width: width must be positive");
        while (node(x.id()).width() > max_width)
            x = make_shift(NodeKind::right_shift, x, node(x.id()).width() - max_width, false);
        return x;
    }

    // Clocked assignment: the result is registered one cycle after the
    // latest stateful leaf of expr.
    Signal assign(const std::string& name, Signal expr)
    {
        check_owned(expr);
        check_select_placement(expr.id(), true);
        const Node& e = node(expr.id());
        Node n;
        n.kind = NodeKind::register_assign;
        n.operands = {expr.id()};
        n.fmt = e.fmt;
        n.range = e.range;
        n.boolean = e.boolean;
        n.has_state = true;
        n.stage = e.stage + 1;
        return append(std::move(n), name);
    }

    void output(const std::string& name, Signal s)
    {
        check_owned(s);
        const Node& n = node(s.id());
        if (n.kind != NodeKind::input && n.kind != NodeKind::register_assign)
            throw GraphError("output '" + name + "' must be an input or a clocked assignment");
        if (name.empty())
            throw GraphError("output name must not be empty");
        for (const auto& o : outputs_)
            if (o.name == name)
                throw GraphError("duplicate output '" + name + "'");
        outputs_.push_back({name, s.id()});
    }

    // Used by build_lut: registers a table and its synchronous read node.
    Signal add_lut_read(LutSpec spec, Signal address, const std::string& name)
    {
        check_owned(address);
        const Node& a = node(address.id());
        if (a.kind != NodeKind::register_assign)
            throw GraphError("table address must be registered");
        if (spec.read_latency < 1)
            throw LutError("read latency must be at least one cycle");
        std::int64_t max_word = 0;
        for (auto v : spec.contents)
            max_word = std::max(max_word, v);
        Node n;
        n.kind = NodeKind::lut_read;
        n.operands = {address.id()};
        n.range = {0, max_word};
        n.fmt = FixedPointFormat::derived(spec.word_width, Signedness::Unsigned, spec.out_fmt.conversion_constant());
        n.has_state = true;
        n.stage = a.stage + spec.read_latency;
        n.lut = luts_.size();
        luts_.push_back(std::move(spec));
        return append(std::move(n), name);
    }

    // --- scheduling ----------------------------------------------------

    friend Design insert_buffers(const Design& d);
    friend int schedule(Design& d);

private:
    Signal make_constant(std::int64_t i, double value, double cc)
    {
        Node n;
        n.kind = NodeKind::constant;
        n.const_int = i;
        n.const_float = value;
        n.range = {i, i};
        n.fmt = derived_format(n.range, cc);
        return append(std::move(n), "");
    }

    Signal add_sub(NodeKind kind, Signal a, Signal b)
    {
        const char* what = kind == NodeKind::add ? "add" : "sub";
        require_numeric(a, what);
        require_numeric(b, what);
        auto al = align_constants(a, b);
        const IntRange& ra = node(al.a.id()).range;
        const IntRange& rb = node(al.b.id()).range;
        Node n;
        n.kind = kind;
        n.operands = {al.a.id(), al.b.id()};
        n.alignment_error = al.error;
        if (kind == NodeKind::add)
            n.range = checked_range(static_cast<__int128>(ra.lo) + rb.lo, static_cast<__int128>(ra.hi) + rb.hi, what);
        else
            n.range = checked_range(static_cast<__int128>(ra.lo) - rb.hi, static_cast<__int128>(ra.hi) - rb.lo, what);
        n.fmt = derived_format(n.range, al.cc);
        return append_combinational(std::move(n));
    }

    Signal make_shift(NodeKind kind, Signal x, int k, bool scales_value)
    {
        const Node& src = node(x.id());
        if (k <= 0 || k > kMaxBitWidth)
            throw GraphError("shift amount out of range");
        Node n;
        n.kind = kind;
        n.operands = {x.id()};
        n.shift = k;
        n.scales_value = scales_value;
        double cc = src.cc();
        if (kind == NodeKind::left_shift) {
            n.range = checked_range(static_cast<__int128>(src.range.lo) * (__int128{1} << k),
                                    static_cast<__int128>(src.range.hi) * (__int128{1} << k), "left shift");
            if (!scales_value)
                cc = std::ldexp(cc, k);
        } else {
            n.range = {src.range.lo >> k, src.range.hi >> k};
            if (!scales_value)
                cc = std::ldexp(cc, -k);
        }
        n.fmt = derived_format(n.range, cc);
        return append_combinational(std::move(n));
    }

    static IntRange checked_range(__int128 lo, __int128 hi, const char* what)
    {
        const __int128 limit = __int128{1} << kMaxBitWidth;
        if (lo < -limit / 2 || hi >= limit)
            throw GraphError(std::string(what) + ": result range would exceed " + std::to_string(kMaxBitWidth) +
                             " bits");
        IntRange r{static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
        const auto s = r.lo >= 0 ? Signedness::Unsigned : Signedness::Signed;
        if (min_width_for_integer_range(r, s) > kMaxBitWidth)
            throw GraphError(std::string(what) + ": result range would exceed " + std::to_string(kMaxBitWidth) +
                             " bits");
        return r;
    }

    // Derived results are unsigned exactly when their range is non-negative.
    static FixedPointFormat derived_format(const IntRange& r, double cc)
    {
        const auto s = r.lo >= 0 ? Signedness::Unsigned : Signedness::Signed;
        return FixedPointFormat::derived(min_width_for_integer_range(r, s), s, cc);
    }

    void check_owned(Signal s) const
    {
        if (s.design() != this || s.id() >= nodes_.size())
            throw GraphError("signal does not belong to design '" + name_ + "'");
    }

    void require_numeric(Signal s, const char* what) const
    {
        check_owned(s);
        if (node(s.id()).boolean)
            throw GraphError(std::string(what) + ": boolean operand where a number is expected");
    }

    // A select must be the root of a clocked assignment.
    void check_select_placement(NodeId id, bool is_root) const
    {
        const Node& n = node(id);
        if (!n.is_combinational())
            return;
        if (n.kind == NodeKind::select && !is_root)
            throw GraphError("select may only appear at the root of a clocked assignment");
        for (std::size_t i = 0; i < n.operands.size(); ++i) {
            // the condition of a root select may itself be a compare tree
            check_select_placement(n.operands[i], false);
        }
    }

    Signal append_combinational(Node n)
    {
        bool state = false;
        int stage = 0;
        for (NodeId op : n.operands) {
            const Node& o = node(op);
            if (o.has_state) {
                state = true;
                stage = std::max(stage, o.stage);
            }
        }
        n.has_state = state;
        n.stage = stage;
        return append(std::move(n), "");
    }

    Signal append(Node n, const std::string& name)
    {
        if (scheduled_)
            throw GraphError("design '" + name_ + "' is frozen");
        if (!name.empty()) {
            if (names_.count(name))
                throw GraphError("duplicate signal name '" + name + "'");
            names_[name] = static_cast<NodeId>(nodes_.size());
        } else if (n.is_stateful()) {
            throw GraphError(std::string(to_string(n.kind)) + " needs a name");
        }
        n.name = name;
        n.id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back(std::move(n));
        return Signal(this, nodes_.back().id);
    }

    std::string name_;
    std::vector<Node> nodes_;
    std::vector<NodeId> inputs_;
    std::vector<DesignOutput> outputs_;
    std::vector<LutSpec> luts_;
    std::vector<BufferArray> buffers_;
    std::map<std::string, NodeId> names_;
    bool scheduled_ = false;
    int latency_ = 0;
};

inline const Node& Signal::node() const
{
    if (!design_)
        throw GraphError("empty signal handle");
    return design_->node(id_);
}

inline Signal operator+(Signal a, Signal b)
{
    if (!a.design_)
        throw GraphError("empty signal handle");
    return a.design_->add(a, b);
}

inline Signal operator-(Signal a, Signal b)
{
    if (!a.design_)
        throw GraphError("empty signal handle");
    return a.design_->sub(a, b);
}

inline Signal operator*(Signal a, Signal b)
{
    if (!a.design_)
        throw GraphError("empty signal handle");
    return a.design_->mul(a, b);
}

// Returns a copy of d in which every lagging operand of a combinational node
// reads a delayed copy of its source. Delays on stateful signals become taps
// of one shared buffer array per source; a lagging combinational operand is
// cloned with its own stateful leaves delayed instead.
inline Design insert_buffers(const Design& d)
{
    if (d.scheduled_)
        return d;
    Design out(d.name_);
    out.luts_ = d.luts_;
    std::vector<NodeId> remap(d.nodes_.size());
    std::map<std::pair<NodeId, int>, NodeId> delayed_memo; // (old id, delay) -> new id
    std::map<NodeId, std::size_t> array_of;                // new source id -> buffers_ index
    std::map<std::pair<NodeId, int>, NodeId> tap_memo;     // (new source id, tap) -> new id

    auto push = [&out](Node n) {
        n.id = static_cast<NodeId>(out.nodes_.size());
        if (!n.name.empty() && n.kind != NodeKind::buffer)
            out.names_[n.name] = n.id;
        out.nodes_.push_back(std::move(n));
        return out.nodes_.back().id;
    };

    auto tap = [&](NodeId src, int delay) -> NodeId {
        // a tap of a tap extends the original array
        int base = 0;
        if (out.nodes_[src].kind == NodeKind::buffer) {
            base = out.nodes_[src].buffer_tap + 1;
            src = out.nodes_[src].operands[0];
        }
        const int t = base + delay - 1;
        if (auto it = tap_memo.find({src, t}); it != tap_memo.end())
            return it->second;
        const Node& s = out.nodes_[src];
        auto ai = array_of.find(src);
        if (ai == array_of.end()) {
            const std::string nm = s.name + "_b";
            if (out.names_.count(nm) || d.names_.count(nm))
                throw GraphError("buffer name '" + nm + "' collides with an existing signal");
            out.buffers_.push_back({src, 0, nm});
            ai = array_of.emplace(src, out.buffers_.size() - 1).first;
        }
        BufferArray& arr = out.buffers_[ai->second];
        arr.depth = std::max(arr.depth, t + 1);
        Node b;
        b.kind = NodeKind::buffer;
        b.name = arr.name;
        b.operands = {src};
        b.fmt = s.fmt;
        b.range = s.range;
        b.boolean = s.boolean;
        b.has_state = true;
        b.stage = s.stage + t + 1;
        b.buffer_tap = t;
        NodeId id = push(std::move(b));
        tap_memo[{src, t}] = id;
        return id;
    };

    auto delayed = [&](auto& self, NodeId old_id, int delay) -> NodeId {
        if (auto it = delayed_memo.find({old_id, delay}); it != delayed_memo.end())
            return it->second;
        const Node& o = d.nodes_[old_id];
        NodeId r;
        if (o.is_stateful()) {
            r = tap(remap[old_id], delay);
        } else {
            Node c = o;
            for (auto& op : c.operands)
                op = d.nodes_[op].has_state ? self(self, op, delay) : remap[op];
            c.name.clear();
            c.stage = o.stage + delay;
            r = push(std::move(c));
        }
        delayed_memo[{old_id, delay}] = r;
        return r;
    };

    for (const Node& o : d.nodes_) {
        Node c = o;
        if (o.is_combinational()) {
            for (auto& op : c.operands) {
                const Node& on = d.nodes_[op];
                if (on.has_state && on.stage < o.stage)
                    op = delayed(delayed, op, o.stage - on.stage);
                else
                    op = remap[op];
            }
        } else if (o.kind == NodeKind::buffer) {
            // already buffered: keep the tap and its array
            NodeId src = remap[o.operands[0]];
            remap[o.id] = tap(src, o.buffer_tap + 1);
            continue;
        } else {
            for (auto& op : c.operands)
                op = remap[op];
        }
        remap[o.id] = push(std::move(c));
    }
    for (NodeId i : d.inputs_)
        out.inputs_.push_back(remap[i]);
    for (const auto& o : d.outputs_)
        out.outputs_.push_back({o.name, remap[o.node]});
    return out;
}

// Recomputes and verifies stages, freezes the design, returns the latency.
inline int schedule(Design& d)
{
    if (d.scheduled_)
        return d.latency_;
    std::vector<int> stage(d.nodes_.size(), 0);
    std::vector<char> state(d.nodes_.size(), 0);
    for (const Node& n : d.nodes_) {
        for (NodeId op : n.operands)
            if (op >= n.id)
                throw GraphError("cycle detected at node " + d.label(n.id));
        int s = 0;
        bool st = false;
        switch (n.kind) {
        case NodeKind::input:
            st = true;
            break;
        case NodeKind::constant:
            break;
        case NodeKind::register_assign:
            s = stage[n.operands[0]] + 1;
            st = true;
            break;
        case NodeKind::lut_read:
            s = stage[n.operands[0]] + d.luts_.at(n.lut).read_latency;
            st = true;
            break;
        case NodeKind::buffer:
            s = stage[n.operands[0]] + n.buffer_tap + 1;
            st = true;
            break;
        default: {
            std::optional<int> common;
            for (NodeId op : n.operands) {
                if (!state[op])
                    continue;
                if (common && *common != stage[op])
                    throw GraphError("operands of " + d.label(n.id) + " arrive at different stages; insert buffers first");
                common = stage[op];
                st = true;
            }
            s = common.value_or(0);
        }
        }
        if (s != n.stage)
            throw GraphError("stage bookkeeping mismatch at " + d.label(n.id));
        stage[n.id] = s;
        state[n.id] = st;
    }
    int latency = 0;
    for (const auto& o : d.outputs_)
        latency = std::max(latency, stage[o.node]);
    d.latency_ = latency;
    d.scheduled_ = true;
    return latency;
}

// insert_buffers followed by schedule.
inline Design freeze(const Design& d)
{
    Design f = insert_buffers(d);
    schedule(f);
    return f;
}

} // namespace fxpipe
