#pragma once

// VHDL backend. Stateful nodes become signals; combinational nodes are
// inlined into the clocked assignment that consumes them. All arithmetic
// uses ieee.numeric_std. Conditional assignments inside the clocked process
// need VHDL-2008.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace fxpipe {

struct DesignUnit {
    std::string entity_name;
    std::vector<std::string> declarations;      // signals and components
    std::vector<std::string> buffer_type_decls; // array type + array signal, in pairs
    std::vector<std::string> sequential_statements;
    std::vector<std::string> concurrent_statements; // table instances, output drivers
    std::string full_text;
};

namespace vhdl_detail {

inline const std::set<std::string>& reserved_words()
{
    static const std::set<std::string> words = {
        "abs", "access", "after", "alias", "all", "and", "architecture", "array", "assert", "assume",
        "attribute", "begin", "block", "body", "buffer", "bus", "case", "component", "configuration",
        "constant", "context", "cover", "default", "disconnect", "downto", "else", "elsif", "end", "entity",
        "exit", "fairness", "file", "for", "force", "function", "generate", "generic", "group", "guarded",
        "if", "impure", "in", "inertial", "inout", "is", "label", "library", "linkage", "literal", "loop",
        "map", "mod", "nand", "new", "next", "nor", "not", "null", "of", "on", "open", "or", "others", "out",
        "package", "parameter", "port", "postponed", "procedure", "process", "property", "protected", "pure",
        "range", "record", "register", "reject", "release", "rem", "report", "restrict", "return", "rol",
        "ror", "select", "sequence", "severity", "shared", "signal", "sla", "sll", "sra", "srl", "strong",
        "subtype", "then", "to", "transport", "type", "unaffected", "units", "until", "use", "variable",
        "vmode", "vprop", "vunit", "wait", "when", "while", "with", "xnor", "xor",
        // names the generated code relies on
        "ieee", "std_logic", "std_logic_vector", "signed", "unsigned", "resize", "shift_left", "shift_right",
        "to_signed", "to_unsigned", "rising_edge", "numeric_std", "std_logic_1164", "rtl",
    };
    return words;
}

inline std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline bool valid_identifier(const std::string& s)
{
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])) || s.back() == '_')
        return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (!std::isalnum(c) && c != '_')
            return false;
        if (c == '_' && i + 1 < s.size() && s[i + 1] == '_')
            return false;
    }
    return true;
}

// Identifiers are case-insensitive in VHDL.
class NameTable {
public:
    void claim(const std::string& name)
    {
        if (!valid_identifier(name))
            throw VhdlError("'" + name + "' is not a valid VHDL identifier");
        const auto l = lower(name);
        if (reserved_words().count(l))
            throw VhdlError("'" + name + "' collides with a VHDL reserved word");
        if (!seen_.insert(l).second)
            throw VhdlError("'" + name + "' is declared twice (VHDL names are case-insensitive)");
    }

private:
    std::set<std::string> seen_;
};

struct Expr {
    std::string text;
    int width = 1;
    Signedness sign = Signedness::Unsigned;
    bool atomic = true; // safe to use as an operand without parentheses
};

inline std::string type_name(Signedness s) { return s == Signedness::Signed ? "signed" : "unsigned"; }

inline std::string range_text(int width) { return "(" + std::to_string(width - 1) + " downto 0)"; }

inline std::string array_type_name(const Node& n, int depth)
{
    return std::string(n.fmt.is_signed() ? "S" : "U") + std::to_string(n.width()) + "D" + std::to_string(depth) +
           "Array";
}

inline std::string compare_token(CompareOp op)
{
    switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::ne: return "/=";
    case CompareOp::ge: return ">=";
    case CompareOp::gt: return ">";
    case CompareOp::le: return "<=";
    case CompareOp::lt: return "<";
    case CompareOp::logical_and: return "and";
    case CompareOp::logical_or: return "or";
    }
    return "?";
}

class Renderer {
public:
    explicit Renderer(const Design& d) : d_(d) {}

    std::string signal_name(NodeId id) const
    {
        const Node& n = d_.node(id);
        if (n.kind == NodeKind::buffer)
            return n.name + "(" + std::to_string(n.buffer_tap) + ")";
        return n.name;
    }

    // Expression with exactly the node's width and signedness.
    Expr value(NodeId id) const
    {
        const Node& n = d_.node(id);
        const Signedness s = n.fmt.signedness();
        const int w = n.width();
        switch (n.kind) {
        case NodeKind::input:
        case NodeKind::register_assign:
        case NodeKind::buffer:
        case NodeKind::lut_read:
            return {signal_name(id), w, s, true};
        case NodeKind::constant:
            return {constant_literal(n.const_int, w, s), w, s, true};
        case NodeKind::add:
        case NodeKind::sub:
            return arithmetic(n, n.kind == NodeKind::add ? "+" : "-");
        case NodeKind::mul: {
            Expr a = value(n.operands[0]);
            Expr b = value(n.operands[1]);
            const Signedness dom = (a.sign == Signedness::Unsigned && b.sign == Signedness::Unsigned)
                                       ? Signedness::Unsigned
                                       : Signedness::Signed;
            a = to_domain(a, dom);
            b = to_domain(b, dom);
            Expr p{paren(a) + "*" + paren(b), a.width + b.width, dom, false};
            return finish(p, w, s);
        }
        case NodeKind::left_shift: {
            const Expr x = value(n.operands[0]);
            return {"shift_left(" + resize_text(x, w) + "," + std::to_string(n.shift) + ")", w, s, true};
        }
        case NodeKind::right_shift: {
            const Expr x = value(n.operands[0]);
            Expr r{"shift_right(" + x.text + "," + std::to_string(n.shift) + ")", x.width, x.sign, true};
            return finish(r, w, s);
        }
        case NodeKind::compare:
            throw VhdlError("comparison " + d_.label(id) + " used as a number; register it first");
        case NodeKind::select:
            throw VhdlError("select " + d_.label(id) + " must be the root of a clocked assignment");
        }
        return {};
    }

    // Boolean-typed condition text.
    std::string condition(NodeId id) const
    {
        const Node& n = d_.node(id);
        if (!n.boolean)
            throw VhdlError("condition " + d_.label(id) + " is not boolean");
        if (n.kind == NodeKind::compare) {
            const Node& a = d_.node(n.operands[0]);
            if (a.boolean)
                return "(" + condition(n.operands[0]) + " " + compare_token(n.compare_op) + " " +
                       condition(n.operands[1]) + ")";
            Expr x = value(n.operands[0]);
            Expr y = value(n.operands[1]);
            if (x.sign != y.sign) {
                x = to_domain(x, Signedness::Signed);
                y = to_domain(y, Signedness::Signed);
            }
            return "(" + x.text + " " + compare_token(n.compare_op) + " " + y.text + ")";
        }
        if (n.kind == NodeKind::select)
            throw VhdlError("select " + d_.label(id) + " must be the root of a clocked assignment");
        if (n.kind == NodeKind::constant)
            return n.const_int ? "true" : "false";
        return "(" + value(id).text + " = \"1\")";
    }

    // Right-hand side of the clocked statement of a register.
    std::string register_statement(const Node& reg) const
    {
        const Node& e = d_.node(reg.operands[0]);
        const std::string lhs = signal_name(reg.id);
        if (e.kind == NodeKind::compare)
            return lhs + " <= \"1\" when " + condition(e.id) + " else \"0\";";
        if (e.kind == NodeKind::select) {
            const Expr t = adapt(value(e.operands[1]), reg.width(), reg.fmt.signedness());
            const Expr f = adapt(value(e.operands[2]), reg.width(), reg.fmt.signedness());
            return lhs + " <= " + t.text + " when " + condition(e.operands[0]) + " else " + f.text + ";";
        }
        const Expr v = adapt(value(e.id), reg.width(), reg.fmt.signedness());
        return lhs + " <= " + v.text + ";";
    }

private:
    static std::string paren(const Expr& e) { return e.atomic ? e.text : "(" + e.text + ")"; }

    static std::string constant_literal(std::int64_t v, int w, Signedness s)
    {
        if (v >= -(std::int64_t{1} << 31) + 1 && v < (std::int64_t{1} << 31) - 1)
            return (s == Signedness::Signed ? "to_signed(" : "to_unsigned(") + std::to_string(v) + "," +
                   std::to_string(w) + ")";
        std::string bits(static_cast<std::size_t>(w), '0');
        const auto u = static_cast<std::uint64_t>(v);
        for (int i = 0; i < w; ++i)
            bits[static_cast<std::size_t>(w - 1 - i)] = ((u >> i) & 1U) ? '1' : '0';
        return type_name(s) + "'(\"" + bits + "\")";
    }

    static std::string resize_text(const Expr& x, int w)
    {
        if (x.width == w)
            return x.text;
        return "resize(" + x.text + "," + std::to_string(w) + ")";
    }

    // Reinterpret an unsigned operand as signed, one bit wider.
    static Expr to_domain(const Expr& e, Signedness dom)
    {
        if (e.sign == dom)
            return e;
        if (dom == Signedness::Unsigned)
            throw VhdlError("internal: signed operand in unsigned arithmetic");
        return {"signed(resize(" + e.text + "," + std::to_string(e.width + 1) + "))", e.width + 1, dom, true};
    }

    // Bring a working-domain result to the node's width and signedness; the
    // value is known to fit.
    static Expr finish(const Expr& e, int w, Signedness s)
    {
        if (e.sign == s) {
            if (e.width == w)
                return e;
            return {"resize(" + e.text + "," + std::to_string(w) + ")", w, s, true};
        }
        if (s == Signedness::Unsigned)
            return {"resize(unsigned(" + e.text + ")," + std::to_string(w) + ")", w, s, true};
        return {"signed(resize(" + e.text + "," + std::to_string(w) + "))", w, s, true};
    }

    // Widen a value into a target word whose range contains it.
    static Expr adapt(const Expr& e, int w, Signedness s)
    {
        if (e.sign == s)
            return {resize_text(e, w), w, s, e.width == w ? e.atomic : true};
        if (s == Signedness::Signed)
            return {"signed(resize(" + e.text + "," + std::to_string(w) + "))", w, s, true};
        return {"resize(unsigned(" + e.text + ")," + std::to_string(w) + ")", w, s, true};
    }

    // numeric_std "+"/"-" yields the wider operand's length, so only one
    // operand needs to reach the working width (the first, when neither does).
    Expr arithmetic(const Node& n, const char* op) const
    {
        const int w = n.width();
        const Signedness s = n.fmt.signedness();
        Expr a = value(n.operands[0]);
        Expr b = value(n.operands[1]);
        const Signedness dom = (s == Signedness::Unsigned && a.sign == Signedness::Unsigned &&
                                b.sign == Signedness::Unsigned)
                                   ? Signedness::Unsigned
                                   : Signedness::Signed;
        a = to_domain(a, dom);
        b = to_domain(b, dom);
        int wk = w + ((dom == Signedness::Signed && s == Signedness::Unsigned) ? 1 : 0);
        wk = std::max({wk, a.width, b.width});
        if (a.width != wk && b.width != wk)
            a = {"resize(" + a.text + "," + std::to_string(wk) + ")", wk, dom, true};
        Expr r{paren(a) + op + paren(b), wk, dom, false};
        return finish(r, w, s);
    }

    const Design& d_;
};

inline std::string port_name(const DesignOutput& o) { return o.name + "_out"; }

inline std::string rom_component(const std::string& entity, const LutSpec& l) { return entity + "_" + l.name + "_rom"; }

} // namespace vhdl_detail

// Builds every piece of the VHDL for a scheduled design. With as_entity the
// inputs become ports and are not declared as signals; otherwise an input is
// declared only when something other than its buffer reads it directly.
inline DesignUnit render_design(const Design& d, const std::string& entity_name, const std::string& clock_name,
                                bool as_entity)
{
    using namespace vhdl_detail;
    if (!d.scheduled())
        throw VhdlError("design '" + d.name() + "' must be scheduled before emitting VHDL");
    DesignUnit u;
    u.entity_name = entity_name;
    NameTable names;
    if (as_entity) {
        names.claim(entity_name);
        names.claim(clock_name);
    }
    Renderer r(d);

    std::vector<char> direct_use(d.nodes().size(), 0);
    for (const Node& n : d.nodes())
        if (n.kind != NodeKind::buffer)
            for (NodeId op : n.operands)
                direct_use[op] = 1;

    for (const Node& n : d.nodes()) {
        if (n.kind == NodeKind::input) {
            names.claim(n.name);
            if (as_entity || !direct_use[n.id])
                continue;
        } else if (n.kind == NodeKind::register_assign || n.kind == NodeKind::lut_read) {
            names.claim(n.name);
        } else {
            continue;
        }
        u.declarations.push_back("signal " + n.name + " : " + type_name(n.fmt.signedness()) +
                                 range_text(n.width()) + " := (others=>'0');");
    }
    std::set<std::string> types;
    for (const auto& b : d.buffers()) {
        const Node& src = d.node(b.source);
        const std::string tn = array_type_name(src, b.depth);
        names.claim(b.name);
        if (types.insert(tn).second) {
            names.claim(tn);
            u.buffer_type_decls.push_back("type " + tn + " is array(" + std::to_string(b.depth - 1) + " downto 0) of " +
                                          type_name(src.fmt.signedness()) + range_text(src.width()) + ";");
        }
        u.buffer_type_decls.push_back("signal " + b.name + " : " + tn + " := (others=>(others=>'0'));");
    }
    for (const Node& n : d.nodes()) {
        if (n.kind != NodeKind::lut_read)
            continue;
        const LutSpec& l = d.luts()[n.lut];
        const std::string comp = rom_component(entity_name, l);
        names.claim(comp);
        names.claim(l.name + "_rom");
        const Node& addr = d.node(n.operands[0]);
        u.declarations.push_back("-- " + l.name + ": " + std::to_string(l.depth) + " x " +
                                 std::to_string(l.word_width) + " ROM, read latency " +
                                 std::to_string(l.read_latency) + ", contents in " + entity_name + "_" + l.name +
                                 ".coe");
        u.declarations.push_back("component " + comp + " port (clka : in std_logic; addra : in std_logic_vector" +
                                 range_text(addr.width()) + "; douta : out std_logic_vector" +
                                 range_text(l.word_width) + "); end component;");
        u.concurrent_statements.push_back(l.name + "_rom : " + comp + " port map (clka => " + clock_name +
                                          ", addra => std_logic_vector(" + addr.name + "), unsigned(douta) => " +
                                          n.name + ");");
    }

    for (const Node& n : d.nodes())
        if (n.kind == NodeKind::register_assign)
            u.sequential_statements.push_back(r.register_statement(n));
    for (const auto& b : d.buffers()) {
        u.sequential_statements.push_back(b.name + "(0) <= " + r.signal_name(b.source) + ";");
        for (int i = 1; i < b.depth; ++i)
            u.sequential_statements.push_back(b.name + "(" + std::to_string(i) + ") <= " + b.name + "(" +
                                              std::to_string(i - 1) + ");");
    }

    if (!as_entity)
        return u;

    for (const auto& o : d.outputs()) {
        names.claim(port_name(o));
        u.concurrent_statements.push_back(port_name(o) + " <= " + r.signal_name(o.node) + ";");
    }

    std::ostringstream os;
    os << "-- Generated by fxpipe. Requires VHDL-2008.\n";
    os << "library ieee;\nuse ieee.std_logic_1164.all;\nuse ieee.numeric_std.all;\n\n";
    os << "entity " << entity_name << " is\n  port (\n    " << clock_name << " : in std_logic";
    for (NodeId id : d.inputs()) {
        const Node& n = d.node(id);
        os << ";\n    " << n.name << " : in " << type_name(n.fmt.signedness()) << range_text(n.width());
    }
    for (const auto& o : d.outputs()) {
        const Node& n = d.node(o.node);
        os << ";\n    " << port_name(o) << " : out " << type_name(n.fmt.signedness()) << range_text(n.width());
    }
    os << "\n  );\nend entity " << entity_name << ";\n\n";
    os << "architecture rtl of " << entity_name << " is\n";
    for (const auto& l : u.declarations)
        os << "  " << l << "\n";
    for (const auto& l : u.buffer_type_decls)
        os << "  " << l << "\n";
    os << "begin\n";
    for (const auto& l : u.concurrent_statements)
        os << "  " << l << "\n";
    os << "  process (" << clock_name << ")\n  begin\n    if rising_edge(" << clock_name << ") then\n";
    for (const auto& l : u.sequential_statements)
        os << "      " << l << "\n";
    os << "    end if;\n  end process;\nend architecture rtl;\n";
    u.full_text = os.str();
    return u;
}

// Signal, component and buffer array declarations, one per line.
inline std::string emit_declarations(const Design& d)
{
    const auto u = render_design(d, d.name(), "clk", false);
    std::string s = "-- Define signals\n";
    for (const auto& l : u.declarations)
        s += l + "\n";
    for (const auto& l : u.buffer_type_decls)
        s += l + "\n";
    return s;
}

// Statements of the clocked process, one per line.
inline std::string emit_sequential(const Design& d)
{
    const auto u = render_design(d, d.name(), "clk", false);
    std::string s = "-- Sequential logic\n";
    for (const auto& l : u.sequential_statements)
        s += l + "\n";
    return s;
}

// Complete file: library clauses, entity with clock and ports, architecture
// holding the declarations, table instances and one rising-edge process.
inline std::string emit_entity(const Design& d, const std::string& name, const std::string& clock_name = "clk")
{
    return render_design(d, name, clock_name, true).full_text;
}

} // namespace fxpipe
