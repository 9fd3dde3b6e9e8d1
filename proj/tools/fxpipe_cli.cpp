// Command-line front end: simulate, emit, report and golden.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fxpipe/fxpipe.hpp"

namespace fs = std::filesystem;
using namespace fxpipe;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kViolations = 2 };

struct Options {
    std::string example = "pipelined_add";
    bool clamp = false;
    bool strict = false;
    bool raw_trace = false;
    examples::ExampleConfig cfg;
};

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw Error("cannot open '" + path.string() + "' for writing");
    os << text;
    if (!os)
        throw Error("write to '" + path.string() + "' failed");
}

fs::path prepare_out(const Options& o)
{
    fs::path dir(o.cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

void add_design_flags(CLI::App& app, Options& o)
{
    auto* g = app.add_option_group("design", "Example design parameters");
    auto& a = o.cfg.add;
    auto& l = o.cfg.line;
    auto& c = o.cfg.circle;
    g->add_option("--add-phi-bits", a.phi_bits, "pipelined_add: input width")->capture_default_str();
    g->add_option("--add-phi-max", a.phi_max, "pipelined_add: input range +-")->capture_default_str();
    g->add_option("--line-s-bits", l.s_bits, "line_fit: s width")->capture_default_str();
    g->add_option("--line-s-max", l.s_max, "line_fit: s range [0, max]")->capture_default_str();
    g->add_option("--line-z-bits", l.z_bits, "line_fit: z width")->capture_default_str();
    g->add_option("--line-z-max", l.z_max, "line_fit: z range +-")->capture_default_str();
    g->add_option("--line-recip-addr-bits", l.recip_addr_bits, "line_fit: reciprocal table address width")
        ->capture_default_str();
    g->add_option("--line-recip-out-bits", l.recip_out_bits, "line_fit: reciprocal table word width")
        ->capture_default_str();
    g->add_option("--line-den-min", l.den_min, "line_fit: smallest resolved denominator")->capture_default_str();
    g->add_option("--line-cot-bits", l.cot_bits, "line_fit: width defining the cot output constant")
        ->capture_default_str();
    g->add_option("--line-cot-max", l.cot_max, "line_fit: cot range +-")->capture_default_str();
    g->add_option("--circle-phi-bits", c.phi_bits, "circle_fit: phi width")->capture_default_str();
    g->add_option("--circle-r-bits", c.r_bits, "circle_fit: r width")->capture_default_str();
    g->add_option("--circle-r-max", c.r_max, "circle_fit: r range [0, max]")->capture_default_str();
    g->add_option("--circle-trig-bits", c.trig_bits, "circle_fit: sine/cosine table word width")
        ->capture_default_str();
    g->add_option("--circle-recip-addr-bits", c.recip_addr_bits, "circle_fit: reciprocal table address width")
        ->capture_default_str();
    g->add_option("--circle-recip-out-bits", c.recip_out_bits, "circle_fit: reciprocal table word width")
        ->capture_default_str();
    g->add_option("--circle-den-min", c.den_min, "circle_fit: smallest resolved denominator")
        ->capture_default_str();
    g->add_option("--circle-ab-bits", c.ab_bits, "circle_fit: width defining the a/b output constant")
        ->capture_default_str();
    g->add_option("--circle-ab-max", c.ab_max, "circle_fit: a/b range +-")->capture_default_str();
}

Design build(Options& o)
{
    o.cfg.example = examples::parse_example(o.example);
    return examples::build(o.cfg);
}

int cmd_simulate(Options& o)
{
    const Design d = build(o);
    const auto vectors = examples::default_vectors(o.cfg, d);
    RunOptions ro;
    ro.clamp = o.clamp;
    ro.record_combinational = o.raw_trace;
    const Trace tr = run(d, vectors, ro);
    const fs::path dir = prepare_out(o);
    {
        std::ofstream os(dir / "trace.csv", std::ios::binary);
        write_trace_csv(os, d, tr, !o.raw_trace);
    }
    write_text(dir / "precision.json", precision_json(d, tr).dump(2) + "\n");
    std::printf("%s: %zu vectors, latency %d, %zu violations\n", d.name().c_str(), tr.vector_count(), d.latency(),
                tr.violations().size());
    for (const auto& out : d.outputs()) {
        const auto r = precision_report(tr, out.name);
        std::printf("  %-8s rms %.6g (%.3f LSB)  max %.6g\n", out.name.c_str(), r.rms, r.rms / r.lsb, r.max_abs);
    }
    for (const auto& v : tr.violations())
        std::fprintf(stderr, "violation [%s] %s\n", to_string(v.kind), v.message.c_str());
    return o.strict && !tr.violations().empty() ? kViolations : kOk;
}

int cmd_emit(Options& o)
{
    const Design d = build(o);
    const fs::path dir = prepare_out(o);
    const std::string entity = d.name();
    write_text(dir / (entity + ".vhd"), emit_entity(d, entity));
    for (const auto& l : d.luts())
        write_text(dir / (entity + "_" + l.name + ".coe"), emit_coe(l));
    std::printf("wrote %s.vhd and %zu table files to %s\n", entity.c_str(), d.luts().size(), dir.string().c_str());
    int warnings = 0;
    for (const auto& l : d.luts())
        for (const auto& w : l.warnings) {
            std::fprintf(stderr, "warning: %s\n", w.c_str());
            ++warnings;
        }
    return o.strict && warnings ? kViolations : kOk;
}

int cmd_report(Options& o)
{
    const Design d = build(o);
    const fs::path dir = prepare_out(o);
    const auto j = resources_json(d);
    write_text(dir / "resources.json", j.dump(2) + "\n");
    std::printf("%s: latency %d, %s DSP, %s register bits, %s RAMB36, %s RAMB18\n", d.name().c_str(), d.latency(),
                j["dsp"].dump().c_str(), j["register_bits"].dump().c_str(), j["ramb36"].dump().c_str(),
                j["ramb18"].dump().c_str());
    return kOk;
}

// Regenerates the VHDL regression files of all bundled examples with
// default parameters.
int cmd_golden(Options& o)
{
    const fs::path dir = prepare_out(o);
    for (auto k : {examples::ExampleKind::pipelined_add, examples::ExampleKind::line_fit,
                   examples::ExampleKind::circle_fit}) {
        examples::ExampleConfig cfg;
        cfg.example = k;
        const Design d = examples::build(cfg);
        write_text(dir / (d.name() + ".vhd"), emit_entity(d, d.name()));
    }
    std::printf("wrote goldens to %s\n", dir.string().c_str());
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fixed-point pipeline generator: simulate, emit VHDL and estimate resources"};
    app.set_config("--config", "", "Read options from a key = value file");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--example", o.example, "pipelined_add | line_fit | circle_fit")
        ->check(CLI::IsMember({"pipelined_add", "line_fit", "circle_fit"}))
        ->capture_default_str();
    app.add_option("--vectors", o.cfg.num_vectors, "Number of input vectors")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--seed", o.cfg.seed, "Random seed for generated vectors")->capture_default_str();
    app.add_option("--out", o.cfg.out_dir, "Output directory")->capture_default_str();
    app.add_flag("--clamp", o.clamp, "Saturate out-of-range inputs instead of failing");
    app.add_flag("--strict", o.strict, "Exit with status 2 on any violation or table warning");
    app.add_flag("--raw-trace", o.raw_trace, "Dump every node at every cycle instead of aligned values");
    add_design_flags(app, o);

    int rc = kOk;
    auto* sim = app.add_subcommand("simulate", "Run the cycle simulator; writes trace.csv and precision.json");
    auto* emit = app.add_subcommand("emit", "Write <entity>.vhd and one .coe file per table");
    auto* report = app.add_subcommand("report", "Write resources.json");
    auto* golden = app.add_subcommand("golden", "Write VHDL of every bundled example (default parameters)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (*sim)
            rc = cmd_simulate(o);
        else if (*emit)
            rc = cmd_emit(o);
        else if (*report)
            rc = cmd_report(o);
        else if (*golden)
            rc = cmd_golden(o);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kFailure;
    }
    return rc;
}
