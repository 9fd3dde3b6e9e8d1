#pragma once

// JSON views of precision and resource reports.

#include <string>
#include <vector>

#include "json.hpp"
#include "graph.hpp"
#include "lut.hpp"
#include "sim.hpp"

namespace fxpipe {

inline nlohmann::json to_json(const PrecisionReport& r)
{
    return {
        {"output", r.output},
        {"count", r.count},
        {"mean", r.mean},
        {"rms", r.rms},
        {"std_dev", r.std_dev},
        {"max_abs", r.max_abs},
        {"lsb", r.lsb},
        {"rms_in_lsb", r.lsb > 0 ? r.rms / r.lsb : 0.0},
        {"histogram", {{"lo", r.histogram.lo}, {"hi", r.histogram.hi}, {"counts", r.histogram.counts}}},
    };
}

inline nlohmann::json precision_json(const Design& d, const Trace& tr)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& o : d.outputs())
        out.push_back(to_json(precision_report(tr, o.name)));
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : tr.violations())
        violations.push_back({{"kind", to_string(v.kind)},
                              {"cycle", v.cycle},
                              {"node", d.node(v.node).name},
                              {"message", v.message}});
    return {{"design", d.name()}, {"latency", d.latency()}, {"vectors", tr.vector_count()},
            {"outputs", out}, {"violations", violations},
            {"boundary_saturations", tr.boundary_saturations()}};
}

inline nlohmann::json resources_json(const Design& d)
{
    const auto r = resource_estimate(d);
    nlohmann::json luts = nlohmann::json::array();
    for (const auto& l : d.luts()) {
        const auto b = bram_estimate(l);
        nlohmann::json w = nlohmann::json::array();
        for (const auto& s : l.warnings)
            w.push_back(s);
        luts.push_back({{"name", l.name},
                        {"depth", l.depth},
                        {"word_width", l.word_width},
                        {"read_latency", l.read_latency},
                        {"ramb36", b.ramb36},
                        {"ramb18", b.ramb18},
                        {"warnings", w}});
    }
    return {{"design", d.name()},     {"latency", d.latency()},       {"dsp", r.dsp},
            {"bram_bits", r.bram_bits}, {"register_bits", r.register_bits}, {"ramb36", r.ramb36},
            {"ramb18", r.ramb18},       {"tables", luts}};
}

} // namespace fxpipe
