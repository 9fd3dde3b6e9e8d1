#pragma once

// Bundled designs: the three-signal pipelined addition, the straight-line
// (cot theta, z0) least-squares fitter and the circle-through-origin (a, b)
// fitter. Each fitter divides by its shared denominator through a
// reciprocal table. Equal per-hit resolutions cancel between numerator and
// denominator, so they do not appear in the datapath.
//
// All bit widths and ranges below are defaults of this library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "fxp.hpp"
#include "graph.hpp"
#include "lut.hpp"
#include "sim.hpp"

namespace fxpipe::examples {

enum class ExampleKind { pipelined_add, line_fit, circle_fit };

inline const char* to_string(ExampleKind k)
{
    switch (k) {
    case ExampleKind::pipelined_add: return "pipelined_add";
    case ExampleKind::line_fit: return "line_fit";
    case ExampleKind::circle_fit: return "circle_fit";
    }
    return "?";
}

inline ExampleKind parse_example(const std::string& s)
{
    if (s == "pipelined_add")
        return ExampleKind::pipelined_add;
    if (s == "line_fit")
        return ExampleKind::line_fit;
    if (s == "circle_fit")
        return ExampleKind::circle_fit;
    throw Error("unknown example '" + s + "' (expected pipelined_add, line_fit or circle_fit)");
}

struct PipelinedAddConfig {
    int phi_bits = 10;
    double phi_max = 3.14;
};

struct LineFitConfig {
    int s_bits = 12;
    double s_max = 16.0; // arc length, unsigned
    int z_bits = 12;
    double z_max = 32.0; // symmetric z range
    int recip_addr_bits = 15;
    int recip_out_bits = 18;
    double den_min = 2.0; // smallest denominator the reciprocal resolves
    int cot_bits = 12;
    double cot_max = 4.0;
};

struct CircleFitConfig {
    int phi_bits = 10;
    int r_bits = 12;
    double r_max = 96.0;
    int trig_bits = 16;
    int recip_addr_bits = 15;
    int recip_out_bits = 18;
    double den_min = 0.05;
    int ab_bits = 12;
    double ab_max = 64.0;
};

struct ExampleConfig {
    ExampleKind example = ExampleKind::pipelined_add;
    std::uint64_t seed = 1;
    std::size_t num_vectors = 1000;
    std::string out_dir = ".";
    PipelinedAddConfig add;
    LineFitConfig line;
    CircleFitConfig circle;

    void validate() const
    {
        auto w = [](int bits, const char* what) {
            if (bits < 2 || bits > kMaxBitWidth)
                throw FormatError(std::string(what) + " = " + std::to_string(bits) + " outside 2.." +
                                  std::to_string(kMaxBitWidth));
        };
        if (num_vectors < 1)
            throw Error("num_vectors must be at least 1");
        w(add.phi_bits, "phi_bits");
        w(line.s_bits, "s_bits");
        w(line.z_bits, "z_bits");
        w(line.recip_addr_bits, "line recip_addr_bits");
        w(line.recip_out_bits, "line recip_out_bits");
        w(line.cot_bits, "cot_bits");
        w(circle.phi_bits, "circle phi_bits");
        w(circle.r_bits, "r_bits");
        w(circle.trig_bits, "trig_bits");
        w(circle.recip_addr_bits, "circle recip_addr_bits");
        w(circle.recip_out_bits, "circle recip_out_bits");
        w(circle.ab_bits, "ab_bits");
    }
};

// --- designs -------------------------------------------------------------

inline Design pipelined_add(const PipelinedAddConfig& c = {})
{
    Design d("pipelined_add");
    const auto fmt = make_signed_format(c.phi_bits, -c.phi_max, c.phi_max);
    Signal phi_0 = d.input("phi_0", fmt);
    Signal phi_1 = d.input("phi_1", fmt);
    Signal phi_2 = d.input("phi_2", fmt);
    Signal phiAdd = d.assign("phiAdd", phi_0 + phi_1);
    Signal phiAdd2 = d.assign("phiAdd2", phiAdd + phi_2);
    d.output("phiAdd2", phiAdd2);
    return freeze(d);
}

inline constexpr std::array<double, 3> kPipelinedAddDefaults = {1.57, -0.785, 0.785};

namespace detail {

inline double reciprocal(double x) { return x > 0.0 ? 1.0 / x : 0.0; }

inline double half_reciprocal(double x) { return x > 0.0 ? 0.5 / x : 0.0; }

// Sum of five registered terms in two clocked levels.
inline Signal sum5(Design& d, const std::string& name, const std::array<Signal, 5>& x)
{
    Signal p12 = d.assign(name + "_12", x[0] + x[1]);
    Signal p34 = d.assign(name + "_34", x[2] + x[3]);
    return d.assign(name, p12 + p34 + x[4]);
}

} // namespace detail

// Inputs s1..s4, z1..z4. Outputs cot and z0 (latency 8 with the defaults).
inline Design line_fit(const LineFitConfig& c = {})
{
    Design d("line_fit");
    const auto s_fmt = make_unsigned_format(c.s_bits, c.s_max);
    const auto z_fmt = make_signed_format(c.z_bits, -c.z_max, c.z_max);
    std::array<Signal, 4> s, z;
    for (int i = 0; i < 4; ++i)
        s[i] = d.input("s" + std::to_string(i + 1), s_fmt);
    for (int i = 0; i < 4; ++i)
        z[i] = d.input("z" + std::to_string(i + 1), z_fmt);

    // products and pair sums
    std::array<Signal, 4> sz, ss;
    for (int i = 0; i < 4; ++i) {
        sz[i] = d.assign("sz" + std::to_string(i + 1), s[i] * z[i]);
        ss[i] = d.assign("ss" + std::to_string(i + 1), s[i] * s[i]);
    }
    Signal s12 = d.assign("s12", s[0] + s[1]);
    Signal s34 = d.assign("s34", s[2] + s[3]);
    Signal z12 = d.assign("z12", z[0] + z[1]);
    Signal z34 = d.assign("z34", z[2] + z[3]);

    Signal sum_s = d.assign("sum_s", s12 + s34);
    Signal sum_z = d.assign("sum_z", z12 + z34);
    Signal sz12 = d.assign("sz12", sz[0] + sz[1]);
    Signal sz34 = d.assign("sz34", sz[2] + sz[3]);
    Signal ss12 = d.assign("ss12", ss[0] + ss[1]);
    Signal ss34 = d.assign("ss34", ss[2] + ss[3]);

    Signal sum_sz = d.assign("sum_sz", sz12 + sz34);
    Signal sum_ss = d.assign("sum_ss", ss12 + ss34);

    // N * sum(s^2) - sum(s)^2 etc. with N = 4
    Signal den = d.assign("den", d.mul_pow2(sum_ss, 2) - sum_s * sum_s);
    Signal num_cot = d.assign("num_cot", d.mul_pow2(sum_sz, 2) - sum_s * sum_z);
    Signal num_z0 = d.assign("num_z0", sum_ss * sum_z - sum_s * sum_sz);

    auto inv = build_lut(d, "inv_den", detail::reciprocal, d.reduce_to_width(den, c.recip_addr_bits),
                         c.recip_out_bits, 0.0, 1.0 / c.den_min);

    const double cot_cc = make_signed_format(c.cot_bits, -c.cot_max, c.cot_max).conversion_constant();
    Signal cot = d.assign("cot", d.requantize(num_cot * inv.out, cot_cc));
    Signal z0 = d.assign("z0", d.requantize(num_z0 * inv.out, z_fmt.conversion_constant()));
    d.output("cot", cot);
    d.output("z0", z0);
    return freeze(d);
}

// Inputs phi1..phi5, r1..r5. Outputs a and b (latency 11 with the defaults).
inline Design circle_fit(const CircleFitConfig& c = {})
{
    using std::numbers::pi;
    Design d("circle_fit");
    const auto phi_fmt = make_signed_format(c.phi_bits, -pi, pi);
    const auto r_fmt = make_unsigned_format(c.r_bits, c.r_max);
    std::array<Signal, 5> phi, r;
    for (int i = 0; i < 5; ++i)
        phi[i] = d.input("phi" + std::to_string(i + 1), phi_fmt);
    for (int i = 0; i < 5; ++i)
        r[i] = d.input("r" + std::to_string(i + 1), r_fmt);

    std::array<Signal, 5> cs, sn;
    for (int i = 0; i < 5; ++i) {
        const auto k = std::to_string(i + 1);
        cs[i] = build_lut(d, "cos" + k, [](double x) { return std::cos(x); }, phi[i], c.trig_bits, -1.0, 1.0).out;
        sn[i] = build_lut(d, "sin" + k, [](double x) { return std::sin(x); }, phi[i], c.trig_bits, -1.0, 1.0).out;
    }
    std::array<Signal, 5> rc, rs, cc, sq, sc;
    for (int i = 0; i < 5; ++i) {
        const auto k = std::to_string(i + 1);
        rc[i] = d.assign("rc" + k, r[i] * cs[i]);
        rs[i] = d.assign("rs" + k, r[i] * sn[i]);
        cc[i] = d.assign("cc" + k, cs[i] * cs[i]);
        sq[i] = d.assign("ss" + k, sn[i] * sn[i]);
        sc[i] = d.assign("sc" + k, sn[i] * cs[i]);
    }
    Signal sum_rc = detail::sum5(d, "sum_rc", rc);
    Signal sum_rs = detail::sum5(d, "sum_rs", rs);
    Signal sum_cc = detail::sum5(d, "sum_cc", cc);
    Signal sum_ss = detail::sum5(d, "sum_ss", sq);
    Signal sum_sc = detail::sum5(d, "sum_sc", sc);

    Signal den = d.assign("den", sum_cc * sum_ss - sum_sc * sum_sc);
    Signal num_a = d.assign("num_a", sum_ss * sum_rc - sum_sc * sum_rs);
    Signal num_b = d.assign("num_b", sum_cc * sum_rs - sum_sc * sum_rc);

    // 1 / (2 den)
    auto inv = build_lut(d, "inv_den", detail::half_reciprocal, d.reduce_to_width(den, c.recip_addr_bits),
                         c.recip_out_bits, 0.0, 0.5 / c.den_min);

    const double ab_cc = make_signed_format(c.ab_bits, -c.ab_max, c.ab_max).conversion_constant();
    Signal a = d.assign("a", d.requantize(num_a * inv.out, ab_cc));
    Signal b = d.assign("b", d.requantize(num_b * inv.out, ab_cc));
    d.output("a", a);
    d.output("b", b);
    return freeze(d);
}

inline Design build(const ExampleConfig& cfg)
{
    cfg.validate();
    switch (cfg.example) {
    case ExampleKind::pipelined_add: return pipelined_add(cfg.add);
    case ExampleKind::line_fit: return line_fit(cfg.line);
    case ExampleKind::circle_fit: return circle_fit(cfg.circle);
    }
    throw Error("unknown example");
}

// --- closed-form references ----------------------------------------------

struct LineFitResult {
    double cot = 0.0;
    double z0 = 0.0;
};

inline LineFitResult line_fit_reference(const std::array<double, 4>& s, const std::array<double, 4>& z)
{
    double ss = 0, sz = 0, s1 = 0, z1 = 0;
    for (int i = 0; i < 4; ++i) {
        s1 += s[i];
        z1 += z[i];
        ss += s[i] * s[i];
        sz += s[i] * z[i];
    }
    const double den = 4.0 * ss - s1 * s1;
    return {(4.0 * sz - s1 * z1) / den, (-s1 * sz + ss * z1) / den};
}

struct CircleFitResult {
    double a = 0.0;
    double b = 0.0;
};

inline CircleFitResult circle_fit_reference(const std::array<double, 5>& phi, const std::array<double, 5>& r)
{
    double scc = 0, sss = 0, ssc = 0, src = 0, srs = 0;
    for (int i = 0; i < 5; ++i) {
        const double c = std::cos(phi[i]);
        const double s = std::sin(phi[i]);
        scc += c * c;
        sss += s * s;
        ssc += s * c;
        src += r[i] * c;
        srs += r[i] * s;
    }
    const double den = 2.0 * (scc * sss - ssc * ssc);
    return {(sss * src - ssc * srs) / den, (scc * srs - ssc * src) / den};
}

// --- input streams -------------------------------------------------------

inline InputVector line_fit_vector(const std::array<double, 4>& s, const std::array<double, 4>& z)
{
    return {s[0], s[1], s[2], s[3], z[0], z[1], z[2], z[3]};
}

inline InputVector circle_fit_vector(const std::array<double, 5>& phi, const std::array<double, 5>& r)
{
    return {phi[0], phi[1], phi[2], phi[3], phi[4], r[0], r[1], r[2], r[3], r[4]};
}

// Hits near four layers at s = 1, 5, 9, 13 (+ up to 2) on a random line with
// gaussian z noise.
inline std::vector<InputVector> synthetic_tracks(const LineFitConfig& c, std::size_t n, std::uint64_t seed,
                                                 double noise = 0.1)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.0, 2.0), cot(-1.5, 1.5), z0(-8.0, 8.0);
    std::normal_distribution<double> gauss(0.0, noise);
    const double s_lim = c.s_max, z_lim = c.z_max * (1.0 - 1e-9);
    std::vector<InputVector> out;
    out.reserve(n);
    while (out.size() < n) {
        std::array<double, 4> s{}, z{};
        const double ct = cot(rng), zz = z0(rng);
        for (int i = 0; i < 4; ++i) {
            s[i] = std::min(1.0 + 4.0 * i + jitter(rng), s_lim);
            z[i] = std::clamp(ct * s[i] + zz + gauss(rng), -z_lim, z_lim);
        }
        out.push_back(line_fit_vector(s, z));
    }
    return out;
}

// Points on circles through the origin: r = 2 (a cos phi + b sin phi), with
// the five hits spread within +-1.2 rad of the circle's direction.
inline std::vector<InputVector> synthetic_circles(const CircleFitConfig& c, std::size_t n, std::uint64_t seed,
                                                  double noise = 0.0)
{
    using std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(10.0, std::min(45.0, 0.49 * c.r_max)), dir(-pi, pi),
        spread(-1.2, 1.2);
    std::normal_distribution<double> gauss(0.0, noise > 0 ? noise : 1.0);
    std::vector<InputVector> out;
    out.reserve(n);
    while (out.size() < n) {
        const double rad = radius(rng), phi0 = dir(rng);
        const double a = rad * std::cos(phi0), b = rad * std::sin(phi0);
        std::array<double, 5> phi{}, r{};
        for (int i = 0; i < 5; ++i) {
            double p = phi0 + spread(rng);
            if (p > pi)
                p -= 2 * pi;
            if (p < -pi)
                p += 2 * pi;
            phi[i] = p;
            r[i] = 2.0 * (a * std::cos(p) + b * std::sin(p));
            if (noise > 0)
                r[i] += gauss(rng);
            r[i] = std::clamp(r[i], 0.0, c.r_max);
        }
        out.push_back(circle_fit_vector(phi, r));
    }
    return out;
}

// Uniform samples over each input's declared range.
inline std::vector<InputVector> uniform_vectors(const Design& d, std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<InputVector> out(n);
    for (auto& v : out)
        for (NodeId id : d.inputs()) {
            const auto& f = d.node(id).fmt;
            v.push_back(std::uniform_real_distribution<double>(f.float_min(), f.float_max())(rng));
        }
    return out;
}

// Half of the values sit exactly on a range boundary or at zero.
inline std::vector<InputVector> boundary_vectors(const Design& d, std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 7);
    std::vector<InputVector> out(n);
    for (auto& v : out)
        for (NodeId id : d.inputs()) {
            const auto& f = d.node(id).fmt;
            const double lo = f.float_min(), hi = f.float_max();
            switch (pick(rng)) {
            case 0: v.push_back(lo); break;
            case 1: v.push_back(hi); break;
            case 2: v.push_back(std::clamp(0.0, lo, hi)); break;
            case 3: v.push_back(std::nextafter(hi, lo)); break;
            default: v.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
            }
        }
    return out;
}

// Default stream for the CLI: the listed defaults first for the pipelined
// addition, synthetic tracks and circles for the fitters.
inline std::vector<InputVector> default_vectors(const ExampleConfig& cfg, const Design& d)
{
    switch (cfg.example) {
    case ExampleKind::pipelined_add: {
        std::vector<InputVector> v{{kPipelinedAddDefaults.begin(), kPipelinedAddDefaults.end()}};
        if (cfg.num_vectors > 1) {
            auto rest = uniform_vectors(d, cfg.num_vectors - 1, cfg.seed);
            v.insert(v.end(), rest.begin(), rest.end());
        }
        return v;
    }
    case ExampleKind::line_fit: return synthetic_tracks(cfg.line, cfg.num_vectors, cfg.seed);
    case ExampleKind::circle_fit: return synthetic_circles(cfg.circle, cfg.num_vectors, cfg.seed);
    }
    return {};
}

} // namespace fxpipe::examples
