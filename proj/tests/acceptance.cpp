// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "dnabrick/io_formats.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace dnabrick;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            if (pass)
                detail = what;
            pass = false;
        }
    }
};

std::set<std::tuple<int, int, int>> removed_set(const Canvas& c)
{
    std::set<std::tuple<int, int, int>> out;
    for (const auto& v : c.removed_voxels())
        out.insert({v.x, v.y, v.k});
    return out;
}

std::size_t total_nt(const std::vector<Strand>& strands)
{
    std::size_t n = 0;
    for (const auto& s : strands)
        n += s.sequence.size();
    return n;
}

Outcome layout_counts_8x8x64()
{
    Outcome o;
    const auto t0 = Clock::now();
    const CanvasSpec spec{8, 8, 64};
    const auto layout = canonical_layout(spec);
    const auto plan = sculpt(layout, new_canvas(spec));
    const auto strands = assemble_strands(plan, generate_domains(spec, 1, {}));
    const double elapsed = seconds_since(t0);

    const auto c = count_bricks(layout.bricks);
    o.require(c.full == 224, "full != 224");
    o.require(c.half == 64, "half != 64");
    o.require(strands.size() == 288, "strands != 288");
    o.require(c.domains == 1024, "domains != 1024");
    o.require(total_nt(strands) == 8192, "nt != 8192");
    o.require(elapsed < 1.0, "runtime >= 1 s");
    std::ostringstream d;
    d << c.full << " full + " << c.half << " half, " << strands.size() << " strands, " << c.domains
      << " domains, " << total_nt(strands) << " nt in " << elapsed << " s";
    if (o.pass)
        o.detail = d.str();
    return o;
}

Outcome domains_6x6x48()
{
    Outcome o;
    const CanvasSpec spec{6, 6, 48};
    const auto layout = canonical_layout(spec);
    const auto c = count_bricks(layout.bricks);
    o.require(c.domains == 432, "domains != 432");
    const auto want = oracle::required_domains(spec, {});
    const auto got = oracle::covered_domains(layout.bricks);
    o.require(want.size() == 432, "oracle domain count != 432");
    o.require(got == want, "layout is not an exact partition of the canvas domains");
    if (o.pass)
        o.detail = "432 domains, every domain covered exactly once";
    return o;
}

Outcome cost_values()
{
    Outcome o;
    const auto gear = estimate_cost(9600, {0.004});
    const auto hollow = estimate_cost(4096, {0.004});
    o.require(gear.total_cents == 3840 && gear.formatted() == "38.40", "9600 nt != 38.40 USD");
    o.require(hollow.formatted() == "16.38", "4096 nt != 16.38 USD");
    o.require(std::abs(hollow.total_cents / 100.0 - 16.3) <= 0.10, "4096 nt not within 0.10 of 16.3");
    if (o.pass)
        o.detail = "9600 nt -> " + gear.formatted() + " USD, 4096 nt -> " + hollow.formatted() + " USD";
    return o;
}

Outcome physical_dimensions()
{
    Outcome o;
    const auto a = stats(new_canvas({8, 8, 64})).physical_size;
    const auto b = stats(new_canvas({10, 10, 80})).physical_size;
    o.require(a.x_nm == 20.0 && a.y_nm == 20.0 && a.z_nm == 21.6, "8x8x64 != 20 x 20 x 21.6 nm");
    o.require(b.x_nm == 25.0 && b.y_nm == 25.0 && b.z_nm == 27.0, "10x10x80 != 25 x 25 x 27 nm");
    if (o.pass)
        o.detail = "20 x 20 x 21.6 nm and 25 x 25 x 27 nm";
    return o;
}

Outcome sculpt_arithmetic()
{
    Outcome o;
    const auto t0 = Clock::now();

    const auto hollow = remove_box(new_canvas({8, 8, 64}), {2, 0, 0}, {5, 7, 7});
    const auto hp = sculpt(canonical_layout(hollow.spec()), hollow);
    o.require(hollow.selected_count() == 256, "sculpt did not retain 256 voxels");
    const auto hc = count_bricks(hp.bricks);
    o.require(hc.nucleotides == 4096, "256 retained voxels != 4096 nt");

    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 1000 && o.pass; ++trial) {
        const CanvasSpec spec{2 + int(rng() % 9), 2 + int(rng() % 9), 16 * (1 + int(rng() % 5))};
        auto canvas = new_canvas(spec);
        const double drop = (rng() % 1001) / 1000.0;
        for (int x = 0; x < spec.width_helices; ++x)
            for (int y = 0; y < spec.height_helices; ++y)
                for (int k = 0; k < spec.layers(); ++k)
                    if ((rng() % 1000) / 1000.0 < drop)
                        canvas.set({x, y, k}, false);
        const auto want = oracle::required_domains(spec, removed_set(canvas));
        const auto plan = sculpt(canonical_layout(spec), canvas);
        const auto c = count_bricks(plan.bricks);
        o.require(oracle::covered_domains(plan.bricks) == want,
                  "trial " + std::to_string(trial) + ": plan is not a partition of the selected domains");
        o.require(c.nucleotides == 16 * canvas.selected_count(),
                  "trial " + std::to_string(trial) + ": nt != 16 x selected voxels");
        std::size_t frag_domains = 0;
        for (const auto& b : plan.bricks)
            if (b.kind == BrickKind::fragment)
                frag_domains += b.domains.size();
        o.require(4 * c.full + 2 * c.half + frag_domains == 2 * canvas.selected_count(),
                  "trial " + std::to_string(trial) + ": count identity broken");

        const auto merged = merge_boundary_bricks(plan);
        const auto m = count_bricks(merged.bricks);
        o.require(oracle::covered_domains(merged.bricks) == want,
                  "trial " + std::to_string(trial) + ": merged plan is not a partition");
        o.require(m.nucleotides == c.nucleotides && m.strands() + m.boundary == c.strands(),
                  "trial " + std::to_string(trial) + ": merge changed totals");
    }
    const double elapsed = seconds_since(t0);
    o.require(elapsed < 60.0, "runtime >= 60 s");
    if (o.pass) {
        std::ostringstream d;
        d << "4096 nt for 256 retained voxels (" << hc.full << " full + " << hc.half
          << " half); 1000 random sculpts partitioned in " << elapsed << " s";
        o.detail = d.str();
    }
    return o;
}

Outcome constraint_suite()
{
    Outcome o;
    std::size_t checked = 0;
    for (auto spec : {CanvasSpec{2, 2, 16}, CanvasSpec{6, 6, 48}}) {
        for (std::uint64_t seed = 1; seed <= 100 && o.pass; ++seed) {
            const ConstraintConfig cfg;
            const auto a = generate_domains(spec, seed, cfg);
            const auto b = generate_domains(spec, seed, cfg);
            const std::string tag = std::to_string(spec.width_helices) + "x" +
                                    std::to_string(spec.height_helices) + "x" +
                                    std::to_string(spec.depth_bp) + " seed " + std::to_string(seed);
            o.require(a == b, tag + ": not deterministic");

            std::vector<std::string> seqs;
            for (auto d : a.plus_domains())
                seqs.push_back(unpack_domain(d));
            o.require(seqs.size() == spec.voxel_count(), tag + ": wrong domain count");
            std::set<std::string> uniq(seqs.begin(), seqs.end());
            o.require(uniq.size() == seqs.size(), tag + ": duplicate plus-side domain");
            for (const auto& s : seqs) {
                o.require(oracle::char_gc(s) == 4, tag + ": GC count != 4 in " + s);
                o.require(oracle::char_longest_run(s) <= 4, tag + ": run > 4 in " + s);
            }

            std::vector<std::pair<std::size_t, int>> want;
            for (std::size_t i = 0; i < seqs.size(); ++i) {
                int best = 8;
                for (std::size_t j = 0; j < i; ++j)
                    best = std::min(best, 8 - oracle::char_identity(seqs[i], seqs[j]));
                if (best < cfg.target_hamming)
                    want.emplace_back(i, best);
            }
            const auto& got = a.violations();
            bool same = got.size() == want.size();
            for (std::size_t n = 0; same && n < want.size(); ++n) {
                const auto slot = domain_slot(spec, got[n].domain) / 2;
                same = slot == want[n].first && got[n].best_min_distance == want[n].second &&
                       got[n].domain.side == Side::plus;
            }
            o.require(same, tag + ": recorded Hamming violations disagree with recomputation");
            ++checked;
        }
    }
    if (o.pass)
        o.detail = std::to_string(checked) + " (spec, seed) runs: GC 4, runs <= 4, unique, "
                                             "deterministic, violations consistent";
    return o;
}

Outcome histogram_oracle()
{
    Outcome o;
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 500 && o.pass; ++trial) {
        const std::size_t n = rng() % 501;
        std::vector<std::string> ds;
        for (std::size_t i = 0; i < n; ++i) {
            // Mix fresh domains with near copies so every bucket gets hits.
            if (!ds.empty() && rng() % 3 == 0) {
                auto s = ds[rng() % ds.size()];
                const int flips = static_cast<int>(rng() % 4);
                for (int f = 0; f < flips; ++f)
                    s[rng() % 8] = "ACGT"[rng() % 4];
                ds.push_back(s);
            } else {
                ds.push_back(oracle::random_domain(rng));
            }
        }
        const auto h = similarity_histogram(ds);
        const auto b = oracle::brute_histogram(ds);
        o.require(h.total_domains == n && static_cast<long>(h.pairs_8) == b.p8 &&
                      static_cast<long>(h.pairs_7) == b.p7 && static_cast<long>(h.pairs_6) == b.p6,
                  "trial " + std::to_string(trial) + " differs from brute-force pair count");
    }
    if (o.pass)
        o.detail = "500 random sets (n <= 500) match brute force exactly";
    return o;
}

Outcome round_trip()
{
    Outcome o;
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 100 && o.pass; ++trial) {
        Project p;
        const CanvasSpec spec{2 + int(rng() % 5), 2 + int(rng() % 5), 16 * (1 + int(rng() % 3))};
        p.canvas = new_canvas(spec);
        const auto removals = rng() % (spec.voxel_count() + 1);
        for (std::size_t i = 0; i < removals; ++i)
            p.canvas.set({int(rng() % spec.width_helices), int(rng() % spec.height_helices),
                          int(rng() % spec.layers())},
                         false);
        p.generation.seed = rng();
        auto& c = p.generation.constraints;
        c.target_hamming = static_cast<int>(rng() % 7);
        c.retry_budget = static_cast<int>(1 + rng() % 400);
        c.check_complements = rng() % 2 == 0;
        if (rng() % 2) {
            c.gc_min = 0.25;
            c.gc_max = 0.75;
        }
        p.options.boundary_merge = rng() % 2 == 0;
        p.options.protector_policy =
            rng() % 2 ? ProtectorPolicy::suppress_and_protect : ProtectorPolicy::emit_fragments;

        const auto csv = render_export(p, ExportFormat::csv);
        const auto tex = render_export(p, ExportFormat::tex);
        const auto file = export_project(p);
        const auto back = import_project(file);
        const std::string tag = "project " + std::to_string(trial);
        o.require(export_project(back) == file, tag + ": .3dna not byte-stable");
        o.require(render_export(back, ExportFormat::csv) == csv, tag + ": CSV differs after import");
        o.require(render_export(back, ExportFormat::tex) == tex, tag + ": LaTeX differs after import");
    }
    if (o.pass)
        o.detail = "100 randomized projects: .3dna, CSV and LaTeX byte-identical after re-import";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"canonical layout counts 8x8x64", layout_counts_8x8x64},
        {"6x6x48 domains and partition", domains_6x6x48},
        {"cost estimates", cost_values},
        {"physical dimensions", physical_dimensions},
        {"sculpt arithmetic", sculpt_arithmetic},
        {"constraint suite", constraint_suite},
        {"histogram oracle", histogram_oracle},
        {"project round-trip", round_trip},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str());
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
