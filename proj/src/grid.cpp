#include "komparo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "komparo/extreal.hpp"

namespace komparo {

// ---------------------------------------------------------------------------
// SampleGrid

SampleGrid SampleGrid::make(std::vector<std::array<double, 2>> bounds,
                            std::vector<int> resolution, bool symmetric) {
    if (bounds.empty() || bounds.size() != resolution.size()) {
        throw GridError("invalid-bounds: bounds and resolution must be nonempty and equal length");
    }
    SampleGrid g;
    g.bounds_ = std::move(bounds);
    g.resolution_ = std::move(resolution);
    g.symmetric_ = symmetric;

    std::size_t total = 1;
    for (std::size_t a = 0; a < g.resolution_.size(); ++a) {
        const auto [lo, hi] = g.bounds_[a];
        const int n = g.resolution_[a];
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
            throw GridError("invalid-bounds: need finite lo < hi per axis");
        }
        if (n < 2) throw GridError("invalid-bounds: resolution must be >= 2 per axis");
        if (symmetric && (lo != -hi || n % 2 == 0)) {
            throw GridError("symmetry-infeasible: need lo = -hi and an odd point count");
        }
        if (total > 100'000'000u / static_cast<std::size_t>(n)) {
            throw GridError("invalid-bounds: total lattice size exceeds 1e8 points");
        }
        total *= static_cast<std::size_t>(n);
    }
    g.size_ = total;

    for (std::size_t a = 0; a < g.resolution_.size(); ++a) {
        const auto [lo, hi] = g.bounds_[a];
        const int n = g.resolution_[a];
        std::vector<double> coords(static_cast<std::size_t>(n));
        double step;
        if (symmetric) {
            const int c = (n - 1) / 2;
            step = hi / static_cast<double>(c);
            for (int k = 0; k < n; ++k) coords[static_cast<std::size_t>(k)] = (k - c) * step;
        } else {
            step = (hi - lo) / static_cast<double>(n - 1);
            for (int k = 0; k < n; ++k) coords[static_cast<std::size_t>(k)] = lo + k * step;
            coords.back() = hi;
        }
        g.steps_.push_back(step);
        g.coords_.push_back(std::move(coords));
    }

    g.strides_.assign(g.resolution_.size(), 1);
    for (int a = static_cast<int>(g.resolution_.size()) - 2; a >= 0; --a) {
        g.strides_[static_cast<std::size_t>(a)] =
            g.strides_[static_cast<std::size_t>(a + 1)] *
            static_cast<std::size_t>(g.resolution_[static_cast<std::size_t>(a + 1)]);
    }

    std::vector<int> zero_idx(g.resolution_.size());
    bool has_origin = true;
    for (std::size_t a = 0; a < g.coords_.size(); ++a) {
        const auto& cs = g.coords_[a];
        auto it = std::lower_bound(cs.begin(), cs.end(), 0.0);
        if (it != cs.end() && *it == 0.0) {
            zero_idx[a] = static_cast<int>(it - cs.begin());
        } else {
            has_origin = false;
            break;
        }
    }
    if (has_origin) g.origin_index_ = g.flatten(zero_idx);
    return g;
}

std::size_t SampleGrid::origin_index() const {
    if (!origin_index_) throw GridError("grid does not contain the origin");
    return *origin_index_;
}

double SampleGrid::max_step() const {
    return *std::max_element(steps_.begin(), steps_.end());
}

void SampleGrid::fill_point(std::size_t flat, std::span<double> out) const {
    for (std::size_t a = 0; a < strides_.size(); ++a) {
        const std::size_t k = (flat / strides_[a]) % static_cast<std::size_t>(resolution_[a]);
        out[a] = coords_[a][k];
    }
}

std::vector<double> SampleGrid::point(std::size_t flat) const {
    std::vector<double> p(resolution_.size());
    fill_point(flat, p);
    return p;
}

void SampleGrid::unflatten(std::size_t flat, std::span<int> out) const {
    for (std::size_t a = 0; a < strides_.size(); ++a) {
        out[a] = static_cast<int>((flat / strides_[a]) % static_cast<std::size_t>(resolution_[a]));
    }
}

std::size_t SampleGrid::flatten(std::span<const int> axis_indices) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < strides_.size(); ++a) {
        flat += static_cast<std::size_t>(axis_indices[a]) * strides_[a];
    }
    return flat;
}

std::size_t SampleGrid::negate_index(std::size_t flat) const {
    if (!symmetric_) throw GridError("negate_index requires a symmetric grid");
    std::size_t out = 0;
    for (std::size_t a = 0; a < strides_.size(); ++a) {
        const std::size_t n = static_cast<std::size_t>(resolution_[a]);
        const std::size_t k = (flat / strides_[a]) % n;
        out += (n - 1 - k) * strides_[a];
    }
    return out;
}

double SampleGrid::distance(std::size_t a, std::size_t b) const {
    double s = 0.0;
    for (std::size_t ax = 0; ax < strides_.size(); ++ax) {
        const std::size_t n = static_cast<std::size_t>(resolution_[ax]);
        const double ca = coords_[ax][(a / strides_[ax]) % n];
        const double cb = coords_[ax][(b / strides_[ax]) % n];
        s += (ca - cb) * (ca - cb);
    }
    return std::sqrt(s);
}

double SampleGrid::inscribed_radius() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : bounds_) {
        if (lo > 0.0 || hi < 0.0) return 0.0;
        r = std::min(r, std::min(-lo, hi));
    }
    return r;
}

std::string SampleGrid::id() const {
    std::string s = "grid{";
    for (std::size_t a = 0; a < bounds_.size(); ++a) {
        if (a) s += ",";
        s += "[" + format_double(bounds_[a][0]) + "," + format_double(bounds_[a][1]) + "]/" +
             std::to_string(resolution_[a]);
    }
    s += symmetric_ ? ",sym}" : "}";
    return s;
}

// ---------------------------------------------------------------------------
// Level sets

namespace {

LevelSet level_set(const FuncExpr& g, const SampleGrid& grid, double s, LevelKind kind) {
    if (g.dimension() != grid.dimension()) {
        throw InputError("level set: function dimension " + std::to_string(g.dimension()) +
                         " does not match grid dimension " + std::to_string(grid.dimension()));
    }
    LevelSet out{grid, kind, s, {}};
    std::vector<double> pt(static_cast<std::size_t>(grid.dimension()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.fill_point(i, pt);
        const double gv = g.eval(pt);
        const bool in = kind == LevelKind::Sublevel ? gv <= s : s <= gv;
        if (in) out.members.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

}  // namespace

LevelSet sublevel(const FuncExpr& g, const SampleGrid& grid, double s) {
    return level_set(g, grid, s, LevelKind::Sublevel);
}

LevelSet superlevel(const FuncExpr& g, const SampleGrid& grid, double s) {
    return level_set(g, grid, s, LevelKind::Superlevel);
}

// ---------------------------------------------------------------------------
// Gaps and dilation

GapValue directed_gap(const SampleGrid& grid, std::span<const std::uint32_t> a,
                      std::span<const std::uint32_t> b) {
    if (a.empty() || b.empty()) return GapValue::empty_gap();
    double worst = 0.0;
    for (const auto pa : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto pb : b) {
            best = std::min(best, grid.distance(pa, pb));
            if (best == 0.0) break;
        }
        worst = std::max(worst, best);
    }
    return GapValue::of(worst);
}

GapValue hausdorff_gap(const SampleGrid& grid, std::span<const std::uint32_t> a,
                       std::span<const std::uint32_t> b) {
    const GapValue ab = directed_gap(grid, a, b);
    const GapValue ba = directed_gap(grid, b, a);
    if (ab.empty || ba.empty) return GapValue::empty_gap();
    return GapValue::of(std::max(ab.value, ba.value));
}

std::vector<std::uint32_t> dilate_one_step(const SampleGrid& grid,
                                           std::span<const std::uint32_t> members) {
    std::vector<char> mask(grid.size(), 0);
    const int d = grid.dimension();
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (const auto m : members) {
        mask[m] = 1;
        grid.unflatten(m, idx);
        for (int a = 0; a < d; ++a) {
            if (idx[static_cast<std::size_t>(a)] > 0) {
                idx[static_cast<std::size_t>(a)] -= 1;
                mask[grid.flatten(idx)] = 1;
                idx[static_cast<std::size_t>(a)] += 1;
            }
            if (idx[static_cast<std::size_t>(a)] < grid.resolution(a) - 1) {
                idx[static_cast<std::size_t>(a)] += 1;
                mask[grid.flatten(idx)] = 1;
                idx[static_cast<std::size_t>(a)] -= 1;
            }
        }
    }
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Painleve-Kuratowski style limits

PKLimitResult pk_limits(std::span<const LevelSet> sets, const LevelSet& target) {
    if (sets.empty()) throw InputError("pk_limits: sequence must be nonempty");
    const SampleGrid& grid = sets.front().grid;
    for (const auto& s : sets) {
        if (!(s.grid == grid)) throw InputError("pk_limits: mismatched grids");
    }
    if (!(target.grid == grid)) throw InputError("pk_limits: target grid mismatch");

    const std::size_t n = sets.size();
    const std::size_t tail_start = n / 2;  // tail = last ceil(n/2) sets

    // Candidates: points that actually belong to some tail set.
    std::vector<char> candidate(grid.size(), 0);
    for (std::size_t i = tail_start; i < n; ++i) {
        for (const auto m : sets[i].members) candidate[m] = 1;
    }

    // Count, per point, how many tail dilations contain it.
    std::vector<std::uint32_t> dilation_hits(grid.size(), 0);
    const std::uint32_t tail_count = static_cast<std::uint32_t>(n - tail_start);
    for (std::size_t i = tail_start; i < n; ++i) {
        const auto dil = dilate_one_step(grid, sets[i].members);
        for (const auto m : dil) dilation_hits[m] += 1;
    }

    PKLimitResult out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!candidate[i]) continue;
        out.limsup_members.push_back(static_cast<std::uint32_t>(i));
        if (dilation_hits[i] == tail_count) {
            out.liminf_members.push_back(static_cast<std::uint32_t>(i));
        }
    }
    out.hausdorff_gap_to_target = hausdorff_gap(grid, out.limsup_members, target.members);
    if (out.limsup_members.empty() && target.members.empty()) {
        out.hausdorff_gap_to_target = GapValue::of(0.0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hemicontinuity probe

HemiProbeResult hemicontinuity_probe(const FuncExpr& g, const SampleGrid& grid, double s,
                                     std::span<const double> deltas) {
    if (deltas.empty()) throw InputError("hemicontinuity_probe: deltas must be nonempty");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] <= 0.0) throw InputError("hemicontinuity_probe: deltas must be positive");
        if (i > 0 && deltas[i] >= deltas[i - 1]) {
            throw InputError("hemicontinuity_probe: deltas must be sorted decreasing");
        }
    }
    const LevelSet at = sublevel(g, grid, s);
    HemiProbeResult out;
    out.s = s;
    for (const double d : deltas) {
        const LevelSet below = sublevel(g, grid, s - d);
        const LevelSet above = sublevel(g, grid, s + d);
        HemiProbeEntry entry{d, directed_gap(grid, at.members, below.members),
                             directed_gap(grid, above.members, at.members)};
        out.entries.push_back(entry);
    }
    const double floor_tol = grid.max_step() + 1e-9;
    for (auto it = out.entries.rbegin(); it != out.entries.rend(); ++it) {
        if (!it->lower_gap.empty) {
            out.lower_hemicontinuous_like = it->lower_gap.value <= floor_tol;
            break;
        }
    }
    for (auto it = out.entries.rbegin(); it != out.entries.rend(); ++it) {
        if (!it->upper_gap.empty) {
            out.upper_hemicontinuous_like = it->upper_gap.value <= floor_tol;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

void write_level_set_csv(std::ostream& os, const FuncExpr& g, const LevelSet& set) {
    const int d = set.grid.dimension();
    for (int a = 1; a <= d; ++a) {
        if (a > 1) os << ',';
        os << 'x' << a;
    }
    os << ",g_value\n";
    std::vector<double> pt(static_cast<std::size_t>(d));
    for (const auto m : set.members) {
        set.grid.fill_point(m, pt);
        for (int a = 0; a < d; ++a) {
            if (a) os << ',';
            os << format_double(pt[static_cast<std::size_t>(a)]);
        }
        os << ',' << format_double(g.eval(pt)) << '\n';
    }
}

}  // namespace komparo
