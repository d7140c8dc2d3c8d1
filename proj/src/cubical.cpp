#include "topofield/cubical.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>

#include "topofield/error.hpp"

namespace topofield {

namespace {

struct UnionFind {
    std::vector<Index> parent;
    explicit UnionFind(Index n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Index{0});
    }
    Index find(Index x) {
        Index r = x;
        while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
        while (parent[static_cast<std::size_t>(x)] != r) {
            const Index next = parent[static_cast<std::size_t>(x)];
            parent[static_cast<std::size_t>(x)] = r;
            x = next;
        }
        return r;
    }
};

// Column of a boundary matrix over Z/2: sorted filtration positions.
using Column = std::vector<std::uint32_t>;

void add_column(Column& target, const Column& source, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

// Order-preserving map of a double onto unsigned integers.
std::uint64_t sort_key(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return (b >> 63) ? ~b : (b | (std::uint64_t{1} << 63));
}

// Indices by decreasing value; equal values by index (ascending or
// descending). Stable LSD radix sort on 11-bit digits.
std::vector<Index> descending_order(const std::vector<double>& values, bool index_ascending) {
    const std::size_t n = values.size();
    std::vector<std::uint64_t> key(n), key2(n);
    std::vector<Index> idx(n), idx2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = index_ascending ? i : n - 1 - i;
        idx[i] = static_cast<Index>(k);
        key[i] = ~sort_key(values[k]);
    }
    constexpr int bits = 11;
    constexpr std::size_t buckets = std::size_t{1} << bits;
    std::vector<std::size_t> count(buckets);
    for (int shift = 0; shift < 64; shift += bits) {
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++count[(key[i] >> shift) & (buckets - 1)];
        if (n && count[(key[0] >> shift) & (buckets - 1)] == n) continue;  // digit constant
        std::size_t acc = 0;
        for (auto& c : count) {
            const std::size_t t = c;
            c = acc;
            acc += t;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t pos = count[(key[i] >> shift) & (buckets - 1)]++;
            key2[pos] = key[i];
            idx2[pos] = idx[i];
        }
        key.swap(key2);
        idx.swap(idx2);
    }
    return idx;
}

}  // namespace

CubicalFiltration::CubicalFiltration(const GridField& field, TieBreak tie)
    : geom_(field.geometry), values_(field.values) {
    const Index n = geom_.size();
    require(static_cast<Index>(values_.size()) == n, ErrorKind::invalid_argument,
            "field value count does not match its grid");
    for (double v : values_)
        require(std::isfinite(v), ErrorKind::invalid_argument, "field values must be finite");
    order_ = descending_order(values_, tie == TieBreak::index_ascending);
    rank_.resize(static_cast<std::size_t>(n));
    for (Index r = 0; r < n; ++r)
        rank_[static_cast<std::size_t>(order_[static_cast<std::size_t>(r)])] =
            static_cast<std::uint32_t>(r);
    for (int a = 0; a < max_dim; ++a) cshape_[a] = a < geom_.dim ? 2 * geom_.shape[a] - 1 : 1;
}

CubicalFiltration build_filtration(const GridField& field, TieBreak tie) {
    return CubicalFiltration(field, tie);
}

Extent CubicalFiltration::cell_coords(Index cell) const {
    Extent c{};
    c[2] = cell % cshape_[2];
    cell /= cshape_[2];
    c[1] = cell % cshape_[1];
    c[0] = cell / cshape_[1];
    return c;
}

int CubicalFiltration::cell_dim(Index cell) const {
    const Extent c = cell_coords(cell);
    int k = 0;
    for (int a = 0; a < geom_.dim; ++a) k += static_cast<int>(c[a] & 1);
    return k;
}

std::vector<Index> CubicalFiltration::cell_vertices(Index cell) const {
    const Extent c = cell_coords(cell);
    std::vector<Index> out{0};
    std::vector<Extent> acc{Extent{0, 0, 0}};
    for (int a = 0; a < geom_.dim; ++a) {
        std::vector<Extent> next;
        if (c[a] & 1) {
            for (auto e : acc) {
                e[a] = (c[a] - 1) / 2;
                next.push_back(e);
                e[a] = (c[a] + 1) / 2;
                next.push_back(e);
            }
        } else {
            for (auto e : acc) {
                e[a] = c[a] / 2;
                next.push_back(e);
            }
        }
        acc.swap(next);
    }
    out.clear();
    for (const auto& e : acc) out.push_back(geom_.flat(e));
    return out;
}

std::uint32_t CubicalFiltration::cell_rank(Index cell) const {
    std::uint32_t r = 0;
    for (Index v : cell_vertices(cell)) r = std::max(r, rank_[static_cast<std::size_t>(v)]);
    return r;
}

double CubicalFiltration::cell_value(Index cell) const {
    return values_[static_cast<std::size_t>(order_[cell_rank(cell)])];
}

std::vector<Index> CubicalFiltration::faces(Index cell) const {
    const Extent c = cell_coords(cell);
    std::vector<Index> out;
    for (int a = 0; a < geom_.dim; ++a) {
        if (!(c[a] & 1)) continue;
        Extent lo = c, hi = c;
        lo[a] -= 1;
        hi[a] += 1;
        out.push_back(cell_index(lo));
        out.push_back(cell_index(hi));
    }
    return out;
}

std::uint32_t CubicalFiltration::vertices_at_level(double u) const {
    const auto it = std::partition_point(order_.begin(), order_.end(), [&](Index v) {
        return values_[static_cast<std::size_t>(v)] >= u;
    });
    return static_cast<std::uint32_t>(it - order_.begin());
}

bool CubicalFiltration::cell_at_level(Index cell, double u) const { return cell_value(cell) >= u; }

std::vector<Index> CubicalFiltration::cells_at_level(double u) const {
    std::vector<Index> out;
    const Index n = cell_count();
    for (Index c = 0; c < n; ++c)
        if (cell_at_level(c, u)) out.push_back(c);
    return out;
}

std::vector<Index> CubicalFiltration::cell_counts_at_level(double u) const {
    std::vector<Index> counts(static_cast<std::size_t>(geom_.dim + 1), 0);
    const Index n = cell_count();
    for (Index c = 0; c < n; ++c)
        if (cell_at_level(c, u)) ++counts[static_cast<std::size_t>(cell_dim(c))];
    return counts;
}

std::int64_t CubicalFiltration::euler_characteristic(double u) const {
    const auto counts = cell_counts_at_level(u);
    std::int64_t chi = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * counts[k];
    return chi;
}

std::vector<Index> CubicalFiltration::filtration_order(int max_cell_dim) const {
    const Index n = cell_count();
    std::vector<std::pair<std::uint64_t, Index>> keyed;
    keyed.reserve(static_cast<std::size_t>(n));
    for (Index c = 0; c < n; ++c) {
        const int k = cell_dim(c);
        if (k > max_cell_dim) continue;
        keyed.emplace_back((static_cast<std::uint64_t>(cell_rank(c)) << 2) | static_cast<std::uint64_t>(k), c);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<Index> out;
    out.reserve(keyed.size());
    for (const auto& kv : keyed) out.push_back(kv.second);
    return out;
}

void vertex_neighbors(const GridGeometry& g, Index v, std::vector<Index>& out) {
    out.clear();
    const Extent k = g.unflat(v);
    for (int a = 0; a < g.dim; ++a) {
        if (k[a] > 0) {
            Extent m = k;
            --m[a];
            out.push_back(g.flat(m));
        }
        if (k[a] + 1 < g.shape[a]) {
            Extent m = k;
            ++m[a];
            out.push_back(g.flat(m));
        }
    }
}

bool is_local_max(const CubicalFiltration& f, Index v) {
    std::vector<Index> nb;
    vertex_neighbors(f.vertices(), v, nb);
    const auto r = f.vertex_rank(v);
    for (Index w : nb)
        if (f.vertex_rank(w) < r) return false;
    return true;
}

std::vector<int> label_components(const CubicalFiltration& f, double u) {
    const GridGeometry& g = f.vertices();
    const auto& vals = f.vertex_values();
    const Index n = g.size();
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    std::vector<Index> stack, nb;
    int next = 0;
    for (Index s = 0; s < n; ++s) {
        if (vals[static_cast<std::size_t>(s)] < u || label[static_cast<std::size_t>(s)] >= 0) continue;
        label[static_cast<std::size_t>(s)] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            vertex_neighbors(g, v, nb);
            for (Index w : nb) {
                if (vals[static_cast<std::size_t>(w)] >= u && label[static_cast<std::size_t>(w)] < 0) {
                    label[static_cast<std::size_t>(w)] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return label;
}

Index count_components(const GridField& field, double u, bool interior_only) {
    const GridGeometry& g = field.geometry;
    const auto& vals = field.values;
    const Index n = g.size();
    Index count = 0;
    if (g.dim == 1) {
        for (Index k = 0; k < n;) {
            if (!(vals[static_cast<std::size_t>(k)] >= u)) {
                ++k;
                continue;
            }
            const Index start = k;
            while (k < n && vals[static_cast<std::size_t>(k)] >= u) ++k;
            if (!interior_only || (start > 0 && k < n)) ++count;
        }
        return count;
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Index> stack, nb;
    for (Index s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)] || !(vals[static_cast<std::size_t>(s)] >= u)) continue;
        bool touches = false;
        seen[static_cast<std::size_t>(s)] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            if (!touches && g.on_boundary(g.unflat(v))) touches = true;
            vertex_neighbors(g, v, nb);
            for (Index w : nb)
                if (!seen[static_cast<std::size_t>(w)] && vals[static_cast<std::size_t>(w)] >= u) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }
        if (!interior_only || !touches) ++count;
    }
    return count;
}

std::vector<ComponentRecord> components_at_level(const CubicalFiltration& f, double u,
                                                 bool interior_only) {
    const GridGeometry& g = f.vertices();
    const auto label = label_components(f, u);
    int count = 0;
    for (int l : label) count = std::max(count, l + 1);
    std::vector<ComponentRecord> recs(static_cast<std::size_t>(count));
    std::vector<bool> seen(static_cast<std::size_t>(count), false);
    const Index n = g.size();
    for (Index v = 0; v < n; ++v) {
        const int l = label[static_cast<std::size_t>(v)];
        if (l < 0) continue;
        auto& r = recs[static_cast<std::size_t>(l)];
        const Coord x = g.position(v);
        if (!seen[static_cast<std::size_t>(l)]) {
            seen[static_cast<std::size_t>(l)] = true;
            r.id = l;
            r.root = v;
            r.reference_vertex = -1;
            r.bounding_box.dim = g.dim;
            r.bounding_box.lo = x;
            r.bounding_box.hi = x;
        }
        ++r.size;
        if (f.vertex_rank(v) < f.vertex_rank(r.root)) r.root = v;
        for (int a = 0; a < g.dim; ++a) {
            r.bounding_box.lo[a] = std::min(r.bounding_box.lo[a], x[a]);
            r.bounding_box.hi[a] = std::max(r.bounding_box.hi[a], x[a]);
        }
        if (g.on_boundary(g.unflat(v))) r.touches_boundary = true;
        // Flat order is lexicographic, so the first local max seen is the smallest.
        if (r.reference_vertex < 0 && is_local_max(f, v)) r.reference_vertex = v;
    }
    std::vector<ComponentRecord> out;
    for (auto& r : recs) {
        r.diameter = 0.0;
        for (int a = 0; a < g.dim; ++a) r.diameter = std::max(r.diameter, r.bounding_box.side(a));
        if (interior_only && r.touches_boundary) continue;
        out.push_back(r);
    }
    return out;
}

std::vector<double> boundary_touch_levels(const CubicalFiltration& f) {
    // Sweep down the filtration with union-find. A component that does not
    // yet reach the boundary keeps a linked list of its vertices; when it
    // first reaches it, at the value of the vertex being added, every listed
    // vertex gets that level.
    const GridGeometry& g = f.vertices();
    const auto& vals = f.vertex_values();
    const Index n = g.size();
    const double none = -std::numeric_limits<double>::infinity();
    std::vector<double> tau(static_cast<std::size_t>(n), none);
    UnionFind uf(n);
    std::vector<char> touched(static_cast<std::size_t>(n), 0);
    std::vector<Index> next(static_cast<std::size_t>(n), -1), tail(static_cast<std::size_t>(n));
    std::iota(tail.begin(), tail.end(), Index{0});
    auto mark = [&](Index root, double level) {
        for (Index v = root; v >= 0; v = next[static_cast<std::size_t>(v)]) tau[static_cast<std::size_t>(v)] = level;
        touched[static_cast<std::size_t>(root)] = 1;
    };
    std::vector<Index> nb;
    for (Index r = 0; r < n; ++r) {
        const Index v = f.vertex_at_rank(static_cast<std::uint32_t>(r));
        const double level = vals[static_cast<std::size_t>(v)];
        Index root = v;
        if (g.on_boundary(g.unflat(v))) mark(v, level);
        vertex_neighbors(g, v, nb);
        for (Index w : nb) {
            if (f.vertex_rank(w) >= static_cast<std::uint32_t>(r)) continue;
            const Index a = uf.find(root), b = uf.find(w);
            if (a == b) continue;
            const bool ta = touched[static_cast<std::size_t>(a)], tb = touched[static_cast<std::size_t>(b)];
            if (ta != tb) mark(ta ? b : a, level);
            uf.parent[static_cast<std::size_t>(b)] = a;
            if (!ta && !tb) {
                next[static_cast<std::size_t>(tail[static_cast<std::size_t>(a)])] = b;
                tail[static_cast<std::size_t>(a)] = tail[static_cast<std::size_t>(b)];
            }
            touched[static_cast<std::size_t>(a)] = touched[static_cast<std::size_t>(a)] || touched[static_cast<std::size_t>(b)];
            root = a;
        }
    }
    return tau;
}

std::vector<PersistencePair> PersistenceDiagram::of_dim(int q) const {
    std::vector<PersistencePair> out;
    for (const auto& p : pairs)
        if (p.dim == q) out.push_back(p);
    return out;
}

namespace {

// Vertex-and-edge sweep in filtration order. Emits 0-pairs, flags positive
// edges, and calls `after_rank(r, uf)` once all cells of rank r are in.
struct ZeroSweep {
    std::vector<PersistencePair> pairs;
    std::vector<Index> positive_edges;  // cell indices
};

ZeroSweep sweep_zero(const CubicalFiltration& f, const std::vector<double>& tau,
                     const std::function<void(std::uint32_t, UnionFind&)>& after_rank) {
    const GridGeometry& g = f.vertices();
    const auto& vals = f.vertex_values();
    const Index n = g.size();
    UnionFind uf(n);
    ZeroSweep out;
    std::vector<std::pair<Index, Index>> edges;  // (edge cell, neighbour)
    std::vector<Index> nb;
    for (Index r = 0; r < n; ++r) {
        const Index v = f.vertex_at_rank(static_cast<std::uint32_t>(r));
        const Extent kv = g.unflat(v);
        edges.clear();
        vertex_neighbors(g, v, nb);
        for (Index w : nb) {
            if (f.vertex_rank(w) >= static_cast<std::uint32_t>(r)) continue;
            const Extent kw = g.unflat(w);
            Extent c{0, 0, 0};
            for (int a = 0; a < g.dim; ++a) c[a] = kv[a] + kw[a];
            edges.emplace_back(f.cell_index(c), w);
        }
        std::sort(edges.begin(), edges.end());
        for (const auto& [cell, w] : edges) {
            Index a = uf.find(v), b = uf.find(w);
            if (a == b) {
                out.positive_edges.push_back(cell);
                continue;
            }
            if (f.vertex_rank(a) > f.vertex_rank(b)) std::swap(a, b);  // a is elder
            uf.parent[static_cast<std::size_t>(b)] = a;
            const double birth = vals[static_cast<std::size_t>(b)];
            const double death = vals[static_cast<std::size_t>(v)];
            if (b == v || birth == death) continue;  // zero persistence
            PersistencePair p;
            p.dim = 0;
            p.birth = birth;
            p.death = death;
            Extent cb = g.unflat(b);
            for (int ax = 0; ax < g.dim; ++ax) cb[ax] *= 2;
            p.birth_cell = f.cell_index(cb);
            p.death_cell = cell;
            p.touch_level = tau[static_cast<std::size_t>(b)];
            p.component = b;
            out.pairs.push_back(p);
        }
        if (after_rank) after_rank(static_cast<std::uint32_t>(r), uf);
    }
    // Essential components: one per root.
    for (Index v = 0; v < n; ++v) {
        if (uf.find(v) != v) continue;
        PersistencePair p;
        p.dim = 0;
        p.birth = vals[static_cast<std::size_t>(v)];
        Extent cb = g.unflat(v);
        for (int ax = 0; ax < g.dim; ++ax) cb[ax] *= 2;
        p.birth_cell = f.cell_index(cb);
        p.touch_level = tau[static_cast<std::size_t>(v)];
        p.component = v;
        out.pairs.push_back(p);
    }
    return out;
}

double cell_touch_level(const CubicalFiltration& f, const std::vector<double>& tau, Index cell) {
    double t = -std::numeric_limits<double>::infinity();
    for (Index v : f.cell_vertices(cell)) t = std::max(t, tau[static_cast<std::size_t>(v)]);
    return t;
}

}  // namespace

PersistenceDiagram zero_dim_persistence(const CubicalFiltration& f) {
    const auto tau = boundary_touch_levels(f);
    PersistenceDiagram d;
    d.dim = f.dim();
    d.max_dim = 0;
    d.pairs = sweep_zero(f, tau, {}).pairs;
    return d;
}

PersistenceDiagram reduce_persistence(const CubicalFiltration& f, int max_q) {
    require(max_q >= 0 && max_q <= f.dim(), ErrorKind::invalid_argument,
            "homology dimension must be in 0..d");
    if (max_q == 0) return zero_dim_persistence(f);
    const auto tau = boundary_touch_levels(f);
    const int top = std::min(f.dim(), max_q + 1);

    const std::vector<Index> order = f.filtration_order(top);
    std::vector<std::uint32_t> pos(static_cast<std::size_t>(f.cell_count()), 0);
    for (std::size_t k = 0; k < order.size(); ++k)
        pos[static_cast<std::size_t>(order[k])] = static_cast<std::uint32_t>(k);

    std::vector<PersistencePair> higher;
    std::vector<bool> is_pivot(order.size(), false);  // paired as a birth row
    std::vector<bool> negative(order.size(), false);  // column did not reduce to zero

    std::vector<std::int64_t> pivot_owner(order.size(), -1);
    Column scratch;
    for (int k = top; k >= 2; --k) {
        std::vector<Column> reduced;
        for (std::size_t j = 0; j < order.size(); ++j) {
            if (f.cell_dim(order[j]) != k) continue;
            if (is_pivot[j]) continue;  // clearing
            Column col;
            for (Index face : f.faces(order[j])) col.push_back(pos[static_cast<std::size_t>(face)]);
            std::sort(col.begin(), col.end());
            while (!col.empty() && pivot_owner[col.back()] >= 0)
                add_column(col, reduced[static_cast<std::size_t>(pivot_owner[col.back()])], scratch);
            if (!col.empty()) {
                const std::uint32_t piv = col.back();
                pivot_owner[piv] = static_cast<std::int64_t>(reduced.size());
                is_pivot[piv] = true;
                negative[j] = true;
                const Index bcell = order[piv];
                const double birth = f.cell_value(bcell);
                const double death = f.cell_value(order[j]);
                if (birth != death) {
                    PersistencePair p;
                    p.dim = k - 1;
                    p.birth = birth;
                    p.death = death;
                    p.birth_cell = bcell;
                    p.death_cell = order[j];
                    p.touch_level = cell_touch_level(f, tau, bcell);
                    higher.push_back(p);
                }
            }
            reduced.push_back(std::move(col));
        }
    }

    // Dimension 0 and positive edges from the union-find sweep.
    ZeroSweep zs;
    std::vector<std::pair<std::uint32_t, std::size_t>> pending;  // (rank, index into higher)
    {
        const auto z0 = sweep_zero(f, tau, {});
        zs.positive_edges = z0.positive_edges;
        zs.pairs = z0.pairs;
    }
    std::vector<bool> positive_edge(order.size(), false);
    for (Index e : zs.positive_edges) positive_edge[pos[static_cast<std::size_t>(e)]] = true;

    // Essential classes of dimension 1..max_q.
    for (std::size_t j = 0; j < order.size(); ++j) {
        const int k = f.cell_dim(order[j]);
        if (k < 1 || k > max_q || is_pivot[j]) continue;
        const bool positive = (k == 1) ? positive_edge[j] : !negative[j];
        if (!positive) continue;
        PersistencePair p;
        p.dim = k;
        p.birth = f.cell_value(order[j]);
        p.birth_cell = order[j];
        p.touch_level = cell_touch_level(f, tau, order[j]);
        higher.push_back(p);
    }

    // Component of each higher pair at its birth: replay the sweep.
    for (std::size_t k = 0; k < higher.size(); ++k)
        pending.emplace_back(f.cell_rank(higher[k].birth_cell), k);
    std::sort(pending.begin(), pending.end());
    std::size_t next = 0;
    sweep_zero(f, tau, [&](std::uint32_t r, UnionFind& uf) {
        while (next < pending.size() && pending[next].first == r) {
            auto& p = higher[pending[next].second];
            p.component = uf.find(f.cell_vertices(p.birth_cell).front());
            ++next;
        }
    });

    PersistenceDiagram d;
    d.dim = f.dim();
    d.max_dim = max_q;
    d.pairs = std::move(zs.pairs);
    d.pairs.insert(d.pairs.end(), higher.begin(), higher.end());
    return d;
}

namespace {

struct Event {
    double level;
    int delta;
};

std::vector<Event> pair_events(const PersistenceDiagram& d, int q, bool interior_only) {
    std::vector<Event> ev;
    for (const auto& p : d.pairs) {
        if (p.dim != q) continue;
        const double death = interior_only ? p.interior_death() : p.death;
        if (!(p.birth > death)) continue;
        ev.push_back({p.birth, +1});
        if (std::isfinite(death)) ev.push_back({death, -1});
    }
    return ev;
}

}  // namespace

std::int64_t BettiPath::at(double u) const {
    std::int64_t b = 0;
    for (std::size_t k = 0; k < jump_levels.size() && jump_levels[k] >= u; ++k) b += jumps[k];
    return b;
}

BettiPath betti_curve(const PersistenceDiagram& d, const std::vector<double>& levels, int q,
                      bool interior_only) {
    require(std::is_sorted(levels.begin(), levels.end()), ErrorKind::invalid_argument,
            "levels must be sorted ascending");
    auto ev = pair_events(d, q, interior_only);
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) { return a.level > b.level; });
    BettiPath path;
    path.levels = levels;
    for (std::size_t k = 0; k < ev.size();) {
        std::size_t m = k;
        int net = 0;
        while (m < ev.size() && ev[m].level == ev[k].level) net += ev[m++].delta;
        if (net != 0) {
            path.jump_levels.push_back(ev[k].level);
            path.jumps.push_back(net);
        }
        k = m;
    }
    // Cumulative from the top; evaluate levels descending.
    path.values.assign(levels.size(), 0);
    std::int64_t acc = 0;
    std::size_t j = 0;
    for (std::size_t i = levels.size(); i-- > 0;) {
        while (j < path.jump_levels.size() && path.jump_levels[j] >= levels[i]) acc += path.jumps[j++];
        path.values[i] = acc;
    }
    return path;
}

std::int64_t betti_plus_at(const BettiPath& path, double u) {
    std::int64_t b = 0;
    for (std::size_t k = 0; k < path.jump_levels.size() && path.jump_levels[k] >= u; ++k)
        b += std::max<std::int64_t>(path.jumps[k], 0);
    return b;
}

std::int64_t betti_minus_at(const BettiPath& path, double u) {
    std::int64_t b = 0;
    for (std::size_t k = 0; k < path.jump_levels.size() && path.jump_levels[k] >= u; ++k)
        b += std::max<std::int64_t>(-path.jumps[k], 0);
    return b;
}

MonotoneSplit split_monotone(const BettiPath& path) {
    MonotoneSplit s;
    s.levels = path.levels;
    s.plus.assign(path.levels.size(), 0);
    s.minus.assign(path.levels.size(), 0);
    std::int64_t p = 0, m = 0;
    std::size_t j = 0;
    for (std::size_t i = path.levels.size(); i-- > 0;) {
        while (j < path.jump_levels.size() && path.jump_levels[j] >= path.levels[i]) {
            p += std::max<std::int64_t>(path.jumps[j], 0);
            m += std::max<std::int64_t>(-path.jumps[j], 0);
            ++j;
        }
        s.plus[i] = p;
        s.minus[i] = m;
    }
    return s;
}

std::int64_t persistent_betti(const PersistenceDiagram& d, double u_minus, double u_plus, int q,
                              bool interior_only) {
    require(u_plus >= u_minus, ErrorKind::invalid_argument, "persistent Betti needs u_plus >= u_minus");
    std::int64_t n = 0;
    for (const auto& p : d.pairs) {
        if (p.dim != q) continue;
        const double death = interior_only ? p.interior_death() : p.death;
        if (p.birth >= u_plus && death < u_minus) ++n;
    }
    return n;
}

std::vector<double> critical_values(const CubicalFiltration& f) {
    std::vector<double> v = f.vertex_values();
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<CriticalPoint> locate_critical_points(const GridField& field,
                                                  const std::vector<GridField>& gradient,
                                                  const Box& window, double lo, double hi) {
    const GridGeometry& g = field.geometry;
    const int d = g.dim;
    require(static_cast<int>(gradient.size()) == d, ErrorKind::invalid_argument,
            "need one derivative field per axis");
    for (const auto& gf : gradient)
        require(gf.geometry == g, ErrorKind::geometry, "derivative field grid differs from the field");
    const int corners = 1 << d;
    std::vector<CriticalPoint> out;
    Extent cells{1, 1, 1};
    for (int a = 0; a < d; ++a) cells[a] = g.shape[a] - 1;
    std::vector<Index> cv(static_cast<std::size_t>(corners));
    Extent k{0, 0, 0};
    for (k[0] = 0; k[0] < cells[0]; ++k[0])
        for (k[1] = 0; k[1] < cells[1]; ++k[1])
            for (k[2] = 0; k[2] < cells[2]; ++k[2]) {
                for (int c = 0; c < corners; ++c) {
                    Extent m = k;
                    for (int a = 0; a < d; ++a) m[a] += (c >> a) & 1;
                    cv[static_cast<std::size_t>(c)] = g.flat(m);
                }
                bool all_change = true;
                for (int a = 0; a < d && all_change; ++a) {
                    bool pos = false, neg = false;
                    for (int c = 0; c < corners; ++c) {
                        const double v = gradient[static_cast<std::size_t>(a)]
                                             .values[static_cast<std::size_t>(cv[static_cast<std::size_t>(c)])];
                        (v > 0.0 ? pos : neg) = true;
                    }
                    all_change = pos && neg;
                }
                if (!all_change) continue;

                auto weights = [&](const std::array<double, 3>& t, int c, int skip) {
                    double w = 1.0;
                    for (int a = 0; a < d; ++a) {
                        if (a == skip) continue;
                        w *= ((c >> a) & 1) ? t[a] : 1.0 - t[a];
                    }
                    return w;
                };
                std::array<double, 3> t{0.5, 0.5, 0.5};
                bool ok = false;
                for (int it = 0; it < 30; ++it) {
                    double gv[3] = {0, 0, 0};
                    double J[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
                    for (int c = 0; c < corners; ++c) {
                        const double w = weights(t, c, -1);
                        for (int a = 0; a < d; ++a) {
                            const double G = gradient[static_cast<std::size_t>(a)]
                                                 .values[static_cast<std::size_t>(cv[static_cast<std::size_t>(c)])];
                            gv[a] += w * G;
                            for (int b = 0; b < d; ++b) {
                                const double dw = (((c >> b) & 1) ? 1.0 : -1.0) * weights(t, c, b);
                                J[a][b] += dw * G;
                            }
                        }
                    }
                    // Solve J s = -g (d <= 3) by Cramer's rule.
                    double s[3] = {0, 0, 0};
                    if (d == 1) {
                        if (J[0][0] == 0.0) break;
                        s[0] = -gv[0] / J[0][0];
                    } else if (d == 2) {
                        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
                        if (det == 0.0) break;
                        s[0] = (-gv[0] * J[1][1] + gv[1] * J[0][1]) / det;
                        s[1] = (-gv[1] * J[0][0] + gv[0] * J[1][0]) / det;
                    } else {
                        const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                                           J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                                           J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
                        if (det == 0.0) break;
                        for (int col = 0; col < 3; ++col) {
                            double M[3][3];
                            for (int a = 0; a < 3; ++a)
                                for (int b = 0; b < 3; ++b) M[a][b] = (b == col) ? -gv[a] : J[a][b];
                            s[col] = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                                      M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                                      M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
                                     det;
                        }
                    }
                    double step = 0.0;
                    for (int a = 0; a < d; ++a) {
                        t[a] += s[a];
                        step = std::max(step, std::abs(s[a]));
                    }
                    if (step > 10.0) break;
                    if (step < 1e-12) {
                        ok = true;
                        break;
                    }
                }
                if (!ok) continue;
                bool inside = true;
                for (int a = 0; a < d; ++a) inside = inside && t[a] >= 0.0 && t[a] < 1.0;
                if (!inside) continue;

                CriticalPoint cp;
                cp.vertex = g.flat(k);
                const Coord base = g.position(k);
                for (int a = 0; a < d; ++a) cp.position[a] = base[a] + t[a] * g.spacing;
                double val = 0.0;
                for (int c = 0; c < corners; ++c)
                    val += weights(t, c, -1) * field.values[static_cast<std::size_t>(cv[static_cast<std::size_t>(c)])];
                cp.value = val;
                bool in_window = true;
                for (int a = 0; a < d; ++a)
                    in_window = in_window && cp.position[a] >= window.lo[a] && cp.position[a] < window.hi[a];
                if (!in_window || val < lo || val >= hi) continue;
                out.push_back(cp);
            }
    return out;
}

void write_diagram_csv(const PersistenceDiagram& d, const std::string& path) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::resource, "cannot write " + path);
    os << "dim,birth,death,interior\n" << std::setprecision(17);
    for (const auto& p : d.pairs) {
        os << p.dim << ',' << p.birth << ',';
        if (p.essential())
            os << "-inf";
        else
            os << p.death;
        os << ',' << (p.interior() ? 1 : 0) << '\n';
    }
}

void write_betti_csv(const std::vector<double>& levels,
                     const std::vector<std::vector<std::int64_t>>& curves, bool interior_only,
                     const std::string& path) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::resource, "cannot write " + path);
    os << "# mode=" << (interior_only ? "interior" : "full") << '\n' << "u";
    for (std::size_t q = 0; q < curves.size(); ++q) os << ",beta" << q;
    os << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        os << levels[i];
        for (const auto& c : curves) os << ',' << c[i];
        os << '\n';
    }
}

}  // namespace topofield
