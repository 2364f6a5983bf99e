#include "specpart/generators.hpp"

#include "specpart/errors.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace specpart {

GeneratorSpec GeneratorSpec::grid2d(std::int64_t w, std::int64_t h) {
    GeneratorSpec s;
    s.kind = Kind::Grid2D;
    s.a = w;
    s.b = h;
    return s;
}

GeneratorSpec GeneratorSpec::stencil3d(std::int64_t x, std::int64_t y, std::int64_t z, int points) {
    GeneratorSpec s;
    s.kind = Kind::Stencil3D;
    s.a = x;
    s.b = y;
    s.c = z;
    s.stencil_points = points;
    return s;
}

GeneratorSpec GeneratorSpec::ring(std::int64_t n) {
    GeneratorSpec s;
    s.kind = Kind::Ring;
    s.a = n;
    return s;
}

GeneratorSpec GeneratorSpec::path(std::int64_t n) {
    GeneratorSpec s;
    s.kind = Kind::Path;
    s.a = n;
    return s;
}

GeneratorSpec GeneratorSpec::random_regular(std::int64_t n, std::int64_t deg, std::uint64_t seed) {
    GeneratorSpec s;
    s.kind = Kind::RandomRegular;
    s.a = n;
    s.b = deg;
    s.seed = seed;
    return s;
}

GeneratorSpec GeneratorSpec::scale_free(std::int64_t n, std::int64_t attach, std::uint64_t seed) {
    GeneratorSpec s;
    s.kind = Kind::ScaleFree;
    s.a = n;
    s.b = attach;
    s.seed = seed;
    return s;
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
    const std::size_t colon = text.find(':');
    const std::string head = text.substr(0, colon);
    std::vector<std::string> args;
    if (colon != std::string::npos) {
        std::istringstream rest(text.substr(colon + 1));
        std::string tok;
        while (std::getline(rest, tok, ',')) args.push_back(tok);
    }

    auto num = [&](std::size_t i) -> std::int64_t {
        if (i >= args.size()) throw std::invalid_argument("generator spec '" + text + "': missing argument");
        return std::stoll(args[i]);
    };

    GeneratorSpec s;
    if (head == "grid2d") {
        s = grid2d(num(0), num(1));
    } else if (head == "stencil3d") {
        s = stencil3d(num(0), num(1), num(2));
        for (std::size_t i = 3; i < args.size(); ++i)
            if (args[i] == "p7")
                s.stencil_points = 7;
            else if (args[i] == "p27")
                s.stencil_points = 27;
            else if (!args[i].empty() && args[i][0] == 's')
                s.seed = std::stoull(args[i].substr(1));
    } else if (head == "ring") {
        s = ring(num(0));
    } else if (head == "path") {
        s = path(num(0));
    } else if (head == "randomregular") {
        s = random_regular(num(0), num(1), 0);
        if (args.size() > 2 && args[2][0] == 's') s.seed = std::stoull(args[2].substr(1));
    } else if (head == "scalefree") {
        s = scale_free(num(0), num(1), 0);
        if (args.size() > 2 && args[2][0] == 's') s.seed = std::stoull(args[2].substr(1));
    } else {
        throw std::invalid_argument("unknown generator kind '" + head + "'");
    }
    return s;
}

std::string GeneratorSpec::name() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Grid2D: os << "grid2d:" << a << ',' << b; break;
    case Kind::Stencil3D:
        os << "stencil3d:" << a << ',' << b << ',' << c << ",p" << stencil_points;
        break;
    case Kind::Ring: os << "ring:" << a; break;
    case Kind::Path: os << "path:" << a; break;
    case Kind::RandomRegular: os << "randomregular:" << a << ',' << b << ",s" << seed; break;
    case Kind::ScaleFree: os << "scalefree:" << a << ',' << b << ",s" << seed; break;
    }
    return os.str();
}

namespace {

using Edge = std::pair<std::int32_t, std::int32_t>;

Graph grid2d_graph(std::int64_t w, std::int64_t h) {
    if (w < 1 || h < 1) throw InfeasibleError("grid2d: dimensions must be positive");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(2 * w * h));
    auto id = [&](std::int64_t x, std::int64_t y) { return static_cast<std::int32_t>(y * w + x); };
    for (std::int64_t y = 0; y < h; ++y)
        for (std::int64_t x = 0; x < w; ++x) {
            if (x + 1 < w) edges.emplace_back(id(x, y), id(x + 1, y));
            if (y + 1 < h) edges.emplace_back(id(x, y), id(x, y + 1));
        }
    return graph_from_edges(w * h, edges);
}

Graph stencil3d_graph(std::int64_t nx, std::int64_t ny, std::int64_t nz, int points) {
    if (nx < 1 || ny < 1 || nz < 1) throw InfeasibleError("stencil3d: dimensions must be positive");
    if (points != 7 && points != 27) throw InfeasibleError("stencil3d: stencil must be 7 or 27");

    std::vector<Edge> edges;
    auto id = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
        return static_cast<std::int32_t>((z * ny + y) * nx + x);
    };
    for (std::int64_t z = 0; z < nz; ++z)
        for (std::int64_t y = 0; y < ny; ++y)
            for (std::int64_t x = 0; x < nx; ++x)
                for (std::int64_t dz = -1; dz <= 1; ++dz)
                    for (std::int64_t dy = -1; dy <= 1; ++dy)
                        for (std::int64_t dx = -1; dx <= 1; ++dx) {
                            if (dx == 0 && dy == 0 && dz == 0) continue;
                            if (points == 7 && std::abs(dx) + std::abs(dy) + std::abs(dz) != 1)
                                continue;
                            const std::int64_t X = x + dx, Y = y + dy, Z = z + dz;
                            if (X < 0 || X >= nx || Y < 0 || Y >= ny || Z < 0 || Z >= nz) continue;
                            const std::int32_t u = id(x, y, z), v = id(X, Y, Z);
                            if (u < v) edges.emplace_back(u, v);
                        }
    return graph_from_edges(nx * ny * nz, edges);
}

Graph ring_graph(std::int64_t n) {
    if (n < 3) throw InfeasibleError("ring: need n >= 3");
    std::vector<Edge> edges;
    for (std::int64_t i = 0; i < n; ++i)
        edges.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>((i + 1) % n));
    return graph_from_edges(n, edges);
}

Graph path_graph(std::int64_t n) {
    if (n < 1) throw InfeasibleError("path: need n >= 1");
    std::vector<Edge> edges;
    for (std::int64_t i = 0; i + 1 < n; ++i)
        edges.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(i + 1));
    return graph_from_edges(n, edges);
}

bool is_connected(const Graph& g) {
    if (g.n() == 0) return false;
    std::vector<std::int8_t> seen(g.n(), 0);
    std::vector<std::int64_t> stack{0};
    seen[0] = 1;
    std::int64_t count = 1;
    while (!stack.empty()) {
        const std::int64_t v = stack.back();
        stack.pop_back();
        for (std::int64_t k = g.adjacency.row_offsets[v]; k < g.adjacency.row_offsets[v + 1]; ++k) {
            const std::int32_t u = g.adjacency.col_indices[k];
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == g.n();
}

// Stub-pairing model; re-pairs on collisions and reseeds until connected.
Graph random_regular_graph(std::int64_t n, std::int64_t deg, std::uint64_t seed) {
    if (n < 2 || deg < 1 || deg >= n) throw InfeasibleError("randomregular: need 1 <= deg < n >= 2");
    if ((n * deg) % 2 != 0) throw InfeasibleError("randomregular: n*deg must be even");

    for (std::uint64_t attempt = 0;; ++attempt) {
        std::mt19937_64 rng(seed + attempt * 0x9e3779b97f4a7c15ULL);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::int32_t> stubs;
            stubs.reserve(n * deg);
            for (std::int64_t v = 0; v < n; ++v)
                for (std::int64_t k = 0; k < deg; ++k) stubs.push_back(static_cast<std::int32_t>(v));
            std::shuffle(stubs.begin(), stubs.end(), rng);

            std::vector<Edge> edges;
            edges.reserve(stubs.size() / 2);
            bool ok = true;
            for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
                std::int32_t u = stubs[i], v = stubs[i + 1];
                if (u == v) ok = false;
                if (u > v) std::swap(u, v);
                edges.emplace_back(u, v);
            }
            if (!ok) continue;
            std::sort(edges.begin(), edges.end());
            if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;

            Graph g = graph_from_edges(n, edges);
            if (is_connected(g)) return g;
        }
    }
}

// Preferential attachment: each new vertex attaches to `attach` distinct
// existing vertices sampled by degree (endpoint-list trick).
Graph scale_free_graph(std::int64_t n, std::int64_t attach, std::uint64_t seed) {
    if (attach < 1 || n <= attach) throw InfeasibleError("scalefree: need n > attach >= 1");

    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    std::vector<std::int32_t> endpoints;

    // start from a star on attach+1 vertices so early targets exist
    for (std::int64_t v = 1; v <= attach; ++v) {
        edges.emplace_back(0, static_cast<std::int32_t>(v));
        endpoints.push_back(0);
        endpoints.push_back(static_cast<std::int32_t>(v));
    }

    std::vector<std::int32_t> picked;
    for (std::int64_t v = attach + 1; v < n; ++v) {
        picked.clear();
        while (static_cast<std::int64_t>(picked.size()) < attach) {
            const std::int32_t target = endpoints[rng() % endpoints.size()];
            if (std::find(picked.begin(), picked.end(), target) == picked.end())
                picked.push_back(target);
        }
        for (std::int32_t t : picked) {
            edges.emplace_back(t, static_cast<std::int32_t>(v));
            endpoints.push_back(t);
            endpoints.push_back(static_cast<std::int32_t>(v));
        }
    }
    return graph_from_edges(n, edges);
}

} // namespace

Graph generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
    case GeneratorSpec::Kind::Grid2D: return grid2d_graph(spec.a, spec.b);
    case GeneratorSpec::Kind::Stencil3D:
        return stencil3d_graph(spec.a, spec.b, spec.c, spec.stencil_points);
    case GeneratorSpec::Kind::Ring: return ring_graph(spec.a);
    case GeneratorSpec::Kind::Path: return path_graph(spec.a);
    case GeneratorSpec::Kind::RandomRegular:
        return random_regular_graph(spec.a, spec.b, spec.seed);
    case GeneratorSpec::Kind::ScaleFree: return scale_free_graph(spec.a, spec.b, spec.seed);
    }
    throw std::invalid_argument("generate: unknown kind");
}

std::string SweepTable::to_tsv() const {
    std::ostringstream os;
    os << "graph\tconfig\titerations\tcut\timbalance\tseconds\terror\n";
    for (const SweepCell& c : cells) {
        os << c.graph << '\t' << c.config << '\t' << c.iterations << '\t' << c.cut << '\t'
           << c.imbalance << '\t' << c.seconds << '\t' << c.error << '\n';
    }
    return os.str();
}

SweepTable run_sweep(const std::vector<std::pair<std::string, const Graph*>>& graphs,
                     const std::vector<std::pair<std::string, RunConfig>>& configs) {
    SweepTable table;
    for (const auto& [gname, g] : graphs) {
        for (const auto& [cname, cfg] : configs) {
            SweepCell cell;
            cell.graph = gname;
            cell.config = cname;
            try {
                RunResult r = partition_graph(*g, cfg);
                cell.iterations = r.report.iterations;
                cell.cut = r.report.cutsize;
                cell.imbalance = r.report.imbalance;
                cell.seconds = r.report.times.total_s;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

} // namespace specpart
