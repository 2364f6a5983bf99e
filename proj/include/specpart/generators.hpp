#pragma once

#include "specpart/graph.hpp"
#include "specpart/pipeline.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specpart {

struct GeneratorSpec {
    enum class Kind { Grid2D, Stencil3D, Ring, Path, RandomRegular, ScaleFree };

    Kind kind = Kind::Grid2D;
    std::int64_t a = 0; // width / n
    std::int64_t b = 0; // height / degree / attach
    std::int64_t c = 0; // depth
    int stencil_points = 27; // 7 or 27
    std::uint64_t seed = 0;

    static GeneratorSpec grid2d(std::int64_t w, std::int64_t h);
    static GeneratorSpec stencil3d(std::int64_t x, std::int64_t y, std::int64_t z, int points = 27);
    static GeneratorSpec ring(std::int64_t n);
    static GeneratorSpec path(std::int64_t n);
    static GeneratorSpec random_regular(std::int64_t n, std::int64_t deg, std::uint64_t seed);
    static GeneratorSpec scale_free(std::int64_t n, std::int64_t attach, std::uint64_t seed);

    // "grid2d:4,3", "stencil3d:20,20,20,p7", "scalefree:5000,4,s13", ...
    static GeneratorSpec parse(const std::string& text);
    std::string name() const;
};

// Deterministic for a fixed spec (including seed). Generated graphs are
// connected; RandomRegular reseeds internally until connected.
Graph generate(const GeneratorSpec& spec);

struct SweepCell {
    std::string graph;
    std::string config;
    int iterations = 0;
    double cut = 0.0;
    double imbalance = 0.0;
    double seconds = 0.0;
    std::string error; // empty on success
};

struct SweepTable {
    std::vector<SweepCell> cells;
    std::string to_tsv() const;
};

// Cross product of graphs and configs; pipeline errors are recorded per
// cell instead of aborting the sweep.
SweepTable run_sweep(const std::vector<std::pair<std::string, const Graph*>>& graphs,
                     const std::vector<std::pair<std::string, RunConfig>>& configs);

} // namespace specpart
