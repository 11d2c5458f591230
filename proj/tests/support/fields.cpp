#include "fields.hpp"

#include <cmath>
#include <random>

namespace hpez::test {

ScalarGrid make_field(const Dims &dims, ElementKind kind, const std::function<double(const std::vector<std::size_t> &)> &f) {
    Shape shape(dims);
    std::vector<double> data(shape.size());
    std::vector<std::size_t> c(dims.size(), 0);
    for (std::size_t i = 0; i < shape.size(); ++i) {
        data[i] = snap_to_kind(f(c), kind);
        for (std::size_t a = dims.size(); a-- > 0;) {
            if (++c[a] < dims[a]) break;
            c[a] = 0;
        }
    }
    return ScalarGrid(shape, kind, std::move(data));
}

ScalarGrid constant_field(const Dims &dims, double value, ElementKind kind) {
    return make_field(dims, kind, [&](const auto &) { return value; });
}

ScalarGrid trig_field(const Dims &dims, ElementKind kind, double scale) {
    return make_field(dims, kind, [&](const auto &c) {
        double v = 1.0;
        for (std::size_t a = 0; a < c.size(); ++a) {
            const double x = static_cast<double>(c[a]) / (scale + 3.0 * static_cast<double>(a));
            v *= a % 2 == 0 ? std::sin(x + 0.3) : std::cos(x);
        }
        return v;
    });
}

ScalarGrid gaussian_bumps(const Dims &dims, std::uint64_t seed, ElementKind kind) {
    std::mt19937_64 rng(seed);
    struct Bump {
        std::vector<double> centre;
        double width, height;
    };
    std::vector<Bump> bumps(6);
    for (auto &b : bumps) {
        for (auto d : dims) b.centre.push_back(std::uniform_real_distribution<double>(0, static_cast<double>(d))(rng));
        b.width = std::uniform_real_distribution<double>(3.0, 12.0)(rng);
        b.height = std::uniform_real_distribution<double>(-2.0, 5.0)(rng);
    }
    return make_field(dims, kind, [&](const auto &c) {
        double v = 0.0;
        for (const auto &b : bumps) {
            double r2 = 0.0;
            for (std::size_t a = 0; a < c.size(); ++a) {
                const double d = static_cast<double>(c[a]) - b.centre[a];
                r2 += d * d;
            }
            v += b.height * std::exp(-r2 / (2.0 * b.width * b.width));
        }
        return v;
    });
}

ScalarGrid white_noise(const Dims &dims, std::uint64_t seed, ElementKind kind) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    return make_field(dims, kind, [&](const auto &) { return nd(rng); });
}

ScalarGrid axis_noise_field(const Dims &dims, std::size_t axis, std::uint64_t seed, ElementKind kind) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> profile(dims[axis]);
    for (auto &p : profile) p = nd(rng);
    return make_field(dims, kind, [&](const auto &c) {
        double v = profile[c[axis]];
        for (std::size_t a = 0; a < c.size(); ++a) {
            if (a != axis) v *= std::sin(static_cast<double>(c[a]) / 8.0 + 0.5);
        }
        return v;
    });
}

ScalarGrid separable_noise_field(const Dims &dims, std::uint64_t seed, double noise, ElementKind kind) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, noise);
    std::vector<std::vector<double>> prof(dims.size());
    for (std::size_t a = 0; a < dims.size(); ++a) {
        for (std::size_t i = 0; i < dims[a]; ++i) prof[a].push_back(nd(rng));
    }
    return make_field(dims, kind, [&](const auto &c) {
        double v = 0.0;
        for (std::size_t a = 0; a < c.size(); ++a) {
            v += std::sin(static_cast<double>(c[a]) / 15.0) + prof[a][c[a]];
        }
        return v;
    });
}

ScalarGrid patchy_noise_field(const Dims &dims, std::uint64_t seed, ElementKind kind) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    return make_field(dims, kind, [&](const auto &c) {
        double v = 0.0;
        bool noisy = true;
        for (std::size_t a = 0; a < c.size(); ++a) {
            v += std::sin(static_cast<double>(c[a]) / 11.0);
            noisy = noisy && (c[a] / 8) % 2 == 0;
        }
        return v + (noisy ? nd(rng) : 0.1 * nd(rng));
    });
}

ScalarGrid pairwise_noise_field(const Dims &dims, std::uint64_t seed, double smooth, ElementKind kind) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const std::size_t rank = dims.size();
    std::vector<std::vector<double>> planes;
    std::vector<std::pair<std::size_t, std::size_t>> axes;
    for (std::size_t a = 0; a < rank; ++a) {
        for (std::size_t b = a + 1; b < rank; ++b) {
            axes.push_back({a, b});
            planes.emplace_back(dims[a] * dims[b]);
            for (auto &v : planes.back()) v = nd(rng);
        }
    }
    return make_field(dims, kind, [&](const auto &c) {
        double v = 0.0;
        for (std::size_t a = 0; a < rank; ++a) v += smooth * std::sin(static_cast<double>(c[a]) / 13.0);
        for (std::size_t p = 0; p < planes.size(); ++p) {
            v += planes[p][c[axes[p].first] * dims[axes[p].second] + c[axes[p].second]];
        }
        return v;
    });
}

ScalarGrid ramp_field(const Dims &dims, ElementKind kind) {
    return make_field(dims, kind, [&](const auto &c) {
        double v = 0.0;
        for (std::size_t a = 0; a < c.size(); ++a) v += static_cast<double>(c[a]) * (1.0 + 0.5 * static_cast<double>(a));
        return v;
    });
}

std::vector<NamedGrid> compliance_grids(bool include_large) {
    std::vector<NamedGrid> g;
    g.push_back({"trig-1d-4097", trig_field({4097})});
    g.push_back({"noise-1d-3000", white_noise({3000}, 11)});
    g.push_back({"trig-2d-300x257", trig_field({300, 257})});
    g.push_back({"bumps-2d-200x200-f64", gaussian_bumps({200, 200}, 3, ElementKind::Float64)});
    g.push_back({"axisnoise-2d-129x150", axis_noise_field({129, 150}, 0, 5)});
    g.push_back({"trig-3d-65x70x66", trig_field({65, 70, 66})});
    g.push_back({"bumps-3d-80x80x80", gaussian_bumps({80, 80, 80}, 7)});
    g.push_back({"axisnoise-3d-40x64x64", axis_noise_field({40, 64, 64}, 0, 9)});
    g.push_back({"noise-3d-33x33x33", white_noise({33, 33, 33}, 13)});
    g.push_back({"bumps-3d-i32", make_field({50, 60, 70}, ElementKind::Int32, [](const auto &c) {
                     return 1000.0 * std::sin(static_cast<double>(c[0] + c[1]) / 9.0) + 10.0 * static_cast<double>(c[2]);
                 })});
    g.push_back({"trig-4d-20x24x18x30", trig_field({20, 24, 18, 30})});
    if (include_large) {
        g.push_back({"trig-3d-256", trig_field({256, 256, 256}, ElementKind::Float32, 20.0)});
    } else {
        g.push_back({"trig-3d-96", trig_field({96, 96, 96}, ElementKind::Float32, 20.0)});
    }
    return g;
}

}  // namespace hpez::test
