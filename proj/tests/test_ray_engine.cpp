// SPDX-License-Identifier: Apache-2.0
//
// urbanrt - site-specific urban downlink ray-tracing simulator
// Copyright (C) 2026 The urbanrt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "oracles.hpp"

#include "urbanrt/city.hpp"
#include "urbanrt/ray_engine.hpp"
#include "urbanrt/rng.hpp"
#include "urbanrt/scene.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>

using namespace urbanrt;

namespace
{

constexpr double kF = 8.2e9; // table frequency, so conductivity needs no interpolation

Material concrete()
{
    return MaterialLibrary().get("concrete");
}

TraceLimits reflections_only(int order, SearchMode mode = SearchMode::exhaustive)
{
    TraceLimits l;
    l.max_reflections = order;
    l.max_diffractions = 0;
    l.max_transmissions = 0;
    l.max_paths = 1000;
    l.power_floor_dbm = -1000.0;
    l.search = mode;
    return l;
}

struct MicroScene
{
    std::vector<oracle::Poly> polys;
    Scene scene;
};

Vec3 random_in(Rng &rng, double lo, double hi)
{
    return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

Vec3 random_unit(Rng &rng)
{
    for (;;)
    {
        const Vec3 v = random_in(rng, -1.0, 1.0);
        const double n = v.norm();
        if (n > 0.1 && n <= 1.0)
            return v / n;
    }
}

/// Quads of random size and orientation. With `facing` set they sit around the origin
/// and roughly face it, so endpoints near the origin see multi-bounce chains.
MicroScene random_micro_scene(Rng &rng, int n_faces, bool facing = false)
{
    MicroScene m;
    const Material mat = concrete();
    std::vector<Face> faces;
    for (int i = 0; i < n_faces; ++i)
    {
        Vec3 c = random_in(rng, -20.0, 20.0);
        Vec3 n = random_unit(rng);
        if (facing)
        {
            c = random_unit(rng) * rng.uniform(15.0, 30.0);
            n = (random_unit(rng) * 0.3 - c.normalized()).normalized();
        }
        const Vec3 helper = std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
        const Vec3 u = cross(n, helper).normalized();
        const Vec3 v = cross(n, u);
        const double a = rng.uniform(5.0, 25.0);
        const double b = rng.uniform(5.0, 25.0);
        const std::array<Vec3, 4> q{c - u * a - v * b, c + u * a - v * b, c + u * a + v * b, c - u * a + v * b};
        faces.push_back(make_face(q, 0, true));
        oracle::Poly p = oracle::make_poly({q.begin(), q.end()});
        p.epsr = mat.epsr;
        p.sigma = mat.sigma_s_per_m[1];
        m.polys.push_back(p);
    }
    m.scene = make_scene(std::move(faces), {mat});
    return m;
}

std::vector<Face> box(Vec3 lo, Vec3 hi, int material)
{
    auto quad = [&](Vec3 a, Vec3 b, Vec3 d, Vec3 e, Vec3 out) {
        return make_face(std::array<Vec3, 4>{a, b, d, e}, material, false, out);
    };
    const double x0 = lo.x, y0 = lo.y, x1 = hi.x, y1 = hi.y, h = hi.z;
    return {
        quad({x0, y0, 0}, {x1, y0, 0}, {x1, y0, h}, {x0, y0, h}, {0, -1, 0}),
        quad({x1, y0, 0}, {x1, y1, 0}, {x1, y1, h}, {x1, y0, h}, {1, 0, 0}),
        quad({x1, y1, 0}, {x0, y1, 0}, {x0, y1, h}, {x1, y1, h}, {0, 1, 0}),
        quad({x0, y1, 0}, {x0, y0, 0}, {x0, y0, h}, {x0, y1, h}, {-1, 0, 0}),
        quad({x0, y0, h}, {x1, y0, h}, {x1, y1, h}, {x0, y1, h}, {0, 0, 1}),
    };
}

double field_amp(const Path &p, const Scene &s, double f)
{
    return path_field(p, s, f).amp;
}

std::vector<std::pair<double, double>> length_amp(const std::vector<Path> &paths, const Scene &s, double f)
{
    std::vector<std::pair<double, double>> out;
    for (const Path &p : paths)
        out.emplace_back(p.length_m, field_amp(p, s, f));
    std::sort(out.begin(), out.end());
    return out;
}

double knife_edge_db(double v)
{
    if (v <= -0.78)
        return 0.0;
    return 6.9 + 20.0 * std::log10(std::sqrt((v - 0.1) * (v - 0.1) + 1.0) + v - 0.1);
}

} // namespace

TEST(RayEngine, EmptySceneGivesOnlyTheDirectPath)
{
    const Scene s = make_scene({}, {concrete()});
    const auto paths = trace_paths(s, {0, 0, 10}, {100, 0, 10}, kF, reflections_only(3));
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].signature(), "direct");
    EXPECT_NEAR(paths[0].length_m, 100.0, 1e-12);
}

TEST(RayEngine, DirectAndGroundOverFlatEarth)
{
    const Scene s = build_scene(CityLayout{}, MaterialLibrary());
    const auto paths = trace_paths(s, {0, 0, 25}, {200, 0, 1.5}, kF, reflections_only(3));
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_EQ(paths[0].signature(), "direct");
    EXPECT_EQ(paths[1].signature(), "R");
    EXPECT_NEAR(paths[1].length_m, std::hypot(200.0, 26.5), 1e-9);
}

TEST(RayEngine, DirectPathDelay)
{
    const Scene s = make_scene({}, {concrete()});
    const auto paths = trace_paths(s, {0, 0, 0}, {300, 0, 0}, kF, reflections_only(0));
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_NEAR(paths[0].delay_s * 1e6, 1.0007, 1e-4);
}

TEST(RayEngine, FreeSpaceField)
{
    const Scene s = make_scene({}, {concrete()});
    const auto paths = trace_paths(s, {0, 0, 0}, {100, 0, 0}, kF, reflections_only(0));
    ASSERT_EQ(paths.size(), 1u);
    const double lambda = oracle::kC / kF;
    EXPECT_NEAR(paths[0].amp, lambda / (4.0 * oracle::kPi * 100.0), 1e-15);
    EXPECT_NEAR(std::remainder(paths[0].phase_rad + 2.0 * oracle::kPi * 100.0 / lambda, 2.0 * oracle::kPi), 0.0,
                1e-6);
    EXPECT_LE(std::abs(paths[0].phase_rad), oracle::kPi);
}

TEST(RayEngine, MatchesImageEnumerationOnMicroScenes)
{
    Rng rng(2024);
    int total = 0;
    int deep = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        const int n = 1 + trial % 3;
        const bool facing = trial % 2 == 0;
        const MicroScene m = random_micro_scene(rng, n, facing);
        const double span = facing ? 10.0 : 30.0;
        const Vec3 tx = random_in(rng, -span, span);
        const Vec3 rx = random_in(rng, -span, span);
        const auto got = trace_paths(m.scene, tx, rx, kF, reflections_only(3));
        auto want = oracle::enumerate_images(m.polys, tx, rx, 3, kF);
        std::sort(want.begin(), want.end(), [](const auto &a, const auto &b) { return a.length < b.length; });
        const auto have = length_amp(got, m.scene, kF);
        ASSERT_EQ(have.size(), want.size()) << "trial " << trial;
        for (std::size_t i = 0; i < want.size(); ++i)
        {
            EXPECT_NEAR(have[i].first, want[i].length, 1e-9) << "trial " << trial;
            EXPECT_NEAR(have[i].second / want[i].amp, 1.0, 1e-9) << "trial " << trial;
        }
        total += static_cast<int>(want.size());
        for (const auto &w : want)
            deep += w.faces.size() >= 2 ? 1 : 0;
    }
    EXPECT_GT(total, 100);
    EXPECT_GT(deep, 20); // second- and third-order chains are exercised
}

TEST(RayEngine, LaunchModeFindsTwoFacadeCanyon)
{
    const Material mat = concrete();
    std::vector<Face> faces;
    std::vector<oracle::Poly> polys;
    for (double y : {-10.0, 10.0})
    {
        const std::array<Vec3, 4> q{Vec3{-200, y, 0}, {200, y, 0}, {200, y, 40}, {-200, y, 40}};
        faces.push_back(make_face(q, 0, true));
        oracle::Poly p = oracle::make_poly({q.begin(), q.end()});
        p.epsr = mat.epsr;
        p.sigma = mat.sigma_s_per_m[1];
        polys.push_back(p);
    }
    const Scene s = make_scene(std::move(faces), {mat});
    const Vec3 tx{-50, 2, 15};
    const Vec3 rx{60, -3, 1.5};
    const auto got = trace_paths(s, tx, rx, kF, reflections_only(3, SearchMode::launch));
    const auto want = oracle::enumerate_images(polys, tx, rx, 3, kF);
    ASSERT_EQ(got.size(), want.size());
}

TEST(RayEngine, LaunchModeReturnsSubsetOfExactPaths)
{
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial)
    {
        const MicroScene m = random_micro_scene(rng, 3);
        const Vec3 tx = random_in(rng, -30.0, 30.0);
        const Vec3 rx = random_in(rng, -30.0, 30.0);
        const auto exact = length_amp(trace_paths(m.scene, tx, rx, kF, reflections_only(3)), m.scene, kF);
        const auto launched =
            length_amp(trace_paths(m.scene, tx, rx, kF, reflections_only(3, SearchMode::launch)), m.scene, kF);
        EXPECT_LE(launched.size(), exact.size());
        for (const auto &[len, amp] : launched)
        {
            const bool found = std::any_of(exact.begin(), exact.end(),
                                           [&](const auto &e) { return std::abs(e.first - len) < 1e-9; });
            EXPECT_TRUE(found) << "trial " << trial << " length " << len;
        }
    }
}

TEST(RayEngine, TwoRayParityAllBands)
{
    const MaterialLibrary lib;
    const Scene s = build_scene(CityLayout{}, lib);
    const Material &earth = lib.get("dry_earth");
    const double ht = 25.0;
    const double hr = 1.5;
    for (std::size_t b = 0; b < kMaterialTableGhz.size(); ++b)
    {
        const double f = kMaterialTableGhz[b] * 1e9;
        for (double d = 50.0; d <= 500.0; d += 10.0)
        {
            const auto paths = trace_paths(s, {0, 0, ht}, {d, 0, hr}, f, reflections_only(1));
            ASSERT_EQ(paths.size(), 2u);
            std::complex<double> e = 0.0;
            for (const Path &p : paths)
                e += std::polar(p.amp, p.phase_rad);
            const double want = oracle::two_ray_gain(d, ht, hr, f, earth.epsr, earth.sigma_s_per_m[b]);
            EXPECT_NEAR(10.0 * std::log10(std::norm(e) / want), 0.0, 0.5) << f << " Hz, " << d << " m";
        }
    }
}

TEST(RayEngine, WallTransmissionAttenuates)
{
    const Material mat = concrete();
    const std::array<Vec3, 4> q{Vec3{50, -100, 0}, {50, 100, 0}, {50, 100, 50}, {50, -100, 50}};
    const Scene s = make_scene({make_face(q, 0, true)}, {mat});
    TraceLimits l = reflections_only(0);
    l.max_transmissions = 1;
    const auto paths = trace_paths(s, {0, 0, 10}, {100, 0, 10}, kF, l);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].signature(), "T");
    const auto eps = oracle::permittivity(mat.epsr, mat.sigma_s_per_m[1], kF);
    const double g = std::abs(oracle::fresnel(eps, 0.0, false));
    const double k0 = 2.0 * oracle::kPi * kF / oracle::kC;
    const double t = (1.0 - g * g) * std::exp(-k0 * std::abs(std::imag(std::sqrt(eps))) * mat.thickness_m);
    const double lambda = oracle::kC / kF;
    EXPECT_NEAR(paths[0].amp / (lambda / (4.0 * oracle::kPi * 100.0) * t), 1.0, 1e-9);

    // without transmissions the wall blocks the link entirely
    EXPECT_TRUE(trace_paths(s, {0, 0, 10}, {100, 0, 10}, kF, reflections_only(0)).empty());
}

TEST(RayEngine, KnifeEdgeOverRoof)
{
    const Scene s = make_scene(box({-10, -100, 0}, {10, 100, 30}, 0), {concrete()});
    TraceLimits l = reflections_only(0);
    l.max_diffractions = 1;
    // tx sees the roof, so only the far roof edge diffracts into the shadow behind it
    const Vec3 tx{-80, 0, 40};
    const Vec3 rx{90, 0, 2};
    const auto paths = trace_paths(s, tx, rx, kF, l);
    ASSERT_EQ(paths.size(), 1u);
    const double lambda = oracle::kC / kF;
    int roof = 0;
    for (const Path &p : paths)
    {
        ASSERT_EQ(p.signature(), "D");
        const Vec3 d = p.interactions[0].point;
        const double d1 = (d - tx).norm();
        const double d2 = (rx - d).norm();
        EXPECT_NEAR(p.length_m, d1 + d2, 1e-9);
        // clearance of the edge above the tx-rx line
        const Vec3 line = rx - tx;
        const double s_par = dot(d - tx, line) / line.norm2();
        const double h = (d - (tx + line * s_par)).norm();
        const double v = h * std::sqrt(2.0 * (d1 + d2) / (lambda * d1 * d2));
        const double want = lambda / (4.0 * oracle::kPi * (d1 + d2)) * std::pow(10.0, -knife_edge_db(v) / 20.0);
        EXPECT_NEAR(p.amp / want, 1.0, 1e-9);
        EXPECT_NEAR(p.interactions[0].clearance_m, h, 1e-9);
        EXPECT_NEAR(p.interactions[0].d1_m, d1, 1e-9);
        EXPECT_NEAR(p.interactions[0].d2_m, d2, 1e-9);
        if (std::abs(d.z - 30.0) < 1e-9 && std::abs(d.x - 10.0) < 1e-9)
            ++roof;
    }
    EXPECT_EQ(roof, 1);
}

TEST(RayEngine, NoDiffractionInTheLitRegion)
{
    const Scene s = make_scene(box({-10, -10, 0}, {10, 10, 30}, 0), {concrete()});
    TraceLimits l = reflections_only(0);
    l.max_diffractions = 1;
    const auto paths = trace_paths(s, {-80, 0, 60}, {90, 0, 60}, kF, l);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].signature(), "direct");
}

TEST(RayEngine, ReciprocityOnSmallCity)
{
    ItuParams p = ItuParams::highrise();
    p.n_buildings = 20;
    const CityLayout city = generate_city(p, 3);
    const Scene s = build_scene(city, MaterialLibrary());
    TraceLimits l;
    l.max_reflections = 2;
    l.max_paths = 1000;
    l.power_floor_dbm = -1000.0;
    Rng rng(5);
    int checked = 0;
    while (checked < 10)
    {
        const Vec3 a{rng.uniform(0, city.extent_x_m()), rng.uniform(0, city.extent_y_m()), rng.uniform(1.5, 30)};
        const Vec3 b{rng.uniform(0, city.extent_x_m()), rng.uniform(0, city.extent_y_m()), 1.5};
        if (s.inside_solid(a) || s.inside_solid(b))
            continue;
        const auto ab = length_amp(trace_paths(s, a, b, kF, l), s, kF);
        const auto ba = length_amp(trace_paths(s, b, a, kF, l), s, kF);
        ASSERT_EQ(ab.size(), ba.size());
        for (std::size_t i = 0; i < ab.size(); ++i)
        {
            EXPECT_NEAR(ab[i].first, ba[i].first, 1e-9);
            EXPECT_NEAR(ab[i].second / ba[i].second, 1.0, 1e-9);
        }
        ++checked;
    }
}

TEST(RayEngine, ResultsSortedCappedAndUnobstructed)
{
    const CityLayout city = generate_city(ItuParams::urban(), 4);
    const Scene s = build_scene(city, MaterialLibrary());
    TraceLimits l;
    l.max_reflections = 2;
    l.max_paths = 15;
    const Vec3 tx{0.5 * city.extent_x_m(), 0.5 * city.extent_y_m(), 120};
    const Vec3 rx{city.dims.street_width_m * 0.5, city.dims.street_width_m * 0.5, 1.5};
    const auto paths = trace_paths(s, tx, rx, kF, l);
    ASSERT_FALSE(paths.empty());
    EXPECT_LE(paths.size(), 15u);
    for (std::size_t i = 1; i < paths.size(); ++i)
        EXPECT_GE(paths[i - 1].amp, paths[i].amp);
    for (const Path &p : paths)
    {
        Vec3 prev = tx;
        for (const Interaction &i : p.interactions)
        {
            if (i.kind != InteractionKind::transmit)
                EXPECT_TRUE(s.is_los(prev, i.point) || p.count(InteractionKind::transmit) > 0);
            prev = i.point;
        }
        if (p.count(InteractionKind::transmit) == 0)
            EXPECT_TRUE(s.is_los(prev, rx));
        EXPECT_NEAR(p.departure.norm(), 1.0, 1e-12);
        EXPECT_NEAR(p.arrival.norm(), 1.0, 1e-12);
    }
}

TEST(RayEngine, ManyReceiversMatchSingleCalls)
{
    const CityLayout city = generate_city(ItuParams::suburban(), 8);
    const Scene s = build_scene(city, MaterialLibrary());
    TraceLimits l;
    l.max_reflections = 2;
    l.max_paths = 1000;
    l.power_floor_dbm = -1000.0;
    const Vec3 tx{0.5 * city.extent_x_m(), 0.5 * city.extent_y_m(), 30};
    const double m = 0.5 * city.dims.street_width_m;
    const std::vector<Vec3> rxs{{m, m, 1.5}, {city.extent_x_m() - m, m, 1.5}, {m, 300, 1.5}};
    const auto batch = find_paths(s, tx, rxs, l);
    ASSERT_EQ(batch.size(), rxs.size());
    for (std::size_t i = 0; i < rxs.size(); ++i)
        EXPECT_EQ(length_amp(evaluate_paths(batch[i], s, kF, l), s, kF),
                  length_amp(trace_paths(s, tx, rxs[i], kF, l), s, kF));
}

TEST(FibonacciSphere, UnitAndBalanced)
{
    const auto dirs = fibonacci_sphere(5000);
    ASSERT_EQ(dirs.size(), 5000u);
    Vec3 sum{};
    int upper = 0;
    for (const Vec3 &d : dirs)
    {
        EXPECT_NEAR(d.norm(), 1.0, 1e-12);
        sum = sum + d;
        upper += d.z > 0 ? 1 : 0;
    }
    EXPECT_LT(sum.norm() / 5000.0, 1e-3);
    EXPECT_NEAR(upper, 2500, 5);
}

TEST(TraceLimits, Validation)
{
    TraceLimits l;
    EXPECT_NO_THROW(l.validate());
    l.max_reflections = -1;
    EXPECT_THROW(l.validate(), std::invalid_argument);
    l = TraceLimits{};
    l.max_paths = 0;
    EXPECT_THROW(l.validate(), std::invalid_argument);
}
