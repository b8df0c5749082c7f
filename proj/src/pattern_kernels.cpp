// SPDX-License-Identifier: Apache-2.0
//
// leris-sim: light-emitting RIS localization and mmWave link simulator
// Copyright (C) 2026 The leris-sim authors
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

#include "leris/pattern_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

namespace leris
{
namespace
{

using cplx = std::complex<double>;

void check_shape(const LerisPanel &panel, const PhaseProfile &profile)
{
    if (profile.m_rows != panel.m_rows || profile.n_cols != panel.n_cols ||
        profile.phase.size() != static_cast<std::size_t>(panel.elements()))
        throw ArgumentError("phase profile shape does not match the panel");
}

// Literal delay term for row m at transverse direction cosines (u, v).
inline double omega_row(double d_m, const PatternContext &ctx, double u, double v)
{
    const double dx = ctx.tx.x - d_m * u - ctx.rx.x;
    const double dy = ctx.tx.y - ctx.rx.y;
    const double dz = ctx.tx.z - d_m * v - ctx.rx.z;
    return ctx.wavenumber * std::sqrt(dx * dx + dy * dy + dz * dz);
}

// |sum_{n=1..N} exp(j n psi)|^2
inline double dirichlet_sq(int n, double psi)
{
    const double s = std::sin(0.5 * psi);
    if (std::abs(s) < 1e-12)
        return static_cast<double>(n) * n;
    const double r = std::sin(0.5 * n * psi) / s;
    return r * r;
}

// Per-point evaluator shared by the parallel kernel and pattern_power. Holds
// precomputed element phasors so the inner loops avoid exponentials.
class FactoredPattern
{
public:
    FactoredPattern(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx)
        : panel_(panel), profile_(profile), ctx_(ctx), kd_(ctx.wavenumber * panel.element_side_m)
    {
        steered_ = profile.steering.has_value() && ctx.variant == PathDelayVariant::literal;
        if (steered_)
        {
            const double st = std::sin(profile.steering->theta);
            uh_ = st * std::cos(profile.steering->phi);
            vh_ = st * std::sin(profile.steering->phi);
            // row phase left after removing the affine column term
            row_offset_.resize(static_cast<std::size_t>(panel.m_rows));
            for (int m = 1; m <= panel.m_rows; ++m)
                row_offset_[m - 1] = profile.at(m, 1) + kd_ * vh_;
        }
        else if (ctx.variant == PathDelayVariant::literal)
        {
            element_.resize(profile.phase.size());
            for (std::size_t i = 0; i < profile.phase.size(); ++i)
                element_[i] = std::polar(1.0, profile.phase[i]);
        }
    }

    double power(double u, double v) const
    {
        const int mm = panel_.m_rows, nn = panel_.n_cols;
        const double d = panel_.element_side_m;
        if (steered_)
        {
            cplx acc{0.0, 0.0};
            for (int m = 1; m <= mm; ++m)
            {
                const double dm = d * (m - 0.5);
                const double arg = kd_ * (m - 0.5) * u + omega_row(dm, ctx_, u, v) + row_offset_[m - 1];
                acc += std::polar(1.0, arg);
            }
            return std::norm(acc) * dirichlet_sq(nn, kd_ * (v - vh_));
        }
        if (ctx_.variant == PathDelayVariant::literal)
        {
            const cplx step = std::polar(1.0, kd_ * v);
            cplx acc{0.0, 0.0};
            for (int m = 1; m <= mm; ++m)
            {
                const double dm = d * (m - 0.5);
                const cplx row = std::polar(1.0, kd_ * (m - 0.5) * u + omega_row(dm, ctx_, u, v));
                const cplx *e = &element_[static_cast<std::size_t>((m - 1) * nn)];
                cplx col = std::polar(1.0, 0.5 * kd_ * v);
                cplx inner{0.0, 0.0};
                for (int n = 0; n < nn; ++n)
                {
                    inner += col * e[n];
                    col *= step;
                }
                acc += row * inner;
            }
            return std::norm(acc);
        }
        return direct(u, v);
    }

    // Direct sum; the global geometric phase is dropped since |F| ignores it.
    double direct(double u, double v) const
    {
        const double d = panel_.element_side_m;
        cplx acc{0.0, 0.0};
        for (int m = 1; m <= panel_.m_rows; ++m)
            for (int n = 1; n <= panel_.n_cols; ++n)
            {
                const int second = ctx_.variant == PathDelayVariant::literal ? m : n;
                const double dx = ctx_.tx.x - d * (m - 0.5) * u - ctx_.rx.x;
                const double dy = ctx_.tx.y - ctx_.rx.y;
                const double dz = ctx_.tx.z - d * (second - 0.5) * v - ctx_.rx.z;
                const double arg = kd_ * ((m - 0.5) * u + (n - 0.5) * v) +
                                   ctx_.wavenumber * std::sqrt(dx * dx + dy * dy + dz * dz) + profile_.at(m, n);
                acc += std::polar(1.0, arg);
            }
        return std::norm(acc);
    }

private:
    const LerisPanel &panel_;
    const PhaseProfile &profile_;
    const PatternContext &ctx_;
    double kd_;
    bool steered_ = false;
    double uh_ = 0.0, vh_ = 0.0;
    std::vector<double> row_offset_;
    std::vector<cplx> element_;
};

struct Grid
{
    int rows = 0; // polar nodes are 0..rows
    int cols = 0; // azimuth nodes are 0..cols-1
    double h = 0.0;
};

Grid make_grid(double step_rad, IntegrationDomain domain)
{
    if (!(step_rad > 0.0))
        throw ArgumentError("quadrature step must be positive");
    const double span = domain == IntegrationDomain::hemisphere ? pi / 2.0 : pi;
    Grid g;
    g.rows = static_cast<int>(std::lround(span / step_rad));
    g.cols = static_cast<int>(std::lround(2.0 * pi / step_rad));
    if (g.rows < 1 || std::abs(g.rows * step_rad - span) > 1e-9 * span)
        throw ArgumentError("quadrature step must divide the polar span");
    g.h = span / g.rows;
    return g;
}

// Trapezoid weight of polar node i on a grid with `rows` cells of size h.
double polar_weight(int i, int rows, double h)
{
    const double w = h * std::sin(i * h);
    return (i == 0 || i == rows) ? 0.5 * w : w;
}

GridSums combine_rows(const Grid &g, const std::vector<double> &fine_rows, const std::vector<double> &coarse_rows)
{
    GridSums out;
    for (int i = 0; i <= g.rows; ++i)
        out.fine += polar_weight(i, g.rows, g.h) * fine_rows[static_cast<std::size_t>(i)];
    if (g.rows % 2 == 0 && g.cols % 2 == 0)
    {
        for (int i = 0; i <= g.rows; i += 2)
            out.coarse += polar_weight(i / 2, g.rows / 2, 2.0 * g.h) * coarse_rows[static_cast<std::size_t>(i)];
    }
    else
        out.coarse = std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace

double pattern_power_reference(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx,
                               double theta, double phi)
{
    return std::norm(array_factor(panel, profile, theta, phi, ctx));
}

double pattern_power(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx, double theta,
                     double phi)
{
    check_shape(panel, profile);
    const FactoredPattern f(panel, profile, ctx);
    const double st = std::sin(theta);
    return f.power(st * std::cos(phi), st * std::sin(phi));
}

GridSums integrate_pattern_reference(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx,
                                     double step_rad, IntegrationDomain domain)
{
    check_shape(panel, profile);
    const Grid g = make_grid(step_rad, domain);
    std::vector<double> fine(static_cast<std::size_t>(g.rows + 1)), coarse(fine.size());
    for (int i = 0; i <= g.rows; ++i)
    {
        const double theta = i * g.h;
        double sf = 0.0, sc = 0.0;
        for (int j = 0; j < g.cols; ++j)
        {
            const double p = pattern_power_reference(panel, profile, ctx, theta, j * g.h);
            sf += p;
            if (j % 2 == 0)
                sc += p;
        }
        fine[static_cast<std::size_t>(i)] = sf * g.h;
        coarse[static_cast<std::size_t>(i)] = sc * 2.0 * g.h;
    }
    return combine_rows(g, fine, coarse);
}

GridSums integrate_pattern_parallel(const LerisPanel &panel, const PhaseProfile &profile, const PatternContext &ctx,
                                    double step_rad, IntegrationDomain domain)
{
    check_shape(panel, profile);
    const Grid g = make_grid(step_rad, domain);
    const FactoredPattern f(panel, profile, ctx);
    std::vector<double> cphi(static_cast<std::size_t>(g.cols)), sphi(cphi.size());
    for (int j = 0; j < g.cols; ++j)
    {
        cphi[static_cast<std::size_t>(j)] = std::cos(j * g.h);
        sphi[static_cast<std::size_t>(j)] = std::sin(j * g.h);
    }
    std::vector<double> fine(static_cast<std::size_t>(g.rows + 1)), coarse(fine.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i <= g.rows; ++i)
    {
        const double st = std::sin(i * g.h);
        double sf = 0.0, sc = 0.0;
        if (st == 0.0)
        {
            // every azimuth maps to the same direction at the pole
            const double p = f.power(0.0, 0.0);
            sf = p * g.cols;
            sc = p * ((g.cols + 1) / 2);
        }
        else
        {
            for (int j = 0; j < g.cols; ++j)
            {
                const double p = f.power(st * cphi[static_cast<std::size_t>(j)], st * sphi[static_cast<std::size_t>(j)]);
                sf += p;
                if (j % 2 == 0)
                    sc += p;
            }
        }
        fine[static_cast<std::size_t>(i)] = sf * g.h;
        coarse[static_cast<std::size_t>(i)] = sc * 2.0 * g.h;
    }
    return combine_rows(g, fine, coarse);
}

// ---- GainNormalizer ---------------------------------------------------------

int GainNormalizer::default_resolution(const LerisPanel &panel)
{
    return std::max(64, 4 * std::max(panel.m_rows, panel.n_cols));
}

GainNormalizer::GainNormalizer(const LerisPanel &panel, const PatternContext &ctx, int resolution,
                               IntegrationDomain domain)
    : m_(panel.m_rows), n_(panel.n_cols), resolution_(resolution > 0 ? resolution : default_resolution(panel)),
      kd_(ctx.wavenumber * panel.element_side_m), efficiency_(panel.efficiency),
      domain_factor_(domain == IntegrationDomain::hemisphere ? 1.0 : 2.0), ctx_(ctx),
      element_side_(panel.element_side_m)
{
    panel.validate();
    if (ctx.variant != PathDelayVariant::literal)
        throw ArgumentError("the precomputed normalizer supports the literal delay term only");

    const int k = resolution_;
    const std::size_t mm = static_cast<std::size_t>(m_);
    const double wv = 2.0 / k, wt = pi / k;

    // B_a(m, m') = sum_t wt A_m conj(A_m') for each v node a
    std::vector<cplx> blocks(static_cast<std::size_t>(k) * mm * mm);
    std::vector<double> vnodes(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a)
        vnodes[static_cast<std::size_t>(a)] = -1.0 + (a + 0.5) * wv;

#pragma omp parallel
    {
        std::vector<cplx> amp(mm);
#pragma omp for schedule(static)
        for (int a = 0; a < k; ++a)
        {
            const double v = vnodes[static_cast<std::size_t>(a)];
            const double rho = std::sqrt(std::max(0.0, 1.0 - v * v));
            cplx *blk = &blocks[static_cast<std::size_t>(a) * mm * mm];
            for (int b = 0; b < k; ++b)
            {
                const double u = rho * std::sin(-0.5 * pi + (b + 0.5) * wt);
                for (int m = 1; m <= m_; ++m)
                {
                    const double dm = element_side_ * (m - 0.5);
                    amp[m - 1] = std::polar(1.0, kd_ * (m - 0.5) * u + omega_row(dm, ctx_, u, v));
                }
                for (std::size_t p = 0; p < mm; ++p)
                {
                    const cplx ap = amp[p] * wt;
                    for (std::size_t q = 0; q < mm; ++q)
                        blk[p * mm + q] += ap * std::conj(amp[q]);
                }
            }
        }
    }

    // Q[dn] = sum_a wv exp(j kd dn v_a) B_a, accumulated in a fixed order
    const int ndn = 2 * n_ - 1;
    q_.assign(static_cast<std::size_t>(ndn) * mm * mm, cplx{0.0, 0.0});
#pragma omp parallel for schedule(dynamic, 1)
    for (int idx = 0; idx < ndn; ++idx)
    {
        const int dn = idx - (n_ - 1);
        cplx *q = &q_[static_cast<std::size_t>(idx) * mm * mm];
        for (int a = 0; a < k; ++a)
        {
            const cplx w = std::polar(wv, kd_ * dn * vnodes[static_cast<std::size_t>(a)]);
            const cplx *blk = &blocks[static_cast<std::size_t>(a) * mm * mm];
            for (std::size_t e = 0; e < mm * mm; ++e)
                q[e] += w * blk[e];
        }
    }
}

std::vector<std::complex<double>> GainNormalizer::steering_weights(double theta_hat, double phi_hat) const
{
    const double st = std::sin(theta_hat);
    const double uh = st * std::cos(phi_hat), vh = st * std::sin(phi_hat);
    std::vector<cplx> c(static_cast<std::size_t>(m_));
    for (int m = 1; m <= m_; ++m)
    {
        const double dm = element_side_ * (m - 0.5);
        c[m - 1] = std::polar(1.0, -(kd_ * m * uh + omega_row(dm, ctx_, uh, vh)));
    }
    return c;
}

double GainNormalizer::denominator(double theta_hat, double phi_hat) const
{
    const auto c = steering_weights(theta_hat, phi_hat);
    const double vh = std::sin(theta_hat) * std::sin(phi_hat);
    const std::size_t mm = static_cast<std::size_t>(m_);
    double total = 0.0;
    for (int idx = 0; idx < 2 * n_ - 1; ++idx)
    {
        const int dn = idx - (n_ - 1);
        const cplx *q = &q_[static_cast<std::size_t>(idx) * mm * mm];
        cplx form{0.0, 0.0};
        for (std::size_t p = 0; p < mm; ++p)
        {
            cplx row{0.0, 0.0};
            for (std::size_t s = 0; s < mm; ++s)
                row += q[p * mm + s] * std::conj(c[s]);
            form += c[p] * row;
        }
        total += (n_ - std::abs(dn)) * (std::polar(1.0, -kd_ * dn * vh) * form).real();
    }
    return domain_factor_ * total;
}

double GainNormalizer::gain(double theta_hat, double phi_hat, double theta, double phi) const
{
    const double st = std::sin(theta);
    const double u = st * std::cos(phi), v = st * std::sin(phi);
    const auto c = steering_weights(theta_hat, phi_hat);
    cplx acc{0.0, 0.0};
    for (int m = 1; m <= m_; ++m)
    {
        const double dm = element_side_ * (m - 0.5);
        acc += c[m - 1] * std::polar(1.0, kd_ * (m - 0.5) * u + omega_row(dm, ctx_, u, v));
    }
    const double vh = std::sin(theta_hat) * std::sin(phi_hat);
    const double power = std::norm(acc) * dirichlet_sq(n_, kd_ * (v - vh));
    return efficiency_ * 4.0 * pi * power / denominator(theta_hat, phi_hat);
}

} // namespace leris
