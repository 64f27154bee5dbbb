// SPDX-License-Identifier: Apache-2.0
//
// nfma: near-field movable-antenna multiuser downlink simulator
// Copyright (C) 2026 The nfma authors
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

#include "nfma/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nfma
{

CarrierConfig CarrierConfig::from_frequency(double frequency_hz)
{
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw std::invalid_argument("CarrierConfig: frequency must be positive");
    return CarrierConfig{frequency_hz, kSpeedOfLight / frequency_hz};
}

void ChannelDrop::validate() const
{
    if (!(rician_factor > 0.0) || !std::isfinite(rician_factor))
        throw std::invalid_argument("ChannelDrop: Rician factor must be positive");
    for (std::size_t k = 0; k < users.size(); ++k)
    {
        const auto &u = users[k];
        if (!(u.los_gain >= 0.0) || !std::isfinite(u.los_gain))
            throw std::invalid_argument("ChannelDrop: bad LoS gain for user " + std::to_string(k));
        for (const auto &s : u.scatterers)
            if (!(s.gain_bs >= 0.0) || !(s.gain_user >= 0.0) || !std::isfinite(s.gain_bs) ||
                !std::isfinite(s.gain_user) || !std::isfinite(s.reflection.real()) ||
                !std::isfinite(s.reflection.imag()))
                throw std::invalid_argument("ChannelDrop: bad scatterer data for user " + std::to_string(k));
    }
}

namespace
{
inline cdouble phase_term(double distance, double wavenumber)
{
    return std::polar(1.0, -wavenumber * distance);
}
} // namespace

CVec steering_vector(std::span<const Vec3> tx, const Vec3 &x, double wavelength)
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("steering_vector: wavelength must be positive");
    const double wavenumber = 2.0 * std::numbers::pi / wavelength;
    CVec a(static_cast<Eigen::Index>(tx.size()));
    for (std::size_t n = 0; n < tx.size(); ++n)
        a[static_cast<Eigen::Index>(n)] = phase_term((tx[n] - x).norm(), wavenumber);
    return a;
}

CVec los_component(std::span<const Vec3> tx, const Vec3 &rx, double los_gain, double wavelength)
{
    return los_gain * steering_vector(tx, rx, wavelength);
}

CVec nlos_component(std::span<const Vec3> tx, const UserDrop &user, const Vec3 &rx, double wavelength)
{
    CVec h = CVec::Zero(static_cast<Eigen::Index>(tx.size()));
    if (user.scatterers.empty())
        return h;

    const double wavenumber = 2.0 * std::numbers::pi / wavelength;
    for (const auto &s : user.scatterers)
    {
        const cdouble second_hop = s.gain_user * phase_term((s.position - rx).norm(), wavenumber);
        h += (s.reflection * s.gain_bs * second_hop) * steering_vector(tx, s.position, wavelength);
    }
    return h / std::sqrt(static_cast<double>(user.scatterers.size()));
}

CVec assemble_channel(const CVec &los, const CVec &nlos, double rician_factor)
{
    if (los.size() != nlos.size())
        throw std::invalid_argument("assemble_channel: LoS/NLoS length mismatch");
    if (!(rician_factor > 0.0))
        throw std::invalid_argument("assemble_channel: Rician factor must be positive");
    const double w_los = std::sqrt(rician_factor / (rician_factor + 1.0));
    const double w_nlos = std::sqrt(1.0 / (rician_factor + 1.0));
    return w_los * los + w_nlos * nlos;
}

double free_space_amplitude(double distance, double wavelength)
{
    if (!(distance > 0.0))
        throw std::invalid_argument("free_space_amplitude: distance must be positive");
    return wavelength / (4.0 * std::numbers::pi * distance);
}

CVec user_channel(std::span<const Vec3> tx, const UserDrop &user, const Vec3 &rx, double rician_factor,
                  double wavelength)
{
    return assemble_channel(los_component(tx, rx, user.los_gain, wavelength),
                            nlos_component(tx, user, rx, wavelength), rician_factor);
}

std::vector<CVec> build_channels(const ChannelDrop &drop, std::span<const Vec3> tx, std::span<const Vec3> rx_global,
                                 double wavelength)
{
    if (rx_global.size() != drop.users.size())
        throw std::invalid_argument("build_channels: receiver count does not match drop");
    std::vector<CVec> h;
    h.reserve(drop.users.size());
    for (std::size_t k = 0; k < drop.users.size(); ++k)
        h.push_back(user_channel(tx, drop.users[k], rx_global[k], drop.rician_factor, wavelength));
    return h;
}

} // namespace nfma
