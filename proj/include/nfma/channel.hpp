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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nfma/geometry.hpp"

namespace nfma
{

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct CarrierConfig
{
    double frequency_hz = 28e9;
    double wavelength_m = kSpeedOfLight / 28e9;

    static CarrierConfig from_frequency(double frequency_hz);
};

/// One single-bounce scatterer as seen by one user.
struct ScattererPath
{
    Vec3 position = Vec3::Zero();
    cdouble reflection{1.0, 0.0};
    double gain_bs = 0.0;   // BS -> scatterer amplitude
    double gain_user = 0.0; // scatterer -> user amplitude
};

struct UserDrop
{
    Vec3 origin = Vec3::Zero();
    Rotation rotation;
    double los_gain = 0.0;
    std::vector<ScattererPath> scatterers;
};

/// Frozen large-scale and small-scale randomness of one scenario drop. The
/// reflection coefficients are fixed here, so re-evaluating the channel at new
/// antenna positions only changes the spherical-wave phases.
struct ChannelDrop
{
    double rician_factor = 1.0; // linear
    std::vector<UserDrop> users;

    void validate() const;
};

// exp(-j 2pi/lambda ||t_n - x||) for every transmit antenna.
CVec steering_vector(std::span<const Vec3> tx, const Vec3 &x, double wavelength);

CVec los_component(std::span<const Vec3> tx, const Vec3 &rx, double los_gain, double wavelength);

/// Scattered component, normalised by 1/sqrt(L) so its average power does not
/// grow with the number of scatterers. Zero vector when the user has none.
CVec nlos_component(std::span<const Vec3> tx, const UserDrop &user, const Vec3 &rx, double wavelength);

// sqrt(k/(k+1)) los + sqrt(1/(k+1)) nlos
CVec assemble_channel(const CVec &los, const CVec &nlos, double rician_factor);

// lambda / (4 pi d); throws for d <= 0.
double free_space_amplitude(double distance, double wavelength);

CVec user_channel(std::span<const Vec3> tx, const UserDrop &user, const Vec3 &rx, double rician_factor,
                  double wavelength);

// One channel vector per user for the given transmit and (global) receive positions.
std::vector<CVec> build_channels(const ChannelDrop &drop, std::span<const Vec3> tx, std::span<const Vec3> rx_global,
                                 double wavelength);

} // namespace nfma
