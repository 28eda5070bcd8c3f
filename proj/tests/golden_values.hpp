#pragma once

// Frozen expected values from the symbolic oracle
// (tests/oracle/gen_golden.py). Do not edit by hand.

#include <array>

namespace golden {

// flat 3-metric in spherical coordinates at r=2, theta=pi/3
inline constexpr double spherical_gamma_r_thth = -2;
inline constexpr double spherical_gamma_r_phph = -1.5;
inline constexpr double spherical_gamma_th_rth = 0.5;
inline constexpr double spherical_gamma_th_phph = -0.4330127018922193;
inline constexpr double spherical_gamma_ph_rph = 0.5;
inline constexpr double spherical_gamma_ph_thph = 0.57735026918962573;

// Schwarzschild M=1: (r, theta, Kretschmann) at 20 sample points
inline constexpr std::array<std::array<double, 3>, 20> schwarzschild_kretschmann = {{
    {3.1, 0.4, 0.054084282721977808},
    {3.5, 0.9, 0.02611156915910887},
    {4.0, 1.2, 0.01171875},
    {4.6, 2.1, 0.0050663390145885487},
    {5.2, 0.6, 0.0024278462230430081},
    {5.9, 1.5, 0.0011379656883559056},
    {6.3, 2.5, 0.00076771131341216853},
    {7.0, 1.0, 0.00040799326811107609},
    {7.7, 0.5, 0.00023030156348614363},
    {8.4, 1.9, 0.00013663611998961691},
    {9.0, 2.7, 9.0320468311628167e-05},
    {3.3, 1.1, 0.037167007740166416},
    {4.2, 0.7, 0.0087447116793354842},
    {5.5, 2.3, 0.0017340639131252045},
    {6.8, 1.4, 0.00048549835321030053},
    {7.2, 2.0, 0.00034454524349833762},
    {8.1, 0.8, 0.00016995389575066318},
    {8.8, 1.7, 0.00010335826355965162},
    {9.5, 2.2, 6.5297958815990737e-05},
    {9.9, 1.3, 5.0983549712162423e-05},
}};

// Kerr M=1, a=0.6: (r, theta, P, Kretschmann) at sample points
inline constexpr std::array<std::array<double, 4>, 5> kerr_pontryagin = {{
    {5.0, 0.78539816339744828, 0.00073111769681344786, 0.0026270601241628103},
    {4.0, 1, 0.0026796363809492834, 0.010164517627485986},
    {6.0, 2, -0.00012638045231802675, 0.00099177785478470276},
    {3.2, 0.69999999999999996, 0.015861527604389185, 0.027609349522248385},
    {7.5, 1.8999999999999999, -2.0795288101696315e-05, 0.00026592223632902604},
}};

// Kerr closed-form components at r=5, theta=pi/4
inline constexpr double kerr_g_tt = -0.60285941223193007;
inline constexpr double kerr_g_tphi = -0.11914217633042097;
inline constexpr double kerr_a_phi = 0.19762845849802371;

}  // namespace golden
