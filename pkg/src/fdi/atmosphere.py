"""ISA standard atmosphere (troposphere + lower stratosphere) and airspeed conversion."""
import numpy as np

FT = 0.3048
KT = 1852.0 / 3600.0

T0 = 288.15  # K
P0 = 101325.0  # Pa
RHO0 = 1.225  # kg/m^3
LAPSE = 0.0065  # K/m
R_AIR = 287.05287
G0 = 9.80665
GAMMA = 1.4
H_TROPOPAUSE = 11000.0  # m
T_TROPOPAUSE = T0 - LAPSE * H_TROPOPAUSE
P_TROPOPAUSE = P0 * (T_TROPOPAUSE / T0) ** (G0 / (LAPSE * R_AIR))
A0 = np.sqrt(GAMMA * R_AIR * T0)


def temperature(h_m):
    h = np.asarray(h_m, dtype=float)
    return np.where(h < H_TROPOPAUSE, T0 - LAPSE * h, T_TROPOPAUSE)


def pressure(h_m):
    """Static pressure [Pa] at geopotential altitude ``h_m`` (valid to 20 km)."""
    h = np.asarray(h_m, dtype=float)
    tropo = P0 * (1.0 - LAPSE * np.minimum(h, H_TROPOPAUSE) / T0) ** (G0 / (LAPSE * R_AIR))
    strato = P_TROPOPAUSE * np.exp(-G0 * (h - H_TROPOPAUSE) / (R_AIR * T_TROPOPAUSE))
    return np.where(h < H_TROPOPAUSE, tropo, strato)


def speed_of_sound(h_m):
    return np.sqrt(GAMMA * R_AIR * temperature(h_m))


def cas_to_tas(cas, h_m):
    """Calibrated to true airspeed, compressible flow (both in m/s)."""
    cas = np.asarray(cas, dtype=float)
    qc = P0 * ((1.0 + 0.2 * (cas / A0) ** 2) ** 3.5 - 1.0)
    mach = np.sqrt(5.0 * ((qc / pressure(h_m) + 1.0) ** (2.0 / 7.0) - 1.0))
    return mach * speed_of_sound(h_m)


def mach_to_tas(mach, h_m):
    return np.asarray(mach, dtype=float) * speed_of_sound(h_m)
