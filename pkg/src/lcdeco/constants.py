"""Physical constants (CODATA-2018 exact values, SI units)."""

import math

# elementary charge [C]
E_CHARGE = 1.602176634e-19

# Planck constant [J s] and reduced Planck constant
H_PLANCK = 6.62607015e-34
HBAR = H_PLANCK / (2.0 * math.pi)

# Boltzmann constant [J/K]
K_B = 1.380649e-23

# superconducting flux quantum h/2e [Wb]
PHI0 = H_PLANCK / (2.0 * E_CHARGE)


def constants_record():
    """Constants as a plain dict, for run manifests."""
    return {
        "e_charge_C": E_CHARGE,
        "h_planck_Js": H_PLANCK,
        "hbar_Js": HBAR,
        "k_boltzmann_JK": K_B,
        "flux_quantum_Wb": PHI0,
    }
