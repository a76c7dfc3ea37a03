#!/usr/bin/env python3
"""A single spin in a transverse field, thermalizing in blackbody radiation.

The spin Hamiltonian is H = -Gamma sigma^x with levels -Gamma and +Gamma.
Coupling it as a dipole to radiation at inverse temperature beta gives a
two-level rate equation for the populations and an independent exponential
decay for the single coherence. This script walks through the whole chain:

  1. the analytic spectrum and squared dipole matrix (off-diagonal 2*gamma),
  2. the detailed-balance transition rates and escape rates,
  3. the rate matrix, its eigenvalues and the three characteristic times,
  4. the closed-form evolution of an initially pure excited state.

For a two-level system the decoherence time is always exactly twice the
dissipation time (the rate-matrix trace equals its only nonzero eigenvalue),
so tau = tau_Q here.

Run: python demos/01_single_spin_relaxation.py
"""

import numpy as np

from thermotimes import (
    decoherence_rates,
    evolve,
    free_spin_system,
    pauli_matrix,
    thermal_rates,
    thermalization_times,
)

Gamma, gamma, beta = 1.0, 1.0, 1.0

spec, dip = free_spin_system(Gamma, gamma)
print("levels:           ", spec.energies)
print("squared dipole D: ", dip.D[0, 1], "(expected 2*gamma)")

rates = thermal_rates(spec, dip, beta)
print("\namplitude C[1,2]: ", rates.C[0, 1])
print("uphill rate:      ", rates.L2[1, 0])
print("downhill rate:    ", rates.L2[0, 1])
print("escape rates B:   ", rates.B)

pm = pauli_matrix(rates, spec)
times = thermalization_times(pm, rates)
print("\nrate matrix A:\n", pm.A)
print("eigenvalues:      ", pm.eigenvalues)
print("stationary state: ", pm.stationary)
print(f"\ntau_P (dissipation)  = {times.tau_P:.5f}   [tanh(1)/16 = {np.tanh(1)/16:.5f}]")
print(f"tau_Q (decoherence)  = {times.tau_Q:.5f}   [= 2 tau_P for any 2-level system]")
print(f"tau   (thermalization) = {times.tau:.5f}")

# start in the excited eigenstate with a little coherence mixed in
rho0 = np.array([[0.1, 0.2], [0.2, 0.9]], dtype=complex)
mu = decoherence_rates(rates, eff_energies=spec.energies)
print("\n   t        p_excited     |coherence|   distance to Gibbs")
for t in [0.0, 0.02, 0.05, 0.1, 0.2, 0.5]:
    rho_t = evolve(pm, mu, rho0, t)
    dist = np.abs(rho_t - np.diag(pm.stationary)).max()
    print(f"  {t:5.2f}    {rho_t[1, 1].real: .6f}    {abs(rho_t[0, 1]): .6f}     {dist:.2e}")
print("\nThe populations settle on the Gibbs weights while the coherence dies")
print("at half the escape-rate sum, exactly as the closed forms say.")
