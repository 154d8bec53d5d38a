"""Pulsed drives: exponential and Gaussian wave packets.

Each pulse envelope is normalized so that alpha_sq is the mean photon number
of the wave packet. For the exponentially damped pulse a Laplace-domain
series predicts the final measurement probability; the prediction is good
for fast pulses (large kappa) and degrades as the pulse slows down.
"""

import numpy as np

from jpmsim import DetectorParams, DriveSpec, integrate
from jpmsim.analytic import exp_pulse_steady_state, exp_pulse_fifth_order
from jpmsim.core import omega_from_ghz
from jpmsim.pulses import envelope_for, squared_norm

params = DetectorParams(
    gamma_tl=1.0, gamma_0=0.0, gamma_1=1.0, gamma_rel=0.0, gamma_res=0.0,
    omega_0=omega_from_ghz(5.0),
)
alpha_sq = 0.15

print("Envelope normalization (integral of |f|^2 should be 1):")
for label, drive in [
    ("exponential, kappa=2/ns", DriveSpec.exponential(alpha_sq, params.omega_0, 2.0)),
    ("gaussian,    sigma=1/ns", DriveSpec.gaussian(alpha_sq, params.omega_0, 1.0)),
]:
    print(f"  {label}: {squared_norm(envelope_for(drive)):.8f}")

print("\nExponential pulse: final pm vs the series prediction")
print("  kappa   pm (ODE)   series(5)  fifth-order  |gap|")
for kappa in (5.0, 2.0, 1.0, 0.5):
    drive = DriveSpec.exponential(alpha_sq, params.omega_0, kappa)
    pm_ode = integrate(params, drive).pm[-1]
    series = exp_pulse_steady_state(params, alpha_sq, kappa, order=5)
    fifth = exp_pulse_fifth_order(params, alpha_sq, kappa)
    print(f"  {kappa:5.2f}  {pm_ode:9.5f}  {series:9.5f}  {fifth:11.5f}  {abs(pm_ode - series):.4f}")
print("The series is derived for fast pulses; the gap grows as kappa drops.")

print("\nGaussian pulse: absorbed fraction vs pulse bandwidth")
print("  sigma    pm(final)")
for sigma in (0.2, 0.5, 1.0, 2.0):
    drive = DriveSpec.gaussian(alpha_sq, params.omega_0, sigma)
    pm = integrate(params, drive).pm[-1]
    print(f"  {sigma:5.2f}  {pm:9.5f}")
print("Slow (narrowband) pulses are absorbed more completely than fast ones.")
