# Same decay rate, different channel.
#
# Qubit decay (kappa) and resonator decay (delta) are both set to 0.01. The
# resonator channel damps every Fock level at a rate proportional to n, so with
# about 25 phonons it wipes out the late-time oscillations much faster.

import numpy as np

from cpbnr import CoherentSpec, IntegratorConfig, ModulationLaw, SystemParams, coherent_init, propagate
from cpbnr.analysis import envelope

s0 = coherent_init(CoherentSpec(5.0))
cfg = IntegratorConfig(t_end=50.0, output_stride=0.02)
law = ModulationLaw.constant()

cases = {
    "lossless": SystemParams(chi0=0.2),
    "qubit loss": SystemParams(chi0=0.2, kappa=0.01),
    "resonator loss": SystemParams(chi0=0.2, delta=0.01),
}

for label, params in cases.items():
    rec = propagate(s0, params, law, cfg)
    env = envelope(rec.times, rec.inversion, 30, 50)
    print(f"{label:15s} final norm^2 {rec.norm2[-1]:.4f}   "
          f"peak-to-peak I on [30, 50] {env:.4f}   mean n at t=50 {rec.mean_n[-1]:6.2f}")

# With the inversion parked near 0.5 the qubit is excited about 3/4 of the time,
# so qubit loss leaves roughly exp(-0.75 kappa t). Resonator loss acts on every
# phonon and leaves roughly exp(-delta <n> t).
print("\nexp(-0.0075*50) =", round(np.exp(-0.375), 4), "  exp(-0.01*25*50) =", f"{np.exp(-12.5):.1e}")
