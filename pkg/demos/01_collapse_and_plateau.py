# Collapse, plateau and revival of the qubit inversion.
#
# A Cooper pair box starts excited while the resonator holds a coherent state
# with mean phonon number 25. Without the Kerr term the inversion collapses to
# zero and later revives. With chi0 = 0.2 it settles near one half instead.

import numpy as np

from cpbnr import CoherentSpec, IntegratorConfig, ModulationLaw, SystemParams, coherent_init, propagate
from cpbnr.analysis import window_average

s0 = coherent_init(CoherentSpec(5.0))
print("Fock truncation:", s0.n_max, "levels kept")

law = ModulationLaw.constant()
cfg = IntegratorConfig(t_end=50.0, output_stride=0.05)

# %% Kerr on and off
runs = {chi0: propagate(s0, SystemParams(chi0=chi0), law, cfg) for chi0 in (0.0, 0.2)}

for chi0, rec in runs.items():
    plateau = window_average(rec.times, rec.inversion, 5, 15)
    print(f"chi0={chi0}: mean inversion over [5, 15] = {plateau:+.3f}")

# %% A coarse text rendering of both curves
rows = np.searchsorted(runs[0.0].times, np.arange(0, 50.1, 2.5))
print("\n   t    chi0=0   chi0=0.2")
for k in rows:
    print(f"{runs[0.0].times[k]:5.1f}  {runs[0.0].inversion[k]:+.3f}   {runs[0.2].inversion[k]:+.3f}")

# %% Optional figure
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(7, 3))
    for chi0, rec in runs.items():
        ax.plot(rec.times, rec.inversion, lw=0.6, label=f"chi0 = {chi0}")
    ax.set_xlabel("lambda_0 t")
    ax.set_ylabel("I(t)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("collapse_and_plateau.png", dpi=150)
    print("\nwrote collapse_and_plateau.png")
