"""
From a heralded biphoton to loaded memories
===========================================

Case 2 (16 ps pump), channel 0.  The partial BSM squares the single-source
purity; the error probability follows from that.  After 25 GHz -> 600 MHz
bandwidth compression the biphoton is loaded into two push-pull memories,
first with ideal reflectivities, then narrowband, then with the full
frequency-dependent reflectivities.  Memory rates are illustrative only.
"""
import numpy as np

from zalmsim import (Biphoton, MemoryParams, ModeConversionParams, bsm_fidelity_and_error,
                     bsm_kernels, bsm_purity, cavity_efficiency, channelize, class_fidelities,
                     decompose, ideal_loading_fidelity, mode_convert_phi, narrowband_fidelities,
                     phi_kernel, preset, purity_from_schmidt)

cfg = preset("case2")
psi = Biphoton.gaussian(cfg.source)
amp = channelize(psi, 0, cfg.plan)

p = purity_from_schmidt(decompose(amp))
pc, pe = bsm_fidelity_and_error(bsm_purity(p))
print(f"single-source purity {p:.4f}  BSM purity {bsm_purity(p):.4f}  Pr(e) {pe:.3e}")

mc = ModeConversionParams.from_plan(cfg.plan, 600e6)
k = bsm_kernels(mode_convert_phi(phi_kernel(amp), mc))
print(f"ideal loading fidelity {ideal_loading_fidelity(k):.5f}  (= Pr(c) {pc:.5f})")

two_pi = 2 * np.pi
siv = MemoryParams(gamma=two_pi * 0.05e9, kappa=two_pi * 10e9, kappa_J=two_pi * 0.5e9,
                   g=0.0, Delta_12=two_pi * 5e9).at_cooperativity_pi()
r1 = siv.r1(0.0)
print(f"C_pi reflectivity r1 = {r1:.4f}, eta_cavity = {cavity_efficiency(siv):.4f}")
print("narrowband F_a, F_b =", *(f"{f:.5f}" for f in narrowband_fidelities(k, r1)))
print("broadband  F_a, F_b =", *(f"{f:.5f}" for f in class_fidelities(k, siv)))

# a slower cavity sees the compressed band as broadband; fidelity drops
slow = MemoryParams(gamma=two_pi * 0.1e9, kappa=two_pi * 1.5e9, kappa_J=two_pi * 0.1e9,
                    g=0.0, Delta_12=two_pi * 1e9).at_cooperativity_pi()
print("slow cavity F_a, F_b =", *(f"{f:.5f}" for f in class_fidelities(k, slow)))
