"""
Rate, guard bands and inter-channel interference
================================================

Low heralding efficiency (Case 2) buys purity but lets a channel-n signal
leak into channel n+1.  With ~1 pair per pulse a two-pair event is common,
so that leakage becomes memory-load errors.  Using every second or third
channel trades rate for interference.
"""
from dataclasses import replace

from zalmsim import guard_band_channels, preset, run, two_pair_probability

base = preset("case2")
for stride in (1, 2, 3):
    cfg = replace(base, outputs=replace(base.outputs, guard_stride=stride))
    t = run(cfg)
    chi = [r[f"chi_{stride}"] for r in t.rows if r[f"chi_{stride}"] is not None]
    print(f"stride {stride}: {len(guard_band_channels(cfg.plan, stride))} channels, "
          f"R = {t.footer['R_total']:.3e} per pulse, neighbour leakage chi_{stride} ~ {sum(chi) / len(chi):.2e}")

print(f"two-pair probability at E(Np)=1: {two_pair_probability(1.0):.4f}")
