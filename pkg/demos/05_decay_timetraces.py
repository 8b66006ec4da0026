"""Normalized decay traces of the global observables, weak vs strong drive.

After switch-off, every series is normalized to its steady-state value.
At weak on-resonance drive the population relaxes slower than a single
atom (subradiance from multiple scattering) while the elastic power
leaves faster; at strong drive everything hugs the single-atom reference
much more closely and the inelastic/elastic power ratio is order one.

Writes one decay-phase time-series CSV per drive and a timetrace figure
spec:

    superdecay-fig --spec demos/output/timetrace_spec.json
"""

import json
import os

import numpy as np

from superdecay import (DriveParams, Direction, Schedule, observable_series,
                        run_drive_decay, sample_gaussian_cloud,
                        write_series_csv)

OUT = os.path.join(os.path.dirname(__file__), "output", "timetrace")
os.makedirs(OUT, exist_ok=True)

cloud = sample_gaussian_cloud(300, 12.0, seed=77)
schedule = Schedule(t_drive=10.0, t_decay=3.0, sample_dt=0.01)

paths = []
for rabi in (0.05, 2.0):
    traj = run_drive_decay(cloud, DriveParams(rabi=rabi), schedule)
    series = observable_series(traj, cloud, directions=[Direction(np.pi / 2)],
                               n_phi_average=64, decay_only=True)
    ratio0 = series.get("ratio").values[0]
    picks = [0, 50, 100, 200, 300]
    print(f"rabi = {rabi}:  inelastic/elastic power ratio at switch-off "
          f"= {ratio0:.4f}")
    ne = series.get("Ne").normalized
    print("  t      :", "  ".join(f"{series.times[i]:5.2f}" for i in picks))
    print("  Ne(t)  :", "  ".join(f"{ne[i]:5.3f}" for i in picks))
    print("  e^-t   :", "  ".join(f"{np.exp(-series.times[i]):5.3f}" for i in picks))
    path = os.path.join(OUT, f"trace_rabi_{rabi}.csv")
    write_series_csv(series, path)
    paths.append(path)

spec = {"kind": "timetrace", "inputs": paths,
        "output": os.path.join(OUT, "timetrace_panel"),
        "title": "normalized decay of the driven cloud"}
spec_path = os.path.join(os.path.dirname(__file__), "output",
                         "timetrace_spec.json")
with open(spec_path, "w") as f:
    json.dump(spec, f, indent=2)
print(f"\nwrote per-drive CSVs and {spec_path}")
