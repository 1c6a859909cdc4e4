"""An irregularly sampled signal treated as a time scale of isolated points."""

import os
import tempfile

import numpy as np

from chronofrac import frac_derivative
from chronofrac.cli import ingest_csv

rng = np.random.default_rng(0)
times = np.sort(rng.uniform(0, 10, size=25)).round(3)
values = np.sin(times) + 0.05 * rng.standard_normal(times.size)

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "signal.csv")
    np.savetxt(path, np.column_stack([times, values]), delimiter=",", header="t,value", comments="", fmt="%.6g")
    T, f = ingest_csv(path)

# every sample but the last has a forward jump, so each derivative is a
# closed form in the sample spacing
points = list(T.iter_components())[:-1]
print(f"{'t':>7} {'mu':>7} {'order 1':>10} {'order 1/2':>10}")
for a, _ in points:
    d1 = frac_derivative(f, T, a, 1).value
    dh = frac_derivative(f, T, a, "1/2").value
    print(f"{float(a):7.3f} {float(T.mu(a)):7.3f} {d1:10.4f} {dh:10.4f}")
