"""Walk through the four potentials on the banana data.

One nearest-centroid hyperplane is fitted to the two crescents. We then look
at what each potential does at three kinds of points: a training point, the
centre of the data, and a point far out along the decision plane, where the
model has never seen data.

Run:  python demos/potentials_walkthrough.py [out_dir]
"""
import sys

import numpy as np

from potfuse import io_data, toy
from potfuse.linear_models import TrainSet, train_nearest_centroid
from potfuse.scoring import fit_member, score

data = io_data.make_banana(n=200, noise=0.15, seed=0)
t = TrainSet(data.X, np.where(data.y == 0, 1, -1))
model = train_nearest_centroid(t)
print("normal", np.round(model.hyperplane.normal, 4), "offset", round(model.hyperplane.offset, 4))
print("training accuracy of the single plane:", np.mean(model.classify(t.points) == t.labels))

# Points to probe. The plane basis is 1-D here, so "along the plane" is
# a single direction.
centre = data.X.mean(axis=0)
spread = model.project(data.X).std()
probes = {
    "a training point": data.X[0],
    "centre of the data": centre,
    "3 sd along the plane": centre + 3 * spread * model.basis[0],
    "10 sd along the plane": centre + 10 * spread * model.basis[0],
}

print(f"\n{'':24s}{'omega':>9s}" + "".join(f"{s:>11s}" for s in ("ke", "ka", "kb", "kc")))
members = {s: fit_member(model, t, s) for s in ("ke", "ka", "kb", "kc")}
for name, x in probes.items():
    row = f"{name:24s}{model.discriminant(x):9.3f}"
    row += "".join(f"{score(members[s], x):11.2e}" for s in members)
    print(row)

# ke only sees the discriminant, so it cannot tell the centre from a point
# far along the plane (same omega). ka, kb and kc also look at where the point
# projects onto the plane. Far out, kb and kc vanish because both class
# densities do. ka only shrinks to a floor: its exponent t is a softmax of the
# projected density against its peak value, so it cannot fall below
# 1 / (1 + e**y(mu)).

if len(sys.argv) > 1:
    res = toy.write_toy(sys.argv[1], data)
    print("\nwrote", ", ".join(res.svgs), "to", sys.argv[1])
