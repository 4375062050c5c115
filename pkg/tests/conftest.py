"""Shared synthetic fixtures: seeded Gaussian cluster datasets."""

import random

import numpy as np
import pytest

from binplot.aggregation import ClassInfo, Dataset
from binplot.tessellation import Domain


def make_blob_dataset(seed, n_points, n_classes, domain=None):
    """Mixed Gaussian clusters, one or two blobs per class, clipped to a box."""
    domain = domain or Domain(0.0, 10.0, 0.0, 10.0)
    rng = random.Random(seed)
    xs, ys, cids = [], [], []
    blobs = []
    for c in range(n_classes):
        for _ in range(rng.choice((1, 2))):
            blobs.append(
                (
                    c,
                    rng.uniform(domain.x_min, domain.x_max),
                    rng.uniform(domain.y_min, domain.y_max),
                    rng.uniform(0.05, 0.2) * domain.width,
                )
            )
    for i in range(n_points):
        c, mx, my, s = blobs[i % len(blobs)]
        xs.append(min(max(rng.gauss(mx, s), domain.x_min), domain.x_max))
        ys.append(min(max(rng.gauss(my, s), domain.y_min), domain.y_max))
        cids.append(c)
    classes = [ClassInfo(c, f"class-{chr(ord('a') + c)}") for c in range(n_classes)]
    return Dataset(np.array(xs), np.array(ys), np.array(cids, dtype=np.int64), classes)


@pytest.fixture
def blob_dataset():
    return make_blob_dataset(seed=11, n_points=2000, n_classes=4)


@pytest.fixture
def unit_domain():
    return Domain(0.0, 10.0, 0.0, 10.0)
