import json
import os

import numpy as np
import pytest

from rankr import cli

SPEC_DIR = os.path.join(os.path.dirname(__file__), "..", "groupspecs")


def random_sl(rng: np.random.Generator, n: int) -> np.ndarray:
    """Gaussian matrix normalized into SL(n,R)."""
    while True:
        g = rng.standard_normal((n, n))
        d = np.linalg.det(g)
        if abs(d) > 1e-3:
            break
    if d < 0:
        g[:, 0] *= -1.0
        d = -d
    return g / d ** (1.0 / n)


def random_so(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, -1] *= -1.0
    return q


def random_chamber_dir(rng: np.random.Generator, n: int, min_gap: float = 0.25):
    """Unit traceless descending vector with consecutive gaps >= min_gap."""
    while True:
        h = np.sort(rng.standard_normal(n))[::-1]
        h = h - h.mean()
        h = h / np.linalg.norm(h)
        if np.min(h[:-1] - h[1:]) >= min_gap:
            return h


def spec_path(name: str) -> str:
    return os.path.join(SPEC_DIR, name)


@pytest.fixture(scope="session")
def sl3_spec():
    return cli.load_spec(spec_path("sl3_l2.json"))


@pytest.fixture(scope="session")
def sl3_group(sl3_spec):
    """(generators, names, table) of the bundled strongly transverse pair."""
    return cli.build_group(sl3_spec)


@pytest.fixture(scope="session")
def sl2_spec():
    return cli.load_spec(spec_path("sl2_classical.json"))


@pytest.fixture(scope="session")
def sl2_group(sl2_spec):
    return cli.build_group(sl2_spec)


def write_generator_spec(path, n, matrices, names=None, seed=0):
    names = names or [chr(ord("a") + i) for i in range(len(matrices))]
    spec = {
        "n": n,
        "seed": seed,
        "tolerances": {},
        "generators": [
            {"name": nm, "matrix": np.asarray(m).tolist()}
            for nm, m in zip(names, matrices)
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec, fh)
    return path
