"""Shared helpers: random time-reversal-symmetric model generation with a
densely certified gap (lattice scans can miss needle-thin gap closings, so
candidate models are vetted on a much finer sampling than the working grid).
"""

import numpy as np
import pytest

from fkmm import models as md

EVEN_2D = [
    "1",
    "cos(k1)",
    "cos(k2)",
    "cos(k1)*cos(k2)",
    "sin(k1)*sin(k2)",
    "cos(2*k1)",
    "cos(2*k2)",
]
ODD_2D = [
    "sin(k1)",
    "sin(k2)",
    "sin(k1)*cos(k2)",
    "cos(k1)*sin(k2)",
    "sin(2*k1)",
    "sin(2*k2)",
]


def random_combo(rng, basis, keep=0.6, scale=1.0):
    coeffs = rng.uniform(-scale, scale, len(basis))
    mask = rng.random(len(basis)) < keep
    terms = [f"{c:.6f}*{b}" for c, b, k in zip(coeffs, basis, mask) if k]
    return " + ".join(terms) if terms else "0"


def densely_gapped_t2(model, samples=512, margin=1e-2):
    ks = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    k1, k2 = np.meshgrid(ks, ks, indexing="ij")
    values = model.coefficient_values({"k1": k1.ravel(), "k2": k2.ravel()})
    q = (values**2).sum(axis=0)
    return q.min() > margin * q.max()


def random_trs_model_t020(rng, zero_slots=(), require_gap=True):
    """Random model on the doubly-reflected 2-torus with correct parities."""
    while True:
        coeffs = []
        for j in range(5):
            if j in zero_slots:
                coeffs.append("0")
            elif j == 2:
                coeffs.append(random_combo(rng, EVEN_2D))
            else:
                coeffs.append(random_combo(rng, ODD_2D))
        text = 'format = 1\nspace = "T:0,2,0"\n' + "\n".join(
            f'F{j} = "{c}"' for j, c in enumerate(coeffs)
        ) + "\n"
        model = md.parse_model(text, name="random-t020")
        if not require_gap or densely_gapped_t2(model):
            return model


def random_free_sphere_model(rng, zero_f2=True):
    """Random gapped model over the antipodal 2-sphere; coefficients are odd
    linear forms in the coordinates (plus an even F2 unless zeroed)."""
    while True:
        coeffs = []
        for j in range(5):
            if j == 2:
                coeffs.append("0" if zero_f2 else f"{rng.uniform(0.5, 1.5):.6f}")
            else:
                c = rng.uniform(-1, 1, 3)
                coeffs.append(
                    f"{c[0]:.6f}*x0 + {c[1]:.6f}*x1 + {c[2]:.6f}*x2"
                )
        text = 'format = 1\nspace = "S:0,3"\n' + "\n".join(
            f'F{j} = "{c}"' for j, c in enumerate(coeffs)
        ) + "\n"
        model = md.parse_model(text, name="random-s03")
        # dense gap check on the sphere
        n = 400
        theta = np.linspace(1e-3, np.pi - 1e-3, n)
        phi = np.linspace(0, 2 * np.pi, n, endpoint=False)
        T, P = np.meshgrid(theta, phi, indexing="ij")
        env = {
            "x0": (np.sin(T) * np.cos(P)).ravel(),
            "x1": (np.sin(T) * np.sin(P)).ravel(),
            "x2": np.cos(T).ravel(),
        }
        values = model.coefficient_values(env)
        q = (values**2).sum(axis=0)
        if q.min() > 1e-2 * q.max():
            return model


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)
