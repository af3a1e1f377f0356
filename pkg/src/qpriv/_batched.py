"""Vectorized kernels shared by the certification search and the scanners.

Everything here operates on stacked arrays (leading batch axis) of small
dense matrices and is deliberately free of per-item Python loops.
"""

from __future__ import annotations

import numpy as np

from .divergences import TOL_SUPP

_ENT_FLOOR = 1e-18


def eigvals_2x2_herm(m: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of stacked 2x2 Hermitian matrices, ascending."""
    a = m[..., 0, 0].real
    c = m[..., 1, 1].real
    b = m[..., 0, 1]
    mean = 0.5 * (a + c)
    disc = np.sqrt(np.clip((0.5 * (a - c)) ** 2 + np.abs(b) ** 2, 0.0, None))
    return np.stack([mean - disc, mean + disc], axis=-1)


def positive_eigensum(m: np.ndarray) -> np.ndarray:
    """Trace of the positive part of stacked Hermitian matrices."""
    if m.shape[-1] == 2:
        w = eigvals_2x2_herm(m)
    else:
        w = np.linalg.eigvalsh(m)
    return np.sum(np.clip(w, 0.0, None), axis=-1)


def trace_distance_batch(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    d = x - y
    if d.shape[-1] == 2:
        w = eigvals_2x2_herm(d)
    else:
        w = np.linalg.eigvalsh(d)
    return 0.5 * np.sum(np.abs(w), axis=-1)


def hockey_stick_ext_batch(x: np.ndarray, y: np.ndarray, gamma: float) -> np.ndarray:
    return positive_eigensum(x - gamma * y) - max(0.0, 1.0 - gamma)


def fidelity_qubit_batch(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Fidelity of stacked 2x2 states: Tr[xy] + 2 sqrt(det x det y)."""
    tr = np.real(np.einsum("...ij,...ji->...", x, y))
    det_x = np.clip(np.real(np.linalg.det(x)), 0.0, None)
    det_y = np.clip(np.real(np.linalg.det(y)), 0.0, None)
    f = tr + 2.0 * np.sqrt(det_x * det_y)
    return np.clip(f, 0.0, 1.0)


def bures_squared_qubit_batch(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return 2.0 * (1.0 - np.sqrt(fidelity_qubit_batch(x, y)))


def relative_entropy_batch(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Relative entropy of stacked state pairs; inf on support violation."""
    w, v = np.linalg.eigh(y)
    w = np.clip(w, 0.0, None)
    cutoff = TOL_SUPP * np.clip(w[..., -1:], 1e-300, None)
    on_support = w > cutoff
    overlaps = np.clip(np.real(np.einsum("...ji,...jk,...ki->...i", v.conj(), x, v)), 0.0, None)
    outside = np.sum(np.where(on_support, 0.0, overlaps), axis=-1)
    mu = np.clip(np.linalg.eigvalsh(x), 0.0, None)
    ent = np.sum(np.where(mu > _ENT_FLOOR, mu * np.log(np.clip(mu, _ENT_FLOOR, None)), 0.0), axis=-1)
    logw = np.log(np.where(on_support, np.clip(w, 1e-300, None), 1.0))
    cross = np.sum(np.where(on_support, overlaps * logw, 0.0), axis=-1)
    return np.where(outside > TOL_SUPP, np.inf, ent - cross)


def max_relative_entropy_batch(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Max-relative entropy of stacked state pairs; inf on support violation."""
    w, v = np.linalg.eigh(y)
    w = np.clip(w, 0.0, None)
    cutoff = TOL_SUPP * np.clip(w[..., -1:], 1e-300, None)
    on_support = w > cutoff
    overlaps = np.clip(np.real(np.einsum("...ji,...jk,...ki->...i", v.conj(), x, v)), 0.0, None)
    outside = np.sum(np.where(on_support, 0.0, overlaps), axis=-1)
    inv_sqrt = np.where(on_support, 1.0 / np.sqrt(np.where(on_support, w, 1.0)), 0.0)
    s = np.einsum("...ik,...k,...jk->...ij", v, inv_sqrt, v.conj())
    core = s @ x @ s
    if core.shape[-1] == 2:
        lam = eigvals_2x2_herm(core)[..., -1]
    else:
        lam = np.linalg.eigvalsh(core)[..., -1]
    val = np.clip(np.log(np.clip(lam, 1e-300, None)), 0.0, None)
    return np.where(outside > TOL_SUPP, np.inf, val)


# ---------------------------------------------------------------------------
# Batched random ensembles
# ---------------------------------------------------------------------------


def gaussian_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def ginibre_states(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """Stacked full-rank Ginibre-induced random states, shape (n, dim, dim)."""
    g = gaussian_complex(rng, (n, dim, dim))
    m = g @ np.conj(np.swapaxes(g, -1, -2))
    tr = np.real(np.trace(m, axis1=-2, axis2=-1))[:, None, None]
    return m / tr


def orthonormal_pairs(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """Stacked random orthonormal 2-frames, shape (n, dim, 2)."""
    q, _ = np.linalg.qr(gaussian_complex(rng, (n, dim, 2)))
    return q


def projectors_from_vectors(vecs: np.ndarray) -> np.ndarray:
    """Outer products v v^dag for stacked vectors (..., dim)."""
    return np.einsum("...i,...j->...ij", vecs, vecs.conj())


def random_effects(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """Stacked random effects 0 <= M <= I; half sharp projectors, half smooth."""
    basis, _ = np.linalg.qr(gaussian_complex(rng, (n, dim, dim)))
    values = rng.uniform(0.0, 1.0, size=(n, dim))
    sharp = rng.random(n) < 0.5
    thresholds = rng.uniform(0.0, 1.0, size=(n, 1))
    values = np.where(sharp[:, None], (values < thresholds).astype(float), values)
    return np.einsum("nik,nk,njk->nij", basis, values, basis.conj())


def random_channel_batch(
    rng: np.random.Generator, n: int, dim_in: int, dim_out: int, kraus_count: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stacked random CPTP maps; returns (kraus, transfer).

    kraus has shape (n, kraus_count, dim_out, dim_in) and transfer
    (n, dim_out^2, dim_in^2), row-major.
    """
    g = gaussian_complex(rng, (n, dim_out * kraus_count, dim_in))
    q, _ = np.linalg.qr(g)
    kraus = q.reshape(n, kraus_count, dim_out, dim_in)
    transfer = np.einsum("nkac,nkbd->nabcd", kraus, kraus.conj()).reshape(
        n, dim_out * dim_out, dim_in * dim_in
    )
    return kraus, transfer


# ---------------------------------------------------------------------------
# Mechanism transfer matrices
# ---------------------------------------------------------------------------


def depolarizing_transfer(dim: int, p: float) -> np.ndarray:
    eye_vec = np.eye(dim, dtype=complex).reshape(-1)
    return (1.0 - p) * np.eye(dim * dim, dtype=complex) + (p / dim) * np.outer(
        eye_vec, eye_vec
    )


def measurement_transfer_batch(effects: np.ndarray) -> np.ndarray:
    """Transfer matrices of binary measurement channels for stacked effects.

    effects: (n, d, d) with 0 <= M <= I. Output shape (n, 4, d^2): the row for
    output entry (0,0) reads Tr[M w], the row for (1,1) reads Tr[(I-M) w].
    """
    n, d, _ = effects.shape
    t = np.zeros((n, 4, d * d), dtype=complex)
    eye_vec = np.eye(d, dtype=complex).reshape(-1)
    m_vec = np.swapaxes(effects, -1, -2).reshape(n, d * d)
    t[:, 0, :] = m_vec
    t[:, 3, :] = eye_vec[None, :] - m_vec
    return t


def mechanism_transfer_batch(effects: np.ndarray, p: float) -> np.ndarray:
    """Transfer of Dep_p composed after the binary readout of each effect."""
    dep = depolarizing_transfer(2, p)
    return np.einsum("ab,nbc->nac", dep, measurement_transfer_batch(effects))


def apply_transfer(transfer: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Apply stacked transfer matrices (n, o^2, d^2) to states (n, d, d)."""
    n = states.shape[0]
    d2 = states.shape[-1] * states.shape[-2]
    out = np.einsum("nab,nb->na", transfer, states.reshape(n, d2))
    dout = int(round(np.sqrt(out.shape[-1])))
    return out.reshape(n, dout, dout)


def positive_eigenspace_projectors(ops: np.ndarray) -> np.ndarray:
    """Projector onto the strictly positive eigenspace of stacked Hermitians."""
    w, v = np.linalg.eigh(ops)
    keep = (w > 0.0).astype(float)
    return np.einsum("nik,nk,njk->nij", v, keep, v.conj())
