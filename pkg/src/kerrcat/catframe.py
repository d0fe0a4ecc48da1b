"""Qubit frame spanned by the two highest-energy eigenstates of the
stabilized-oscillator Hamiltonian.

The double well is inverted (the Kerr term enters with a negative sign), so
the quasi-degenerate cat manifold sits at the *top* of the spectrum. The
even-parity member defines +X; the symmetric/antisymmetric combinations
approximate the two coherent pointer states and define ±Z.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCat
from .fock import DensityMatrix, Ket, Operator, Truncation

PARITY_CLASSIFY_MIN = 0.2


@dataclass
class CatFrame:
    """Computational frame of a stabilized cat qubit.

    Attributes
    ----------
    energies : descending eigenvalues of the generating Hamiltonian.
    v_even, v_odd : parity eigenstates spanning the manifold (gauge-fixed so
        ``<v_even| (a+a†)/2 |v_odd>`` is real and positive).
    w_plus, w_minus : pointer states ``(v_even ± v_odd)/sqrt(2)``.
    z, x, y : Pauli operators embedded in the oscillator space,
        ``z = |w+><w+| - |w-><w-|``, ``x = |ve><ve| - |vo><vo|``,
        ``y = i|ve><vo| - i|vo><ve|``.
    projector : rank-2 projector onto the manifold.
    tunnel_splitting : ``|E_even - E_odd|`` of the top pair.
    gap : energy from the manifold mean to the next eigenvalue below.
    """

    trunc: Truncation
    energies: np.ndarray
    v_even: Ket
    v_odd: Ket
    w_plus: Ket
    w_minus: Ket
    z: Operator
    x: Operator
    y: Operator
    projector: Operator
    tunnel_splitting: float
    gap: float


def build_cat_frame(h: Operator) -> CatFrame:
    """Diagonalize ``h`` and assemble the qubit frame from its top eigenpair.

    Raises DegenerateCat when the top two eigenstates cannot be classified by
    photon-number parity (both parity expectations below 0.2 in magnitude),
    which signals a Hamiltonian without the required symmetry.
    """
    H = h.mat
    dim = H.shape[0]
    E, V = np.linalg.eigh(H)
    E = E[::-1]
    V = V[:, ::-1]
    v0, v1 = V[:, 0], V[:, 1]

    par = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    p0 = float(np.sum(par * np.abs(v0) ** 2))
    p1 = float(np.sum(par * np.abs(v1) ** 2))
    if abs(p0) < PARITY_CLASSIFY_MIN and abs(p1) < PARITY_CLASSIFY_MIN:
        raise DegenerateCat(
            f"top eigenpair has no parity character (<P> = {p0:.3f}, {p1:.3f}); "
            "cannot build a cat frame")
    if p0 >= p1:
        ve, vo = v0, v1
        e_even, e_odd = E[0], E[1]
    else:
        ve, vo = v1, v0
        e_even, e_odd = E[1], E[0]

    # Gauge: rotate v_odd so <ve|(a+a†)/2|vo> is real positive, pinning the
    # pointer states to the +q / -q wells.
    n = np.arange(1, dim)
    qvo = np.zeros(dim, dtype=np.complex128)
    qvo[:-1] += 0.5 * np.sqrt(n) * vo[1:]   # a |vo>
    qvo[1:] += 0.5 * np.sqrt(n) * vo[:-1]   # a† |vo>
    c = complex(np.vdot(ve, qvo))
    if abs(c) < 1e-12:
        raise DegenerateCat("pointer gauge undefined: <ve|q|vo> = 0")
    vo = vo * np.exp(-1j * np.angle(c))

    wp = (ve + vo) / np.sqrt(2.0)
    wm = (ve - vo) / np.sqrt(2.0)

    Z = np.outer(wp, wp.conj()) - np.outer(wm, wm.conj())
    X = np.outer(ve, ve.conj()) - np.outer(vo, vo.conj())
    Y = 1j * np.outer(ve, vo.conj()) - 1j * np.outer(vo, ve.conj())
    P = np.outer(ve, ve.conj()) + np.outer(vo, vo.conj())

    gap = float(0.5 * (E[0] + E[1]) - E[2]) if dim > 2 else float("nan")
    tr = h.trunc
    return CatFrame(
        trunc=tr,
        energies=E,
        v_even=Ket(ve, tr),
        v_odd=Ket(vo, tr),
        w_plus=Ket(wp, tr),
        w_minus=Ket(wm, tr),
        z=Operator(Z, tr, hermitian_hint=True),
        x=Operator(X, tr, hermitian_hint=True),
        y=Operator(Y, tr, hermitian_hint=True),
        projector=Operator(P, tr, hermitian_hint=True),
        tunnel_splitting=float(abs(e_even - e_odd)),
        gap=gap,
    )


def bloch_vector(frame: CatFrame, state) -> np.ndarray:
    """(⟨x⟩, ⟨y⟩, ⟨z⟩) of a Ket or DensityMatrix in the cat frame."""
    if isinstance(state, Ket):
        amp = state.normalized().amp
        vec = [float(np.real(np.vdot(amp, O.mat @ amp)))
               for O in (frame.x, frame.y, frame.z)]
    elif isinstance(state, DensityMatrix):
        vec = [float(np.real(np.trace(O.mat @ state.mat)))
               for O in (frame.x, frame.y, frame.z)]
    else:
        raise TypeError(f"unsupported state type {type(state)}")
    return np.array(vec)


def manifold_population(frame: CatFrame, state) -> float:
    """Probability weight inside the two-dimensional cat manifold."""
    if isinstance(state, Ket):
        amp = state.normalized().amp
        return float(np.real(np.vdot(amp, frame.projector.mat @ amp)))
    if isinstance(state, DensityMatrix):
        return float(np.real(np.trace(frame.projector.mat @ state.mat)))
    raise TypeError(f"unsupported state type {type(state)}")
