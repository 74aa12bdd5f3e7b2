"""Canonical real X states, their Bloch form, and one-parameter families.

An X state is a two-qubit density matrix whose only nonzero entries sit on
the main diagonal (populations a, b, c, d) and the anti-diagonal
(coherences r between |00> and |11>, s between |01> and |10>).  After
stripping the two coherence phases by local unitaries the state is fully
described by five real numbers; this module works in that canonical real
form, with r and s allowed to carry a sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmat import QmatError, validate_density

ATOL = 1e-12

FAMILIES = ("werner", "alpha", "beta", "vv", "mems")

# Bell kets in the fixed |ab> ordering (A most significant).
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2.0)
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2.0)
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2.0)
PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) / math.sqrt(2.0)


class XStateError(ValueError):
    """Raised when parameters do not describe a physical X state."""


@dataclass(frozen=True)
class XState:
    """Canonical real X state: populations a..d, signed coherences r, s."""

    a: float
    b: float
    c: float
    d: float
    r: float
    s: float

    def __post_init__(self):
        pops = (self.a, self.b, self.c, self.d)
        for name, p in zip("abcd", pops):
            if p < -ATOL:
                raise XStateError(f"population {name} = {p} is negative")
        if abs(sum(pops) - 1.0) > ATOL:
            raise XStateError(f"populations sum to {sum(pops)}, not 1")
        if abs(self.r) > math.sqrt(max(self.a * self.d, 0.0)) + ATOL:
            raise XStateError(
                f"|r| = {abs(self.r)} exceeds sqrt(a*d) = "
                f"{math.sqrt(max(self.a * self.d, 0.0))}"
            )
        if abs(self.s) > math.sqrt(max(self.b * self.c, 0.0)) + ATOL:
            raise XStateError(
                f"|s| = {abs(self.s)} exceeds sqrt(b*c) = "
                f"{math.sqrt(max(self.b * self.c, 0.0))}"
            )


@dataclass(frozen=True)
class BlochX:
    """Five-parameter Bloch form: local z components and tensor diagonal."""

    x3: float
    y3: float
    t1: float
    t2: float
    t3: float

    def as_tuple(self):
        return (self.x3, self.y3, self.t1, self.t2, self.t3)


def bloch_from_xstate(x: XState) -> BlochX:
    """Map populations/coherences to the five Bloch parameters."""
    return BlochX(
        x3=x.a + x.b - x.c - x.d,
        y3=x.a - x.b + x.c - x.d,
        t1=2.0 * (x.s + x.r),
        t2=2.0 * (x.s - x.r),
        t3=x.a - x.b - x.c + x.d,
    )


def xstate_from_bloch(p: BlochX) -> XState:
    """Exact inverse of bloch_from_xstate.

    Raises XStateError naming the violated constraint when the Bloch
    tuple lies outside the physical X-state region.
    """
    a = (1.0 + p.x3 + p.y3 + p.t3) / 4.0
    b = (1.0 + p.x3 - p.y3 - p.t3) / 4.0
    c = (1.0 - p.x3 + p.y3 - p.t3) / 4.0
    d = (1.0 - p.x3 - p.y3 + p.t3) / 4.0
    r = (p.t1 - p.t2) / 4.0
    s = (p.t1 + p.t2) / 4.0
    return XState(a=a, b=b, c=c, d=d, r=r, s=s)


def density_matrix(x: XState):
    """Lay out the 4x4 matrix of an X state (basis |00>,|01>,|10>,|11>)."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = x.a, x.b, x.c, x.d
    m[0, 3] = m[3, 0] = x.r
    m[1, 2] = m[2, 1] = x.s
    return m


def xstate_from_density(rho, tol: float = 1e-10) -> XState:
    """Read an X state back off a matrix, rejecting off-pattern entries."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise QmatError(f"expected a 4x4 matrix, got shape {rho.shape}")
    pattern = np.zeros((4, 4), dtype=bool)
    pattern[np.arange(4), np.arange(4)] = True
    pattern[0, 3] = pattern[3, 0] = pattern[1, 2] = pattern[2, 1] = True
    off = float(np.max(np.abs(rho[~pattern]))) if (~pattern).any() else 0.0
    if off > tol:
        raise XStateError(f"matrix is not of X form: off-pattern entry {off:.3e}")
    imag = max(
        float(np.max(np.abs(np.diagonal(rho).imag))),
        float(abs(rho[0, 3].imag)),
        float(abs(rho[1, 2].imag)),
    )
    if imag > tol:
        raise XStateError(f"matrix is not in canonical real form: imag {imag:.3e}")
    return XState(
        a=rho[0, 0].real,
        b=rho[1, 1].real,
        c=rho[2, 2].real,
        d=rho[3, 3].real,
        r=rho[0, 3].real,
        s=rho[1, 2].real,
    )


def phased_density_matrix(a, b, c, d, r, chi, s, xi_ph):
    """Seven-parameter X matrix with explicit coherence phases.

    r and s are nonnegative moduli; chi and xi_ph are the phases of the
    (|00><11|) and (|01><10|) coherences.
    """
    if r < 0 or s < 0:
        raise XStateError("coherence moduli r, s must be nonnegative")
    XState(a=a, b=b, c=c, d=d, r=r, s=s)  # reuse the constraint checks
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0], m[1, 1], m[2, 2], m[3, 3] = a, b, c, d
    m[0, 3] = r * np.exp(1j * chi)
    m[3, 0] = np.conj(m[0, 3])
    m[1, 2] = s * np.exp(1j * xi_ph)
    m[2, 1] = np.conj(m[1, 2])
    return m


def canonicalize_phases(a, b, c, d, r, chi, s, xi_ph) -> XState:
    """Strip the two coherence phases, keeping the moduli.

    Local z rotations with angles phi_A = -(chi + xi_ph)/2 and
    phi_B = -(chi - xi_ph)/2 rotate both coherences onto the real axis
    while leaving the diagonal untouched, so every local-unitary
    invariant (concurrence, LAQC, ...) of the input is preserved.
    """
    if r < 0 or s < 0:
        raise XStateError("coherence moduli r, s must be nonnegative")
    return XState(a=a, b=b, c=c, d=d, r=r, s=s)


def gamma_cap(gamma: float) -> float:
    """Piecewise population weight of the maximally entangled mixed family."""
    if not 0.0 <= gamma <= 1.0:
        raise XStateError(f"gamma = {gamma} outside [0, 1]")
    if gamma < 2.0 / 3.0:
        return 1.0 / 3.0
    return gamma / 2.0


def _check_param(tag: str, param: float):
    if tag not in FAMILIES:
        raise XStateError(f"unknown family tag {tag!r}; expected one of {FAMILIES}")
    if not 0.0 <= param <= 1.0:
        raise XStateError(f"{tag} parameter {param} outside [0, 1]")


def make_family(tag: str, param: float) -> XState:
    """Construct a member of one of the five one-parameter families.

    werner  z:     z * |psi-><psi-| + (1-z)/4 * identity
    alpha   a:     Bell-diagonal, phi+ weight a, psi+/psi- weights (1-a)/2
    beta    b:     b * |phi+><phi+| + (1-b) * |psi+><psi+|
    vv      F:     F * |psi-><psi-| + (1-F) * |00><00|
    mems    g:     maximal entanglement at fixed linear entropy; coherence
                   g/2 between |00> and |11>, populations from gamma_cap
    """
    _check_param(tag, param)
    p = param
    if tag == "werner":
        return XState(
            a=(1 - p) / 4, b=(1 + p) / 4, c=(1 + p) / 4, d=(1 - p) / 4,
            r=0.0, s=-p / 2,
        )
    if tag == "alpha":
        return XState(
            a=p / 2, b=(1 - p) / 2, c=(1 - p) / 2, d=p / 2, r=p / 2, s=0.0,
        )
    if tag == "beta":
        return XState(
            a=p / 2, b=(1 - p) / 2, c=(1 - p) / 2, d=p / 2,
            r=p / 2, s=(1 - p) / 2,
        )
    if tag == "vv":
        return XState(a=1 - p, b=p / 2, c=p / 2, d=0.0, r=0.0, s=-p / 2)
    cap = gamma_cap(p)
    return XState(a=cap, b=1 - 2 * cap, c=0.0, d=cap, r=p / 2, s=0.0)


def family_bloch(tag: str, param: float) -> BlochX:
    """Closed-form Bloch parameters of a family member.

    For the mems family the correlation components t1 = -t2 equal the
    state parameter itself (the coherence is param/2 regardless of the
    gamma_cap branch); the local components follow the piecewise cap.
    """
    _check_param(tag, param)
    p = param
    if tag == "werner":
        return BlochX(x3=0.0, y3=0.0, t1=-p, t2=-p, t3=-p)
    if tag == "alpha":
        return BlochX(x3=0.0, y3=0.0, t1=p, t2=-p, t3=2 * p - 1)
    if tag == "beta":
        return BlochX(x3=0.0, y3=0.0, t1=1.0, t2=1 - 2 * p, t3=2 * p - 1)
    if tag == "vv":
        return BlochX(x3=1 - p, y3=1 - p, t1=-p, t2=-p, t3=1 - 2 * p)
    cap = gamma_cap(p)
    return BlochX(x3=1 - 2 * cap, y3=2 * cap - 1, t1=p, t2=-p, t3=4 * cap - 1)


def bell_basis_mixture(weight: float, bell_ket, basis_index: int):
    """Density matrix of weight*|bell><bell| + (1-weight)*|ij><ij|.

    The general construction behind the vv family; exposed for the
    oracle path only (closed forms cover the |psi->, |00> special case).
    basis_index is the computational index of |ij> (0..3, A-major).
    """
    if not 0.0 <= weight <= 1.0:
        raise XStateError(f"weight {weight} outside [0, 1]")
    if basis_index not in range(4):
        raise XStateError(f"basis_index {basis_index} outside 0..3")
    ket = np.asarray(bell_ket, dtype=complex)
    rho = weight * np.outer(ket, ket.conj())
    rho[basis_index, basis_index] += 1 - weight
    return rho


def random_xstate(rng, dirichlet_alpha: float = 1.0) -> XState:
    """Seeded random valid X state (Dirichlet populations, uniform signs)."""
    a, b, c, d = rng.dirichlet(np.full(4, dirichlet_alpha))
    r = rng.uniform(-1.0, 1.0) * math.sqrt(a * d)
    s = rng.uniform(-1.0, 1.0) * math.sqrt(b * c)
    return XState(a=a, b=b, c=c, d=d, r=r, s=s)


def assert_valid_family_member(tag: str, param: float, tol: float = 1e-9):
    """Internal sanity hook: family members must be honest density matrices."""
    report = validate_density(density_matrix(make_family(tag, param)), tol_psd=tol)
    if not report.passed:
        raise XStateError(
            f"{tag}({param}) failed density validation: min eig "
            f"{report.min_eigenvalue:.3e}"
        )
