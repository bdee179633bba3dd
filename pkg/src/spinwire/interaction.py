"""Anti-diagonal spin-orbit interaction matrices and their two forms.

The interaction at unit direction n = (cos phi, sin phi) is the matrix
mu(s, n) with entries mu_{k,k'} = delta_{k,-k'} alpha_k exp(-2i k phi);
hermiticity requires alpha_k^* = alpha_{-k}. The same family can be
written as an operator polynomial in (sz, sp) where term j carries
(sp n_-)^(2s - 2j) between the fringe multipliers
prod_{i<j}(sz - s + i) and prod_{i<j}(sz + s - i), with n_- = exp(-i phi).
Both constructors live here together with the structural checks that
make the hidden integrals of motion close: anti-diagonality,
sz-anticommutation, rotation covariance, and hermiticity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .spin_algebra import SpinRep, build_spin_rep

__all__ = [
    "InteractionSpec",
    "BetaSpec",
    "MuMatrix",
    "ConditionCheck",
    "ConditionReport",
    "mu_from_alphas",
    "mu_from_betas",
    "betas_to_alphas",
    "check_conditions",
    "mu_squared_diagonal",
    "preset",
    "PRESET_NAMES",
]

HERMITICITY_TOL = 1e-13

# fixed sampling angles for structural checks; the offset keeps them away
# from axis-aligned values where a defect could accidentally vanish
_CHECK_ANGLES = tuple(0.123456789 + 2.0 * math.pi * i / 8.0 for i in range(8))


def _alpha_labels(two_s: int) -> tuple[int, ...]:
    return tuple(range(two_s, -two_s - 1, -2))


def _beta_labels(two_s: int) -> tuple[int, ...]:
    # term j of the polynomial form carries label two_k = two_s - 2j and
    # exists while 2s - 2j >= 0, so labels stop at 0 (integer s) or 1
    return tuple(range(two_s, (two_s % 2) - 1, -2))


def _validate_labels(
    kind: str, values: Mapping[int, complex], expected: tuple[int, ...]
) -> dict[int, complex]:
    got = set(values.keys())
    want = set(expected)
    if got != want:
        missing = sorted(want - got)
        extra = sorted(got - want)
        raise ValueError(
            f"{kind} labels must be exactly {sorted(want)} (doubled integers); "
            f"missing {missing}, unexpected {extra}"
        )
    out: dict[int, complex] = {}
    for two_k in expected:
        z = complex(values[two_k])
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"{kind}[{two_k}] is not finite: {z!r}")
        out[two_k] = z
    return out


@dataclass(frozen=True)
class InteractionSpec:
    """Anti-diagonal interaction parameters alpha_k, keyed by two_k.

    Keys must be exactly {two_s, two_s - 2, ..., -two_s}. Hermiticity
    (alpha_k^* = alpha_{-k}) is not enforced at construction so that
    deliberately broken specs can be represented for negative controls;
    validate() raises on violation and check_conditions() reports it.
    """

    two_s: int
    alphas: Mapping[int, complex]

    def __post_init__(self) -> None:
        if not isinstance(self.two_s, (int, np.integer)) or self.two_s < 0:
            raise ValueError(f"two_s must be a nonnegative integer, got {self.two_s!r}")
        clean = _validate_labels("alphas", self.alphas, _alpha_labels(self.two_s))
        object.__setattr__(self, "alphas", clean)

    @property
    def two_k_values(self) -> tuple[int, ...]:
        return _alpha_labels(self.two_s)

    def alpha(self, two_k: int) -> complex:
        return self.alphas[two_k]

    @property
    def max_abs_alpha(self) -> float:
        return max(abs(z) for z in self.alphas.values())

    def hermiticity_violation(self) -> tuple[float, int]:
        """Max |alpha_k^* - alpha_{-k}| and the offending two_k (>= 0)."""
        worst, worst_two_k = 0.0, self.two_s
        for two_k in self.two_k_values:
            if two_k < 0:
                continue
            v = abs(self.alphas[two_k].conjugate() - self.alphas[-two_k])
            if v > worst:
                worst, worst_two_k = v, two_k
        return worst, worst_two_k

    def validate(self) -> None:
        scale = max(1.0, self.max_abs_alpha)
        v, two_k = self.hermiticity_violation()
        if v > HERMITICITY_TOL * scale:
            raise ValueError(
                f"interaction is not hermitian: |conj(alpha[{two_k}]) - "
                f"alpha[{-two_k}]| = {v:.3g} for two_k={two_k}"
            )


@dataclass(frozen=True)
class BetaSpec:
    """Operator-polynomial coefficients beta_k, keyed by two_k.

    Labels run from two_s down to two_s mod 2 in steps of 2 (one per
    polynomial term); no constraints beyond finiteness. For integer s the
    lowest term is self-conjugate, so only Re(beta_0) is observable.
    """

    two_s: int
    betas: Mapping[int, complex]

    def __post_init__(self) -> None:
        if not isinstance(self.two_s, (int, np.integer)) or self.two_s < 0:
            raise ValueError(f"two_s must be a nonnegative integer, got {self.two_s!r}")
        clean = _validate_labels("betas", self.betas, _beta_labels(self.two_s))
        object.__setattr__(self, "betas", clean)

    @property
    def two_k_values(self) -> tuple[int, ...]:
        return _beta_labels(self.two_s)


@dataclass(frozen=True)
class MuMatrix:
    """The interaction matrix at a fixed direction angle phi."""

    two_s: int
    phi: float
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.two_s + 1


def _mu_matrix_raw(spec: InteractionSpec, phi: float) -> np.ndarray:
    """Anti-diagonal matrix from raw alphas, no hermiticity check."""
    dim = spec.two_s + 1
    m = np.zeros((dim, dim), dtype=complex)
    for two_k in spec.two_k_values:
        row = (spec.two_s - two_k) // 2
        col = (spec.two_s + two_k) // 2
        m[row, col] = spec.alphas[two_k] * cmath.exp(-1j * two_k * phi)
    return m


def mu_from_alphas(
    spec: InteractionSpec, phi: float, *, validate: bool = True
) -> MuMatrix:
    """Interaction matrix mu_{k,-k} = alpha_k exp(-2i k phi).

    With validate=True (default) a non-hermitian spec is rejected;
    validate=False builds the raw matrix for diagnostics and controls.
    """
    if validate:
        spec.validate()
    m = _mu_matrix_raw(spec, float(phi))
    m.setflags(write=False)
    return MuMatrix(two_s=spec.two_s, phi=float(phi), matrix=m)


def mu_from_betas(bspec: BetaSpec, phi: float) -> MuMatrix:
    """Interaction matrix from the operator-polynomial form.

    Term j contributes beta_{s-j} * L_j (sp n_-)^(2s-2j) R_j + h.c. with
    L_j = prod_{i<j}(sz - s + i), R_j = prod_{i<j}(sz + s - i). The fringe
    multipliers zero out every matrix element of the sp power except the
    one connecting |s,-(s-j)> to |s,s-j>, which keeps the sum anti-diagonal.
    """
    phi = float(phi)
    rep = build_spin_rep(bspec.two_s)
    dim = rep.dim
    s = rep.s
    eye = np.eye(dim)
    m = np.zeros((dim, dim), dtype=complex)
    left = eye
    right = eye
    for j, two_k in enumerate(bspec.two_k_values):
        if j > 0:
            left = left @ (rep.sz - (s - (j - 1)) * eye)
            right = right @ (rep.sz + (s - (j - 1)) * eye)
        core = np.linalg.matrix_power(rep.sp, two_k)  # sp^(2s - 2j)
        phase = cmath.exp(-1j * two_k * phi)  # n_-^(2s - 2j)
        term = bspec.betas[two_k] * phase * (left @ core @ right)
        m += term + term.conj().T
    m.setflags(write=False)
    return MuMatrix(two_s=bspec.two_s, phi=phi, matrix=m)


def betas_to_alphas(bspec: BetaSpec) -> InteractionSpec:
    """Convert polynomial coefficients to anti-diagonal parameters.

    Defined by evaluating mu_from_betas at phi = 0 and reading the
    anti-diagonal. The result is hermitian by construction; for integer s
    the self-conjugate lowest term makes alpha_0 = 2 Re(beta_0) times the
    fringe product, absorbing the double-counted real part.
    """
    m0 = mu_from_betas(bspec, 0.0).matrix
    two_s = bspec.two_s
    alphas: dict[int, complex] = {}
    for two_k in _alpha_labels(two_s):
        row = (two_s - two_k) // 2
        col = (two_s + two_k) // 2
        alphas[two_k] = m0[row, col]
    return InteractionSpec(two_s=two_s, alphas=alphas)


def mu_difference(
    spec: InteractionSpec, bspec: BetaSpec, angles: Sequence[float]
) -> float:
    """Max elementwise |mu(alphas) - mu(betas)| over the given angles.

    The two parameterizations describe the same matrix family, so for a
    consistent pair this is zero up to roundoff; a large value flags
    coefficients that do not describe the same interaction.
    """
    if spec.two_s != bspec.two_s:
        raise ValueError(
            f"spin mismatch: alphas have two_s={spec.two_s}, betas {bspec.two_s}"
        )
    worst = 0.0
    for phi in angles:
        ma = mu_from_alphas(spec, float(phi), validate=False).matrix
        mb = mu_from_betas(bspec, float(phi)).matrix
        worst = max(worst, float(np.max(np.abs(ma - mb))))
    return worst


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    max_violation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tol


@dataclass(frozen=True)
class ConditionReport:
    """Structural check results for one interaction spec."""

    two_s: int
    checks: tuple[ConditionCheck, ...]
    angles: tuple[float, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> ConditionCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.checks if not c.passed)


def check_conditions(
    spec: InteractionSpec,
    *,
    angles: Sequence[float] | None = None,
    tol: float = 1e-13,
    mu_builder: Callable[[float], np.ndarray] | None = None,
) -> ConditionReport:
    """Verify the four structural conditions on mu at sampled angles.

    Checks, each reported with its max violation over the angles:
      anti_diagonal        mu_{k,k'} = 0 unless k + k' = 0
      sz_anticommutation   sz mu + mu sz = 0
      rotation_covariance  mu(phi) = exp(-i sz phi) mu(0) exp(i sz phi)
      hermiticity          mu(phi) = mu(phi)^dagger

    mu_builder overrides matrix construction (signature phi -> matrix),
    which lets tests inject hand-built defects; by default the raw
    anti-diagonal constructor is used so that broken specs are measured
    rather than rejected. Violations are scaled by max(1, max |entry|).
    """
    if angles is None:
        angles = _CHECK_ANGLES
    angles = tuple(float(a) for a in angles)
    if not angles:
        raise ValueError("need at least one sampling angle")
    if mu_builder is None:
        mu_builder = lambda phi: _mu_matrix_raw(spec, phi)

    rep = build_spin_rep(spec.two_s)
    dim = rep.dim
    anti_mask = ~np.equal.outer(np.arange(dim), dim - 1 - np.arange(dim))
    half_two_k = rep.two_k_values / 2.0

    m0 = np.asarray(mu_builder(0.0), dtype=complex)
    if m0.shape != (dim, dim):
        raise ValueError(f"mu builder returned shape {m0.shape}, expected {(dim, dim)}")

    v_anti = v_acomm = v_rot = v_herm = 0.0
    scale = max(1.0, float(np.max(np.abs(m0))))
    for phi in angles:
        m = np.asarray(mu_builder(phi), dtype=complex)
        scale = max(scale, float(np.max(np.abs(m))))
        v_anti = max(v_anti, float(np.max(np.abs(m[anti_mask]), initial=0.0)))
        v_acomm = max(v_acomm, float(np.max(np.abs(rep.sz @ m + m @ rep.sz))))
        ph = np.exp(-1j * half_two_k * phi)
        v_rot = max(v_rot, float(np.max(np.abs(m - ph[:, None] * m0 * ph.conj()[None, :]))))
        v_herm = max(v_herm, float(np.max(np.abs(m - m.conj().T))))

    checks = (
        ConditionCheck("anti_diagonal", v_anti / scale, tol),
        ConditionCheck("sz_anticommutation", v_acomm / scale, tol),
        ConditionCheck("rotation_covariance", v_rot / scale, tol),
        ConditionCheck("hermiticity", v_herm / scale, tol),
    )
    return ConditionReport(two_s=spec.two_s, checks=checks, angles=angles)


def mu_squared_diagonal(spec: InteractionSpec) -> np.ndarray:
    """Diagonal of mu(phi)^2 in basis order, |alpha_k|^2 for each k.

    Independent of phi: the angular phases of the two anti-diagonal hops
    cancel, which is what makes the predicted spectrum angle-free.
    """
    spec.validate()
    return np.array([abs(spec.alphas[two_k]) ** 2 for two_k in spec.two_k_values])


def _dipole(two_s: int, k: float) -> InteractionSpec:
    if two_s != 1:
        raise ValueError(f"preset 'dipole' is spin-1/2 only, got two_s={two_s}")
    k = float(k)
    return InteractionSpec(two_s=1, alphas={1: -1j * k, -1: 1j * k})


def _dipole_electric(two_s: int, a: float, b: float) -> InteractionSpec:
    if two_s != 1:
        raise ValueError(f"preset 'dipole_electric' is spin-1/2 only, got two_s={two_s}")
    # sign of a is a phase convention: only a^2 + b^2 is observable, and
    # this choice makes dipole_electric(k, 0) == dipole(k)
    z = complex(float(b), -float(a))
    return InteractionSpec(two_s=1, alphas={1: z, -1: z.conjugate()})


PRESET_NAMES = ("dipole", "dipole_electric")


def preset(name: str, two_s: int, **params: float) -> InteractionSpec:
    """Named interaction presets.

    dipole(k): magnetic point dipole, alpha_{1/2} = -i k. The normalization
    treats the spin-1/2 operators as full Pauli matrices, which is the
    convention under which the solver reproduces the -(m k^2/2)/(n+1)^2
    ground tower. dipole_electric(a, b): two-parameter planar dipole,
    alpha_{1/2} = -i a + b.
    """
    if name == "dipole":
        wanted = {"k"}
        if set(params) != wanted:
            raise ValueError(f"preset 'dipole' takes parameters {sorted(wanted)}, got {sorted(params)}")
        return _dipole(two_s, params["k"])
    if name == "dipole_electric":
        wanted = {"a", "b"}
        if set(params) != wanted:
            raise ValueError(
                f"preset 'dipole_electric' takes parameters {sorted(wanted)}, got {sorted(params)}"
            )
        return _dipole_electric(two_s, params["a"], params["b"])
    raise ValueError(f"unknown preset {name!r}; known presets: {', '.join(PRESET_NAMES)}")
