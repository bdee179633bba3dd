"""Dense spin matrices in the |s, k> basis, ordered by descending k.

Half-integer spins are represented exactly with doubled integers
(two_s = 2s, two_k = 2k); floats appear only inside matrix entries.
Basis index i corresponds to two_k = two_s - 2i, so index 0 is the
highest weight k = s and index 2s is k = -s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SpinRep", "build_spin_rep"]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpinRep:
    """Spin-s operator matrices on the (two_s + 1)-dimensional module.

    sz, sp, sm, sx are real; sy is complex. All arrays are read-only.
    sp and sm are exact transposes, sx = (sp + sm)/2, sy = (sp - sm)/2i.
    """

    two_s: int
    sz: np.ndarray
    sp: np.ndarray
    sm: np.ndarray
    sx: np.ndarray
    sy: np.ndarray

    @property
    def dim(self) -> int:
        return self.two_s + 1

    @property
    def s(self) -> float:
        return self.two_s / 2.0

    @property
    def two_k_values(self) -> np.ndarray:
        """Doubled magnetic labels in basis order (descending)."""
        return np.arange(self.two_s, -self.two_s - 1, -2)

    @property
    def casimir(self) -> float:
        """s(s + 1), exact in double precision for any sane two_s."""
        return self.two_s * (self.two_s + 2) / 4.0

    def index_of(self, two_k: int) -> int:
        """Basis index of the |s, k> state with doubled label two_k."""
        if (two_k - self.two_s) % 2 != 0 or abs(two_k) > self.two_s:
            raise ValueError(
                f"two_k={two_k} is not a magnetic label for two_s={self.two_s}"
            )
        return (self.two_s - two_k) // 2


def build_spin_rep(two_s: int) -> SpinRep:
    """Build the spin matrices for doubled spin two_s >= 0.

    Conventions: sz|s,k> = k|s,k>, sp|s,k> = sqrt(s(s+1) - k(k+1))|s,k+1>,
    sm|s,k> = sqrt(s(s+1) - k(k-1))|s,k-1>. With descending basis order the
    sp amplitudes sit on the first superdiagonal.
    """
    if not isinstance(two_s, (int, np.integer)) or isinstance(two_s, bool):
        raise ValueError(f"two_s must be an integer, got {two_s!r}")
    two_s = int(two_s)
    if two_s < 0:
        raise ValueError(f"two_s must be >= 0, got {two_s}")

    k = np.arange(two_s, -two_s - 1, -2) / 2.0
    casimir = two_s * (two_s + 2) / 4.0
    # raising amplitude out of each k except the highest (k[1:] in this order)
    amp = np.sqrt(casimir - k[1:] * (k[1:] + 1.0))
    sz = np.diag(k)
    sp = np.diag(amp, k=1)
    sm = sp.T.copy()
    sx = (sp + sm) / 2.0
    sy = (sp - sm) / 2.0j
    return SpinRep(
        two_s=two_s,
        sz=_frozen(sz),
        sp=_frozen(sp),
        sm=_frozen(sm),
        sx=_frozen(sx),
        sy=_frozen(sy),
    )
